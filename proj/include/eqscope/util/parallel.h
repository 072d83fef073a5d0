// Copyright 2026 The eqscope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EQSCOPE_UTIL_PARALLEL_H_
#define EQSCOPE_UTIL_PARALLEL_H_

#include <functional>

namespace eqscope {

// Number of workers for a requested job count; 0 means hardware threads.
int ResolveJobs(int jobs);

// Runs body(0), ..., body(count - 1) on up to `jobs` worker threads. Each
// index runs exactly once; the exception of the lowest failing index is
// rethrown after all workers finish.
void ParallelFor(int count, int jobs, const std::function<void(int)>& body);

}  // namespace eqscope

#endif  // EQSCOPE_UTIL_PARALLEL_H_
