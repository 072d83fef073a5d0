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

#ifndef EQSCOPE_UTIL_RNG_H_
#define EQSCOPE_UTIL_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace eqscope {

// Independent mt19937_64 stream for (seed, stream...), e.g. (seed, game,
// observation). The words are mixed through std::seed_seq.
inline std::mt19937_64 StreamRng(uint64_t seed,
                                 std::initializer_list<uint64_t> stream) {
  std::vector<uint32_t> words;
  auto push = [&words](uint64_t v) {
    words.push_back(static_cast<uint32_t>(v));
    words.push_back(static_cast<uint32_t>(v >> 32));
  };
  push(seed);
  for (uint64_t s : stream) push(s);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace eqscope

#endif  // EQSCOPE_UTIL_RNG_H_
