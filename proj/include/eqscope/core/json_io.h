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

#ifndef EQSCOPE_CORE_JSON_IO_H_
#define EQSCOPE_CORE_JSON_IO_H_

#include <string>

#include "eqscope/core/game.h"
#include "json.hpp"

namespace eqscope {

using Json = nlohmann::json;

// Matrices are nested row arrays: [[a00, a01], [a10, a11]].
Json MatrixToJson(const Matrix& m);
Matrix MatrixFromJson(const Json& j);

// {"m1", "m2", "payoff1", "payoff2"}
Json GameToJson(const Game& game);
Game GameFromJson(const Json& j);

// {"model": "partial_payoff" | "shifter" | "none",
//  "observations": [{"e": [[...]], "v": [v1, v2], "beta": <game>}]}
Json ObservationSetToJson(const ObservationSet& observations);
ObservationSet ObservationSetFromJson(const Json& j);

Json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const Json& j);

}  // namespace eqscope

#endif  // EQSCOPE_CORE_JSON_IO_H_
