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

#include "eqscope/core/json_io.h"

#include <fstream>

#include "eqscope/core/errors.h"

namespace eqscope {

Json MatrixToJson(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix MatrixFromJson(const Json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw ShapeError("matrix must be a non-empty array of rows");
  }
  const size_t cols = j.front().size();
  Matrix m(j.size(), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ShapeError("matrix rows differ in length");
    }
    for (size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

Json GameToJson(const Game& game) {
  return Json{{"m1", game.m1()},
              {"m2", game.m2()},
              {"payoff1", MatrixToJson(game.payoff(0))},
              {"payoff2", MatrixToJson(game.payoff(1))}};
}

Game GameFromJson(const Json& j) {
  Game game(MatrixFromJson(j.at("payoff1")), MatrixFromJson(j.at("payoff2")));
  if (j.contains("m1") && j.contains("m2")) {
    CheckShape(game, j.at("m1").get<int>(), j.at("m2").get<int>());
  }
  return game;
}

Json ObservationSetToJson(const ObservationSet& observations) {
  Json list = Json::array();
  for (const Observation& obs : observations.observations()) {
    Json item{{"e", MatrixToJson(obs.equilibrium.probs())}};
    if (obs.payoff_value) {
      item["v"] = {(*obs.payoff_value)[0], (*obs.payoff_value)[1]};
    }
    if (obs.shifter) item["beta"] = GameToJson(*obs.shifter);
    list.push_back(std::move(item));
  }
  return Json{{"model", ToString(observations.model())},
              {"observations", std::move(list)}};
}

ObservationSet ObservationSetFromJson(const Json& j) {
  const ObservationModel model =
      ObservationModelFromString(j.at("model").get<std::string>());
  std::vector<Observation> list;
  for (const Json& item : j.at("observations")) {
    Observation obs;
    obs.equilibrium = CorrelatedEquilibrium(MatrixFromJson(item.at("e")));
    if (item.contains("v")) {
      const Json& v = item.at("v");
      if (!v.is_array() || v.size() != 2) {
        throw ShapeError("payoff value must hold one entry per player");
      }
      obs.payoff_value = std::array<double, 2>{v[0].get<double>(),
                                               v[1].get<double>()};
    }
    if (item.contains("beta")) obs.shifter = GameFromJson(item.at("beta"));
    list.push_back(std::move(obs));
  }
  return ObservationSet(model, std::move(list));
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return Json::parse(in);
}

void WriteJsonFile(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace eqscope
