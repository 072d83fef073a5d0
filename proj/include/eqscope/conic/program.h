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

#ifndef EQSCOPE_CONIC_PROGRAM_H_
#define EQSCOPE_CONIC_PROGRAM_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eqscope/core/game.h"

namespace eqscope::conic {

// Affine expression sum_i coef_i * x_i + constant over the scalar columns of
// a Program. Terms are kept sorted by column with duplicates merged.
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(double constant) : constant_(constant) {}  // NOLINT

  static LinExpr Term(int index, double coef = 1.0);

  const std::vector<std::pair<int, double>>& terms() const { return terms_; }
  double constant() const { return constant_; }
  bool IsConstant() const { return terms_.empty(); }

  LinExpr& operator+=(const LinExpr& other);
  LinExpr& operator-=(const LinExpr& other);
  LinExpr& operator*=(double s);
  LinExpr operator-() const;

  double Evaluate(std::span<const double> x) const;
  bool operator==(const LinExpr& other) const = default;

 private:
  std::vector<std::pair<int, double>> terms_;
  double constant_ = 0.0;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator*(LinExpr a, double s);
LinExpr operator*(double s, LinExpr a);

enum class VariableKind { kScalar, kMatrix, kSymmetric };

// A block of scalar columns. Matrix blocks are stored row-major; symmetric
// blocks store the lower triangle row by row.
class Variable {
 public:
  Variable() = default;
  Variable(int id, VariableKind kind, int offset, int rows, int cols)
      : id_(id), kind_(kind), offset_(offset), rows_(rows), cols_(cols) {}

  int id() const { return id_; }
  VariableKind kind() const { return kind_; }
  int offset() const { return offset_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const;
  int index(int r, int c) const;

  LinExpr operator()(int r, int c) const {
    return LinExpr::Term(index(r, c));
  }
  LinExpr expr() const { return LinExpr::Term(offset_); }

  bool operator==(const Variable& other) const = default;

 private:
  int id_ = -1;
  VariableKind kind_ = VariableKind::kScalar;
  int offset_ = 0;
  int rows_ = 0;
  int cols_ = 0;
};

struct VariableInfo {
  Variable handle;
  std::string name;
  bool operator==(const VariableInfo& other) const = default;
};

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

// expr (relation) 0.
struct LinearConstraint {
  LinExpr expr;
  Relation relation = Relation::kLessEqual;
  bool operator==(const LinearConstraint& other) const = default;
};

// ||x||_2 <= t.
struct SocConstraint {
  LinExpr t;
  std::vector<LinExpr> x;
  bool operator==(const SocConstraint& other) const = default;
};

// sum_i x_i^2 <= bound.
struct SquaredNormConstraint {
  std::vector<LinExpr> x;
  LinExpr bound;
  bool operator==(const SquaredNormConstraint& other) const = default;
};

// The symmetric matrix with lower-triangle entries `lower` (row by row:
// (0,0), (1,0), (1,1), (2,0), ...) is positive semidefinite.
struct PsdConstraint {
  int size = 0;
  std::vector<LinExpr> lower;
  bool operator==(const PsdConstraint& other) const = default;
};

enum class Sense { kMinimize, kMaximize };

// linear + sum_i squares_i^2. Squares are only allowed when minimizing.
struct Objective {
  Sense sense = Sense::kMinimize;
  LinExpr linear;
  std::vector<LinExpr> squares;
  bool operator==(const Objective& other) const = default;
};

// Solver-agnostic convex program over LP, second-order and PSD cones.
class Program {
 public:
  Variable AddScalar(const std::string& name = "");
  Variable AddMatrix(int rows, int cols, const std::string& name = "");
  Variable AddSymmetric(int size, const std::string& name = "");

  void AddLessEqual(const LinExpr& lhs, const LinExpr& rhs);
  void AddEqual(const LinExpr& lhs, const LinExpr& rhs);
  void AddGreaterEqual(const LinExpr& lhs, const LinExpr& rhs);
  void AddLinear(LinearConstraint constraint);
  void AddSoc(LinExpr t, std::vector<LinExpr> x);
  void AddSquaredNorm(std::vector<LinExpr> x, LinExpr bound);
  void AddPsd(int size, std::vector<LinExpr> lower);
  void AddPsd(const Variable& symmetric);

  void Minimize(LinExpr linear, std::vector<LinExpr> squares = {});
  void Maximize(LinExpr linear);
  void SetObjective(Objective objective) { objective_ = std::move(objective); }

  int num_scalars() const { return num_scalars_; }
  const std::vector<VariableInfo>& variables() const { return variables_; }
  const std::vector<LinearConstraint>& linear() const { return linear_; }
  const std::vector<SocConstraint>& soc() const { return soc_; }
  const std::vector<SquaredNormConstraint>& squared_norm() const {
    return squared_norm_;
  }
  const std::vector<PsdConstraint>& psd() const { return psd_; }
  const Objective& objective() const { return objective_; }
  bool HasConicConstraints() const;

  // Human-readable diagnostics; empty when the program is well formed.
  std::vector<std::string> Validate() const;

  // Deterministic text form; FromText(ToText()) == *this.
  std::string ToText() const;
  static Program FromText(std::string_view text);

  bool operator==(const Program& other) const = default;

 private:
  Variable AddBlock(VariableKind kind, int rows, int cols,
                    const std::string& name);

  int num_scalars_ = 0;
  std::vector<VariableInfo> variables_;
  std::vector<LinearConstraint> linear_;
  std::vector<SocConstraint> soc_;
  std::vector<SquaredNormConstraint> squared_norm_;
  std::vector<PsdConstraint> psd_;
  Objective objective_;
};

}  // namespace eqscope::conic

#endif  // EQSCOPE_CONIC_PROGRAM_H_
