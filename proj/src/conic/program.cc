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

#include "eqscope/conic/program.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "eqscope/core/errors.h"

namespace eqscope::conic {
namespace {

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string SanitizeName(const std::string& name) {
  if (name.empty()) return "-";
  std::string out = name;
  for (char& ch : out) {
    if (std::isspace(static_cast<unsigned char>(ch))) ch = '_';
  }
  return out;
}

void WriteExpr(std::ostream& out, const LinExpr& e) {
  out << "[ " << FormatDouble(e.constant()) << " " << e.terms().size();
  for (const auto& [idx, coef] : e.terms()) {
    out << " " << idx << ":" << FormatDouble(coef);
  }
  out << " ]";
}

void WriteExprList(std::ostream& out, const std::vector<LinExpr>& list) {
  out << " " << list.size();
  for (const LinExpr& e : list) {
    out << " ";
    WriteExpr(out, e);
  }
}

const char* RelationName(Relation r) {
  switch (r) {
    case Relation::kLessEqual:
      return "le";
    case Relation::kEqual:
      return "eq";
    case Relation::kGreaterEqual:
      return "ge";
  }
  return "le";
}

const char* KindName(VariableKind k) {
  switch (k) {
    case VariableKind::kScalar:
      return "scalar";
    case VariableKind::kMatrix:
      return "matrix";
    case VariableKind::kSymmetric:
      return "symmetric";
  }
  return "scalar";
}

class TokenReader {
 public:
  explicit TokenReader(std::string_view text) : in_(std::string(text)) {}

  std::string Next() {
    std::string tok;
    if (!(in_ >> tok)) throw DomainError("unexpected end of program text");
    return tok;
  }
  void Expect(const std::string& want) {
    const std::string got = Next();
    if (got != want) {
      throw DomainError("expected '" + want + "' in program text, got '" +
                        got + "'");
    }
  }
  double Double() {
    const std::string tok = Next();
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
      throw DomainError("bad number '" + tok + "' in program text");
    }
    return v;
  }
  int Int() {
    const std::string tok = Next();
    size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw DomainError("bad integer '" + tok + "'");
    return v;
  }
  LinExpr Expr() {
    Expect("[");
    LinExpr e(Double());
    const int n = Int();
    for (int t = 0; t < n; ++t) {
      const std::string tok = Next();
      const size_t colon = tok.find(':');
      if (colon == std::string::npos) throw DomainError("bad term " + tok);
      const int idx = std::stoi(tok.substr(0, colon));
      const double coef = std::strtod(tok.c_str() + colon + 1, nullptr);
      e += LinExpr::Term(idx, coef);
    }
    Expect("]");
    return e;
  }
  std::vector<LinExpr> ExprList() {
    const int n = Int();
    std::vector<LinExpr> out;
    out.reserve(n);
    for (int t = 0; t < n; ++t) out.push_back(Expr());
    return out;
  }

 private:
  std::istringstream in_;
};

void CheckExpr(const LinExpr& e, int num_scalars, const std::string& where,
               std::vector<std::string>& diagnostics) {
  if (!std::isfinite(e.constant())) {
    diagnostics.push_back(where + ": non-finite constant");
  }
  for (const auto& [idx, coef] : e.terms()) {
    if (idx < 0 || idx >= num_scalars) {
      diagnostics.push_back(where + ": references undeclared variable x" +
                            std::to_string(idx));
    }
    if (!std::isfinite(coef)) {
      diagnostics.push_back(where + ": non-finite coefficient on x" +
                            std::to_string(idx));
    }
  }
}

}  // namespace

LinExpr LinExpr::Term(int index, double coef) {
  LinExpr e;
  if (coef != 0.0) e.terms_.emplace_back(index, coef);
  return e;
}

LinExpr& LinExpr::operator+=(const LinExpr& other) {
  constant_ += other.constant_;
  if (other.terms_.empty()) return *this;
  std::vector<std::pair<int, double>> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == terms_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      const double sum = a->second + b->second;
      if (sum != 0.0) merged.emplace_back(a->first, sum);
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& other) { return *this += -other; }

LinExpr& LinExpr::operator*=(double s) {
  constant_ *= s;
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& term : terms_) term.second *= s;
  return *this;
}

LinExpr LinExpr::operator-() const {
  LinExpr out = *this;
  out *= -1.0;
  return out;
}

double LinExpr::Evaluate(std::span<const double> x) const {
  double v = constant_;
  for (const auto& [idx, coef] : terms_) v += coef * x[idx];
  return v;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator*(LinExpr a, double s) { return a *= s; }
LinExpr operator*(double s, LinExpr a) { return a *= s; }

int Variable::size() const {
  return kind_ == VariableKind::kSymmetric ? rows_ * (rows_ + 1) / 2
                                           : rows_ * cols_;
}

int Variable::index(int r, int c) const {
  if (r < 0 || c < 0 || r >= rows_ || c >= cols_) {
    throw ShapeError("variable index out of range");
  }
  if (kind_ == VariableKind::kSymmetric) {
    if (r < c) std::swap(r, c);
    return offset_ + r * (r + 1) / 2 + c;
  }
  return offset_ + r * cols_ + c;
}

Variable Program::AddBlock(VariableKind kind, int rows, int cols,
                           const std::string& name) {
  if (rows < 1 || cols < 1) throw ShapeError("variable block must be nonempty");
  Variable v(static_cast<int>(variables_.size()), kind, num_scalars_, rows,
             cols);
  num_scalars_ += v.size();
  variables_.push_back({v, SanitizeName(name)});
  return v;
}

Variable Program::AddScalar(const std::string& name) {
  return AddBlock(VariableKind::kScalar, 1, 1, name);
}

Variable Program::AddMatrix(int rows, int cols, const std::string& name) {
  return AddBlock(VariableKind::kMatrix, rows, cols, name);
}

Variable Program::AddSymmetric(int size, const std::string& name) {
  return AddBlock(VariableKind::kSymmetric, size, size, name);
}

void Program::AddLessEqual(const LinExpr& lhs, const LinExpr& rhs) {
  linear_.push_back({lhs - rhs, Relation::kLessEqual});
}

void Program::AddEqual(const LinExpr& lhs, const LinExpr& rhs) {
  linear_.push_back({lhs - rhs, Relation::kEqual});
}

void Program::AddGreaterEqual(const LinExpr& lhs, const LinExpr& rhs) {
  linear_.push_back({lhs - rhs, Relation::kGreaterEqual});
}

void Program::AddLinear(LinearConstraint constraint) {
  linear_.push_back(std::move(constraint));
}

void Program::AddSoc(LinExpr t, std::vector<LinExpr> x) {
  soc_.push_back({std::move(t), std::move(x)});
}

void Program::AddSquaredNorm(std::vector<LinExpr> x, LinExpr bound) {
  squared_norm_.push_back({std::move(x), std::move(bound)});
}

void Program::AddPsd(int size, std::vector<LinExpr> lower) {
  psd_.push_back({size, std::move(lower)});
}

void Program::AddPsd(const Variable& symmetric) {
  std::vector<LinExpr> lower;
  for (int r = 0; r < symmetric.rows(); ++r) {
    for (int c = 0; c <= r; ++c) lower.push_back(symmetric(r, c));
  }
  AddPsd(symmetric.rows(), std::move(lower));
}

void Program::Minimize(LinExpr linear, std::vector<LinExpr> squares) {
  objective_ = {Sense::kMinimize, std::move(linear), std::move(squares)};
}

void Program::Maximize(LinExpr linear) {
  objective_ = {Sense::kMaximize, std::move(linear), {}};
}

bool Program::HasConicConstraints() const {
  return !soc_.empty() || !squared_norm_.empty() || !psd_.empty() ||
         !objective_.squares.empty();
}

std::vector<std::string> Program::Validate() const {
  std::vector<std::string> diagnostics;
  const int n = num_scalars_;
  CheckExpr(objective_.linear, n, "objective", diagnostics);
  for (size_t s = 0; s < objective_.squares.size(); ++s) {
    CheckExpr(objective_.squares[s], n, "objective square " + std::to_string(s),
              diagnostics);
  }
  if (objective_.sense == Sense::kMaximize && !objective_.squares.empty()) {
    diagnostics.push_back(
        "objective: quadratic objective not in sum-of-squares form (a "
        "maximized sum of squares is not convex)");
  }
  for (size_t c = 0; c < linear_.size(); ++c) {
    CheckExpr(linear_[c].expr, n, "linear " + std::to_string(c), diagnostics);
  }
  for (size_t c = 0; c < soc_.size(); ++c) {
    const std::string where = "soc " + std::to_string(c);
    CheckExpr(soc_[c].t, n, where, diagnostics);
    for (const LinExpr& e : soc_[c].x) CheckExpr(e, n, where, diagnostics);
  }
  for (size_t c = 0; c < squared_norm_.size(); ++c) {
    const std::string where = "squared norm " + std::to_string(c);
    CheckExpr(squared_norm_[c].bound, n, where, diagnostics);
    for (const LinExpr& e : squared_norm_[c].x) {
      CheckExpr(e, n, where, diagnostics);
    }
  }
  for (size_t c = 0; c < psd_.size(); ++c) {
    const std::string where = "psd " + std::to_string(c);
    const int size = psd_[c].size;
    if (size < 1 ||
        static_cast<int>(psd_[c].lower.size()) != size * (size + 1) / 2) {
      diagnostics.push_back(where + ": expected " +
                            std::to_string(size * (size + 1) / 2) +
                            " lower-triangle entries for size " +
                            std::to_string(size));
    }
    for (const LinExpr& e : psd_[c].lower) CheckExpr(e, n, where, diagnostics);
  }
  return diagnostics;
}

std::string Program::ToText() const {
  std::ostringstream out;
  out << "eqscope-program 1\n";
  for (const VariableInfo& v : variables_) {
    out << "var " << KindName(v.handle.kind()) << " " << v.handle.rows() << " "
        << v.handle.cols() << " " << v.name << "\n";
  }
  out << "objective "
      << (objective_.sense == Sense::kMinimize ? "min" : "max") << " ";
  WriteExpr(out, objective_.linear);
  out << " squares";
  WriteExprList(out, objective_.squares);
  out << "\n";
  for (const LinearConstraint& c : linear_) {
    out << "linear " << RelationName(c.relation) << " ";
    WriteExpr(out, c.expr);
    out << "\n";
  }
  for (const SocConstraint& c : soc_) {
    out << "soc ";
    WriteExpr(out, c.t);
    WriteExprList(out, c.x);
    out << "\n";
  }
  for (const SquaredNormConstraint& c : squared_norm_) {
    out << "sqnorm ";
    WriteExpr(out, c.bound);
    WriteExprList(out, c.x);
    out << "\n";
  }
  for (const PsdConstraint& c : psd_) {
    out << "psd " << c.size;
    WriteExprList(out, c.lower);
    out << "\n";
  }
  out << "end\n";
  return out.str();
}

Program Program::FromText(std::string_view text) {
  TokenReader in(text);
  in.Expect("eqscope-program");
  in.Expect("1");
  Program program;
  while (true) {
    const std::string tag = in.Next();
    if (tag == "end") break;
    if (tag == "var") {
      const std::string kind = in.Next();
      const int rows = in.Int();
      const int cols = in.Int();
      std::string name = in.Next();
      if (name == "-") name.clear();
      if (kind == "scalar") {
        program.AddScalar(name);
      } else if (kind == "matrix") {
        program.AddMatrix(rows, cols, name);
      } else if (kind == "symmetric") {
        program.AddSymmetric(rows, name);
      } else {
        throw DomainError("unknown variable kind '" + kind + "'");
      }
    } else if (tag == "objective") {
      const std::string sense = in.Next();
      Objective obj;
      obj.sense = sense == "max" ? Sense::kMaximize : Sense::kMinimize;
      obj.linear = in.Expr();
      in.Expect("squares");
      obj.squares = in.ExprList();
      program.objective_ = std::move(obj);
    } else if (tag == "linear") {
      const std::string rel = in.Next();
      LinearConstraint c;
      c.relation = rel == "eq"   ? Relation::kEqual
                   : rel == "ge" ? Relation::kGreaterEqual
                                 : Relation::kLessEqual;
      c.expr = in.Expr();
      program.linear_.push_back(std::move(c));
    } else if (tag == "soc") {
      SocConstraint c;
      c.t = in.Expr();
      c.x = in.ExprList();
      program.soc_.push_back(std::move(c));
    } else if (tag == "sqnorm") {
      SquaredNormConstraint c;
      c.bound = in.Expr();
      c.x = in.ExprList();
      program.squared_norm_.push_back(std::move(c));
    } else if (tag == "psd") {
      PsdConstraint c;
      c.size = in.Int();
      c.lower = in.ExprList();
      program.psd_.push_back(std::move(c));
    } else {
      throw DomainError("unknown record '" + tag + "' in program text");
    }
  }
  return program;
}

}  // namespace eqscope::conic
