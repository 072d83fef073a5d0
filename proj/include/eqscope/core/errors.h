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

#ifndef EQSCOPE_CORE_ERRORS_H_
#define EQSCOPE_CORE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace eqscope {

// Dimensions of games, equilibria or observations disagree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A probability matrix, parameter or option is outside its domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation was asked to work on an instance larger than it supports.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// The observation model does not carry the data an operation needs.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The observations do not pin down the game (rank deficiency).
class NotIdentifiableError : public std::runtime_error {
 public:
  NotIdentifiableError(const std::string& what, int rank)
      : std::runtime_error(what), rank_(rank) {}
  int rank() const { return rank_; }

 private:
  int rank_;
};

// A backend could not produce a trustworthy answer.
class SolverTroubleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bisection could not bracket the requested threshold.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A simulator could not produce a valid draw.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eqscope

#endif  // EQSCOPE_CORE_ERRORS_H_
