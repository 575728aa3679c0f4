// Copyright 2026 The secswipt Authors
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

#ifndef SECSWIPT_ERRORS_HPP_
#define SECSWIPT_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace secswipt {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad shapes, non-finite entries, out-of-range parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation (e.g. a target
// SINR below the secrecy-implied lower bound).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// An iterative numerical routine failed to converge.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, int iterations)
      : Error(what + " (after " + std::to_string(iterations) + " iterations)"),
        iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

// Operation called on an object in the wrong state.
class StateError : public Error {
 public:
  using Error::Error;
};

// A suboptimal scheme cannot be applied to this system geometry (K >= M).
class SchemeInapplicable : public Error {
 public:
  using Error::Error;
};

// A suboptimal scheme cannot meet the secrecy target even though the
// underlying problem may still be feasible.
class SchemeInfeasible : public Error {
 public:
  using Error::Error;
};

// Channel geometry that makes a closed form undefined.
class DegenerateChannel : public Error {
 public:
  using Error::Error;
};

// The secrecy target exceeds what any beamformer can achieve.
class InfeasibleTarget : public Error {
 public:
  InfeasibleTarget(const std::string& what, double r_max)
      : Error(what), r_max_(r_max) {}
  double r_max() const { return r_max_; }

 private:
  double r_max_;
};

// Rank-one reconstruction did not produce a valid rank-one solution.
class ReconstructionError : public Error {
 public:
  ReconstructionError(const std::string& what, std::vector<double> eigenvalues)
      : Error(what), eigenvalues_(std::move(eigenvalues)) {}
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

 private:
  std::vector<double> eigenvalues_;
};

}  // namespace secswipt

#endif  // SECSWIPT_ERRORS_HPP_
