//
// Copyright 2026 The dpmc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPMC_ERRORS_HPP_
#define DPMC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dpmc {

// Matrix dimension mismatch between operands.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// A root search was asked to find a target outside [f(lo), f(hi)].
class BracketError : public std::invalid_argument {
 public:
  explicit BracketError(const std::string& what) : std::invalid_argument(what) {}
};

// An iterative solve hit its iteration cap before reaching tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// A factor matrix is singular (or numerically indistinguishable from it).
class ConditioningError : public std::runtime_error {
 public:
  explicit ConditioningError(const std::string& what) : std::runtime_error(what) {}
};

// A utility subspace with no nonzero singular value admits no design.
class DegenerateSubspaceError : public std::invalid_argument {
 public:
  explicit DegenerateSubspaceError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Input exceeds the documented size cap of a brute-force routine.
class ScaleError : public std::invalid_argument {
 public:
  explicit ScaleError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed matrix file.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dpmc

#endif  // DPMC_ERRORS_HPP_
