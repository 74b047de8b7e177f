// Copyright 2026 The rpdhg Authors.
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

#ifndef RPDHG_ERRORS_H_
#define RPDHG_ERRORS_H_

#include <stdexcept>
#include <string>

namespace rpdhg {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: dimension mismatch, non-positive radius, non-interior point.
class InputError : public Error {
 public:
  using Error::Error;
};

// Non-finite values, indefinite norms, divergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Malformed MPS or JSON input. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Structurally infeasible or unbounded models.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Requests outside the supported scope (size guards, cone types).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace rpdhg

#endif  // RPDHG_ERRORS_H_
