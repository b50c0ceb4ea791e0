// Copyright 2026 The sampled-hr Authors
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

// Exception hierarchy shared by every module.

#ifndef SAMPLED_HR_ERRORS_HPP_
#define SAMPLED_HR_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sampled_hr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument or data outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Inconsistent combination of options or inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Operation not defined for the requested combination (e.g. exact
// expectation under the irrelevant-only scheme).
class UnsupportedError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Numerical failure (overflow, non-finite intermediate).
class ComputationError : public Error {
 public:
  using Error::Error;
};

}  // namespace sampled_hr

#endif  // SAMPLED_HR_ERRORS_HPP_
