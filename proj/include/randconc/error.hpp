/*
 * Copyright (c) 2026, The randconc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RANDCONC_ERROR_HPP
#define RANDCONC_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace randconc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (probability out of range,
/// empty process set, malformed index set, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// An execution did not terminate within the step budget it was given.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// An objective was evaluated on a configuration whose result thread is
/// stuck, or a program deadlocked.
class StuckProgram : public Error {
 public:
  using Error::Error;
};

/// Internal consistency check failed (mass conservation, LP certificate).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace randconc

#endif  // RANDCONC_ERROR_HPP
