// Copyright 2026 The Jolt Authors.
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

#ifndef JOLT_ERRORS_HPP_
#define JOLT_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jolt {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: schema mismatch, precondition violation, malformed config.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A cell-level problem while ingesting tabular data. Row and column are
// zero-based; row counts data rows (the header is not row 0).
class DataError : public ValidationError {
 public:
  DataError(std::size_t row, std::string column, const std::string& what)
      : ValidationError("row " + std::to_string(row) + ", column '" + column +
                        "': " + what),
        row_(row),
        column_(std::move(column)) {}

  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

// The language-model backend failed or could not be reached.
class BackendError : public Error {
 public:
  using Error::Error;
};

// Rejection sampling exhausted its attempt budget for a sample slot.
class SamplingError : public Error {
 public:
  SamplingError(const std::string& what, double acceptance_rate)
      : Error(what), acceptance_rate_(acceptance_rate) {}

  double acceptance_rate() const { return acceptance_rate_; }

 private:
  double acceptance_rate_;
};

}  // namespace jolt

#endif  // JOLT_ERRORS_HPP_
