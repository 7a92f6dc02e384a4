// Copyright 2026 The RQSVR Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Exception types shared by all rqsvr modules.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace rqsvr {

/// Caller passed an argument outside an operation's precondition.
class ArgumentError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A value failed a domain check (non-unitary entries, out-of-range data).
class ValidationError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Inputs for which the requested construction is undefined, e.g. a zero
/// norm or a constant feature column.
class DegenerateInputError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// An object was used before it reached the required state.
class StateError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Malformed input file. Row numbers are 1-based and count the header.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::string source, std::size_t row, std::string column,
               const std::string &what)
        : std::runtime_error(source + ":" + std::to_string(row) + ": column '" +
                             column + "': " + what),
          source_(std::move(source)), row_(row), column_(std::move(column)) {}

    [[nodiscard]] const std::string &source() const noexcept { return source_; }
    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] const std::string &column() const noexcept { return column_; }

  private:
    std::string source_;
    std::size_t row_;
    std::string column_;
};

} // namespace rqsvr
