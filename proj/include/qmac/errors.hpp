// Copyright 2026 The qmac Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmac {

// Input violates a documented invariant (shape, trace, hermiticity, ...).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& message)
      : std::invalid_argument(message) {}
};

// Input is well formed but outside the mathematical domain of the operation,
// e.g. the square root of an operator with a clearly negative eigenvalue.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& message)
      : std::domain_error(message) {}
};

// A configured size cap would be exceeded.
class CapExceeded : public std::length_error {
 public:
  CapExceeded(const std::string& what_cap, std::size_t required,
              std::size_t configured)
      : std::length_error(
            what_cap + " exceeded: required " + std::to_string(required) +
            ", configured " + std::to_string(configured)),
        required_(required),
        configured_(configured) {}

  std::size_t required() const { return required_; }
  std::size_t configured() const { return configured_; }

 private:
  std::size_t required_;
  std::size_t configured_;
};

// Raised by channel validation; carries every violation found, not just the
// first one.
class ChannelValidationError : public ValidationError {
 public:
  explicit ChannelValidationError(std::vector<std::string> violations)
      : ValidationError(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace qmac
