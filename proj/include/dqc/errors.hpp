// Copyright 2026 The dqc Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace dqc {

/// A precondition or type invariant was violated by the caller.
class ContractError : public std::invalid_argument {
  public:
    explicit ContractError(const std::string &what) : std::invalid_argument(what) {
    }
};

/// Operand shapes do not fit together, or a dimension exceeds the configured cap.
class DimensionError : public ContractError {
  public:
    explicit DimensionError(const std::string &what) : ContractError(what) {
    }
};

/// The requested computation is well-formed but larger than the configured enumeration cap.
class CapacityError : public std::runtime_error {
  public:
    explicit CapacityError(const std::string &what) : std::runtime_error(what) {
    }
};

/// Malformed external input (JSON, CSV, command-line values).
class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string &what) : std::runtime_error(what) {
    }
};

/// A rate formula's denominator vanished.
class DegenerateRateError : public ContractError {
  public:
    explicit DegenerateRateError(const std::string &what) : ContractError(what) {
    }
};

}  // namespace dqc
