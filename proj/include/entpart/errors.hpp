// Copyright 2026 The entpart Authors
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

namespace entpart {

/// Violated precondition on an argument (bad size, index out of range, ...).
class InvalidArgument : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Input that is not valid for the operation's contract (e.g. non-Hermitian matrix).
class ContractViolation : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

/// Experiment configuration that fails validation. `what()` lists every offending field.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed or incompatible data file (dataset, model artifact).
class DataError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Numerical routine failed to produce a usable result.
class NumericError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace entpart
