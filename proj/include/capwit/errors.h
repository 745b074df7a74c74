// Copyright 2026 The capwit Authors
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

#ifndef CAPWIT_ERRORS_H
#define CAPWIT_ERRORS_H

#include <stdexcept>
#include <string>

namespace capwit {

/// Malformed operands: dimension mismatch, non-Hermitian input, bad trace.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parameter outside the domain of a formula.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Input data that is well-formed but physically inconsistent (e.g. a
/// probability below the regularization floor) or schema violations in files.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace capwit

#endif  // CAPWIT_ERRORS_H
