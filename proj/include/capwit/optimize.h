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

#ifndef CAPWIT_OPTIMIZE_H
#define CAPWIT_OPTIMIZE_H

#include <functional>
#include <span>
#include <vector>

namespace capwit {

struct NelderMeadOptions {
  double initial_step = 0.1;
  /// Stop when the spread of simplex values and the simplex diameter both fall
  /// below these.
  double f_tolerance = 1e-13;
  double x_tolerance = 1e-9;
  int max_evaluations = 4000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0;
  int evaluations = 0;
};

/// Derivative-free minimization with the standard reflection / expansion /
/// contraction / shrink coefficients (1, 2, 1/2, 1/2). Deterministic. The
/// starting point is kept unless a strictly better point is found.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> start,
                             const NelderMeadOptions& options = {});

}  // namespace capwit

#endif  // CAPWIT_OPTIMIZE_H
