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

#ifndef CAPWIT_TESTS_TEST_UTIL_H
#define CAPWIT_TESTS_TEST_UTIL_H

#include <map>
#include <random>
#include <string>
#include <vector>

#include "capwit/channels.h"
#include "capwit/qmath.h"

namespace capwit::testing {

inline CMatrix random_matrix(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0, 1);
  CMatrix g(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      g(r, c) = Complex(n(rng), n(rng));
    }
  }
  return g;
}

inline CMatrix random_hermitian(std::size_t dim, std::mt19937_64& rng) {
  const CMatrix g = random_matrix(dim, rng);
  return (g + g.adjoint()) * Complex(0.5);
}

/// G G^dag / Tr, full rank with probability one.
inline CMatrix random_density(std::size_t dim, std::mt19937_64& rng) {
  const CMatrix g = random_matrix(dim, rng);
  CMatrix rho = g * g.adjoint();
  return rho * Complex(1.0 / rho.trace().real());
}

inline PauliChannel random_pauli_channel(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::map<std::string, double> probs;
  double total = 0;
  for (const auto& s : pauli_strings(n)) {
    probs[s] = e(rng);
    total += probs[s];
  }
  for (auto& [s, p] : probs) {
    p /= total;
  }
  return PauliChannel(n, probs);
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  }
  return m;
}

}  // namespace capwit::testing

#endif  // CAPWIT_TESTS_TEST_UTIL_H
