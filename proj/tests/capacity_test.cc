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

#include "capwit/capacity.h"

#include <cmath>
#include <random>

#include "capwit/errors.h"
#include "gtest/gtest.h"
#include "test_util.h"

using namespace capwit;

namespace {

// Termwise in long double.
long double h2(long double x) {
  auto h = [](long double y) { return y <= 0 ? 0.0L : -y * std::log2(y); };
  return h(x) + h(1 - x);
}

long double capacity_oracle(long double p, long double mu) {
  return 2 - p * h2((1 - p) * (1 - mu)) - (1 - p) * h2(p * (1 - mu)) - h2(p);
}

}  // namespace

TEST(capacity, exact_capacity_examples) {
  EXPECT_NEAR(exact_capacity({0.5, 1}), 1, 1e-15);
  EXPECT_NEAR(exact_capacity({0.5, 0}), 0, 1e-15);
  EXPECT_NEAR(exact_capacity({0.5, 0.5}), 0.188722, 1e-6);
  EXPECT_NEAR(exact_capacity({0.5, 0.5}), static_cast<double>(1 - h2(0.25L)), 1e-14);
  EXPECT_NEAR(exact_capacity({0.375, 0.2}), static_cast<double>(capacity_oracle(0.375L, 0.2L)), 1e-14);
  EXPECT_THROW(exact_capacity({-0.1, 0.5}), DomainError);
}

TEST(capacity, exact_capacity_symmetry_and_monotonicity) {
  for (int ip = 0; ip <= 10; ++ip) {
    const double p = ip / 10.0;
    double prev = -1;
    for (int im = 0; im <= 10; ++im) {
      const double mu = im / 10.0;
      const double q = exact_capacity({p, mu});
      EXPECT_NEAR(q, exact_capacity({1 - p, mu}), 1e-12);
      EXPECT_GE(q, prev - 1e-12);
      EXPECT_GE(q, -1e-12);
      EXPECT_LE(q, 2 + 1e-12);
      prev = q;
    }
    EXPECT_NEAR(exact_capacity({p, 0}), 2 * dephasing_capacity(p), 1e-12);
  }
}

TEST(capacity, dephasing_capacity_examples) {
  EXPECT_NEAR(dephasing_capacity(0), 1, 1e-15);
  EXPECT_NEAR(dephasing_capacity(0.5), 0, 1e-15);
  EXPECT_NEAR(dephasing_capacity(0.25), 0.188722, 1e-6);
  EXPECT_THROW(dephasing_capacity(1.5), DomainError);
}

TEST(capacity, report_invariants) {
  for (double p : {0.1, 0.25, 0.5}) {
    for (double mu : {0.0, 0.5, 1.0}) {
      const auto r = capacity_report({p, mu});
      EXPECT_NEAR(r.q_lim, r.q1 + r.q2, 1e-12);
      EXPECT_GE(*r.q_exact, r.q_lim - 1e-9);
    }
  }
}

TEST(capacity, coherent_information_examples) {
  const KrausChannel id = PauliChannel::identity(1).to_kraus();
  CMatrix pure(2);
  pure(0, 0) = 1;
  EXPECT_NEAR(coherent_information(id, pure), 0, 1e-12);
  EXPECT_NEAR(coherent_information(id, CMatrix::identity(2) * Complex(0.5)), 1, 1e-12);

  const KrausChannel full = correlated_channel({0.5, 1}).to_kraus();
  const double ic = coherent_information(full, CMatrix::identity(4) * Complex(0.25));
  EXPECT_NEAR(ic, 1, 1e-10);
  EXPECT_NEAR(ic, exact_capacity({0.5, 1}), 1e-10);
}

TEST(capacity, pauli_coherent_information_examples) {
  EXPECT_NEAR(pauli_coherent_information(PauliChannel(1, {{"I", 1.0}})), 1, 1e-15);
  for (double p : {0.1, 0.3, 0.5}) {
    EXPECT_NEAR(pauli_coherent_information(correlated_channel({p, 1})), 2 - binary_entropy(p), 1e-12);
  }
  EXPECT_NEAR(pauli_coherent_information(correlated_channel({0.375, 0.2})), 0.119759, 1e-5);
}

TEST(capacity, single_letter_coherent_information_attains_capacity) {
  for (int ip = 0; ip < 10; ++ip) {
    for (int im = 0; im < 10; ++im) {
      const ChannelParams params{ip / 9.0, im / 9.0};
      EXPECT_NEAR(exact_capacity(params), pauli_coherent_information(correlated_channel(params)), 1e-10);
    }
  }
}

TEST(capacity, pauli_form_matches_kraus_form) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = trial % 2 + 1;
    const auto ch = capwit::testing::random_pauli_channel(n, rng);
    const std::size_t d = std::size_t{1} << n;
    const double ic = coherent_information(ch.to_kraus(), CMatrix::identity(d) * Complex(1.0 / static_cast<double>(d)));
    EXPECT_NEAR(ic, pauli_coherent_information(ch), 1e-10);
  }
}

TEST(capacity, coherent_information_below_output_entropy) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ch = capwit::testing::random_pauli_channel(2, rng);
    const CMatrix rho = capwit::testing::random_density(4, rng);
    const KrausChannel k = ch.to_kraus();
    const double ic = coherent_information(k, rho);
    EXPECT_LE(ic, von_neumann_entropy(k.apply(rho)) + 1e-10);
    EXPECT_LE(std::abs(ic), 2 + 1e-10);
  }
}

TEST(capacity, coherent_information_dimension_mismatch) {
  EXPECT_THROW(coherent_information(PauliChannel::identity(1).to_kraus(), CMatrix::identity(4) * Complex(0.25)),
               ValidationError);
}
