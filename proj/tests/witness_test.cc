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

#include "capwit/witness.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "capwit/capacity.h"
#include "capwit/dataio.h"
#include "capwit/errors.h"
#include "gtest/gtest.h"
#include "test_util.h"

using namespace capwit;

namespace {

constexpr double kPi = std::numbers::pi;

BasisSpec random_basis(int n_pairs, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> fam(0, 2);
  std::uniform_real_distribution<double> th(-kPi / 2, kPi / 2);
  BasisSpec b;
  for (int k = 0; k < n_pairs; ++k) {
    b.pairs.push_back({static_cast<BasisFamily>(fam(rng)), th(rng), th(rng)});
  }
  return b;
}

AccessibleChoi appendix_choi(const std::string& name, bool fit) {
  const auto ds = load_appendix(std::string(CAPWIT_DATA_DIR) + "/appendix/" + name);
  return fit ? appendix_to_choi(ds, fit_channel(ds.matrix)) : appendix_to_choi(ds);
}

AccessibleChoi swap_pairs(const AccessibleChoi& t) {
  AccessibleChoi out(2);
  for (int c1 = 0; c1 < kComponentsPerPair; ++c1) {
    for (int c2 = 0; c2 < kComponentsPerPair; ++c2) {
      if (c1 == 0 && c2 == 0) continue;
      out.set(out.index(c2, c1), t.at(t.index(c1, c2)));
    }
  }
  return out;
}

}  // namespace

TEST(witness, bell_basis_members) {
  const auto bell = bell_vectors();
  const auto b1 = basis_vectors(PairBasis{BasisFamily::kB1, 0, 0});
  const auto b2 = basis_vectors(PairBasis{BasisFamily::kB2, 0, 0});
  const std::array<int, 4> b1_order{0, 1, 2, 3};  // Phi+, Phi-, Psi+, Psi-
  const std::array<int, 4> b2_order{0, 2, 1, 3};  // Phi+, Psi+, Phi-, Psi-
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(std::abs(inner(b1[k], bell[b1_order[k]])), 1, 1e-15);
    EXPECT_NEAR(std::abs(inner(b2[k], bell[b2_order[k]])), 1, 1e-15);
  }
}

TEST(witness, b3_vector_carries_imaginary_unit) {
  const auto b3 = basis_vectors(PairBasis{BasisFamily::kB3, kPi / 4, kPi / 4});
  const auto bell = bell_vectors();
  const double r = 1 / std::sqrt(2.0);
  for (std::size_t i = 0; i < 4; ++i) {
    const Complex expected = r * bell[0][i] + Complex(0, r) * bell[3][i];
    EXPECT_NEAR(std::abs(b3[0][i] - expected), 0, 1e-15);
  }
}

TEST(witness, bases_are_orthonormal) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto b = random_basis(1, rng);
    const auto v = basis_vectors(b.pairs[0]);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_NEAR(std::abs(inner(v[i], v[j]) - Complex(i == j ? 1.0 : 0.0)), 0, 1e-12);
      }
    }
  }
}

TEST(witness, component_labels_and_operators) {
  EXPECT_EQ(pair_component_label(0), "II");
  EXPECT_EQ(pair_component_label(2), "YI");
  EXPECT_EQ(pair_component_label(6), "IZ");
  EXPECT_EQ(pair_component_label(8), "YY");
  for (int k = 0; k < kComponentsPerPair; ++k) {
    EXPECT_EQ(pair_component_index(pair_component(k)), k);
  }
  // s_Y^T (x) s_Y = -(s_Y (x) s_Y).
  const CMatrix yy = kron(CMatrix::pauli('Y'), CMatrix::pauli('Y'));
  EXPECT_LT(capwit::testing::max_abs_diff(pair_component_operator(8), yy * Complex(-1)), 1e-15);
  EXPECT_THROW(pair_component(10), ValidationError);

  AccessibleChoi t(2);
  EXPECT_EQ(t.label(t.index(7, 8)), "XX|YY");
  EXPECT_EQ(t.parse_label("XX|YY"), t.index(7, 8));
  EXPECT_EQ(t.parse_label("IZ|II"), t.index(6, 0));
  EXPECT_THROW(t.parse_label("XY|II"), DataError);
  EXPECT_THROW(t.parse_label("XX"), DataError);
}

TEST(witness, coefficient_bounds_enforced) {
  AccessibleChoi t(1);
  EXPECT_THROW(t.set(7, {1.06, 0, CoefficientSource::kMeasured}), DataError);
  EXPECT_NO_THROW(t.set(7, {-1.05, 0, CoefficientSource::kMeasured}));
  EXPECT_THROW(t.set(0, {0.5, 0, CoefficientSource::kMeasured}), DataError);
  EXPECT_EQ(t.at(0).value, 1);
}

TEST(witness, accessible_choi_examples) {
  const auto id = accessible_choi_from_channel(PauliChannel::identity(1));
  for (int k = 7; k <= 9; ++k) {
    EXPECT_NEAR(id.at(k).value, 1, 1e-15);
  }
  const auto flip = accessible_choi_from_channel(PauliChannel(1, {{"I", 0.75}, {"X", 0.25}}));
  EXPECT_NEAR(flip.at(7).value, 1, 1e-15);
  EXPECT_NEAR(flip.at(8).value, 0.5, 1e-15);
  EXPECT_NEAR(flip.at(9).value, 0.5, 1e-15);
  for (int k = 1; k <= 6; ++k) {
    EXPECT_NEAR(flip.at(k).value, 0, 1e-15);
  }

  const auto t = accessible_choi_from_channel(correlated_channel({0.25, 1}));
  const Matrix3 theory = theory_correlators({0.25, 1});
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double sign = ((i == 1) + (j == 1)) % 2 ? -1.0 : 1.0;
      EXPECT_NEAR(t.at(t.index(7 + i, 7 + j)).value, sign * theory[i][j], 1e-12);
    }
  }
}

TEST(witness, assembled_operator_is_a_unit_trace_hermitian) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ch = capwit::testing::random_pauli_channel(2, rng);
    const CMatrix op = accessible_choi_from_channel(ch).assemble();
    EXPECT_TRUE(op.is_hermitian(1e-12));
    EXPECT_NEAR(op.trace().real(), 1, 1e-12);
  }
}

TEST(witness, bell_probability_examples) {
  auto table = [](double cx, double cy, double cz) {
    AccessibleChoi t(1);
    t.set(7, {cx, 0, CoefficientSource::kMeasured});
    t.set(8, {cy, 0, CoefficientSource::kMeasured});
    t.set(9, {cz, 0, CoefficientSource::kMeasured});
    return t;
  };
  const auto perfect = bell_probabilities(table(1, 1, 1));
  EXPECT_NEAR(perfect[0], 1, 1e-15);
  const auto none = bell_probabilities(table(0, 0, 0));
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(none[k], 0.25, 1e-15);
  }

  // Inversion check against the Bell signature table built from the vectors.
  const auto q = bell_probabilities(table(1, 0.5, 0.5));
  const std::array<double, 4> expected{0.75, 0, 0.25, 0};
  const auto bell = bell_vectors();
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(q[k], expected[k], 1e-15);
  }
  const std::array<double, 3> c{1, 0.5, 0.5};
  for (int axis = 0; axis < 3; ++axis) {
    double rebuilt = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      rebuilt += q[k] * expectation(pair_component_operator(7 + axis), bell[k]);
    }
    EXPECT_NEAR(rebuilt, c[axis], 1e-15);
  }
}

TEST(witness, probability_vector_examples) {
  const auto full = accessible_choi_from_channel(correlated_channel({0.5, 1}));
  const BasisSpec b2b2{{{BasisFamily::kB2, 0, 0}, {BasisFamily::kB2, 0, 0}}};
  const auto p = probability_vector(full, b2b2);
  ASSERT_EQ(p.size(), 16u);
  for (std::size_t k = 0; k < 16; ++k) {
    EXPECT_NEAR(p[k], (k == 0 || k == 5) ? 0.5 : 0.0, 1e-15) << k;
  }

  const auto id = accessible_choi_from_channel(PauliChannel::identity(2));
  const BasisSpec tilted{{{BasisFamily::kB1, kPi / 4, 0}, {BasisFamily::kB1, 0, 0}}};
  EXPECT_NEAR(probability_vector(id, tilted)[0], 0.5, 1e-15);

  EXPECT_THROW(probability_vector(id, BasisSpec{{{BasisFamily::kB1, 0, 0}}}), ValidationError);
}

TEST(witness, factorized_probabilities_match_assembled_operator) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = trial % 2 + 1;
    const auto t = accessible_choi_from_channel(capwit::testing::random_pauli_channel(n, rng));
    const auto b = random_basis(n, rng);
    const auto fast = probability_vector(t, b);
    const auto direct = probability_vector(t.assemble(), b);
    for (std::size_t k = 0; k < fast.size(); ++k) {
      EXPECT_NEAR(fast[k], direct[k], 1e-12);
    }
  }
}

TEST(witness, unmeasured_components_do_not_reach_b_bases) {
  std::mt19937_64 rng(34);
  const auto t = accessible_choi_from_channel(capwit::testing::random_pauli_channel(2, rng));
  const CMatrix base = t.assemble();
  const char paulis[] = {'I', 'X', 'Y', 'Z'};
  auto accessible = [](char r, char s) { return r == 'I' || s == 'I' || r == s; };

  // Every mixed product, each shifted by +-0.3.
  CMatrix perturbed = base;
  std::bernoulli_distribution coin(0.5);
  int added = 0;
  for (char r1 : paulis) {
    for (char s1 : paulis) {
      for (char r2 : paulis) {
        for (char s2 : paulis) {
          if (accessible(r1, s1) && accessible(r2, s2)) continue;
          const CMatrix op = kron(kron(CMatrix::pauli(r1).transpose(), CMatrix::pauli(s1)),
                                  kron(CMatrix::pauli(r2).transpose(), CMatrix::pauli(s2)));
          perturbed += op * Complex((coin(rng) ? 0.3 : -0.3) / 16);
          ++added;
        }
      }
    }
  }
  EXPECT_EQ(added, 256 - 100);
  for (int trial = 0; trial < 100; ++trial) {
    const auto b = random_basis(2, rng);
    const auto p0 = probability_vector(base, b);
    const auto p1 = probability_vector(perturbed, b);
    for (std::size_t k = 0; k < 16; ++k) {
      EXPECT_NEAR(p0[k], p1[k], 1e-12);
    }
  }
}

TEST(witness, entropy_exchange_bounds_basis_entropy) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ch = capwit::testing::random_pauli_channel(2, rng);
    const double se = von_neumann_entropy(choi(ch));
    const auto t = accessible_choi_from_channel(ch);
    for (int k = 0; k < 20; ++k) {
      EXPECT_LE(se, shannon_entropy(probability_vector(t, random_basis(2, rng))) + 1e-10);
    }
    const BasisSpec bell{{{BasisFamily::kB1, 0, 0}, {BasisFamily::kB1, 0, 0}}};
    EXPECT_NEAR(se, shannon_entropy(probability_vector(t, bell)), 1e-10);
  }
}

TEST(witness, q_det_ideal_full_correlation) {
  const auto r = q_det(accessible_choi_from_channel(correlated_channel({0.5, 1})));
  EXPECT_NEAR(r.q_det, 1, 1e-6);
  EXPECT_FALSE(r.clamped);
  ASSERT_EQ(r.best_basis.pairs.size(), 2u);
  for (const auto& pb : r.best_basis.pairs) {
    EXPECT_EQ(pb.family, BasisFamily::kB2);
    EXPECT_NEAR(pb.theta_b, 0, 1e-9);
    EXPECT_NEAR(pb.theta_d, 0, 1e-9);
  }
  EXPECT_EQ(r.prob_vector.size(), 16u);
  EXPECT_NEAR(r.output_entropy, 2, 1e-12);
  EXPECT_TRUE(r.assumptions.empty());
}

TEST(witness, q_det_bounded_by_capacity) {
  for (const ChannelParams params : {ChannelParams{0.375, 0.2}, ChannelParams{0.125, 3.0 / 7}, ChannelParams{0.3, 0.9}}) {
    const double q = q_det(accessible_choi_from_channel(correlated_channel(params))).q_det;
    const double exact = exact_capacity(params);
    EXPECT_LE(q, exact + 1e-9);
    EXPECT_GE(q, exact - 1e-3);
  }
}

TEST(witness, q_det_single_pair) {
  const auto id = q_det(accessible_choi_from_channel(PauliChannel::identity(1)));
  EXPECT_NEAR(id.q_det, 1, 1e-9);
  EXPECT_EQ(id.prob_vector.size(), 4u);
  const auto flip = q_det(accessible_choi_from_channel(PauliChannel(1, {{"I", 0.75}, {"X", 0.25}})));
  EXPECT_NEAR(flip.q_det, dephasing_capacity(0.25), 1e-9);
}

TEST(witness, q_det_swap_invariant) {
  SearchConfig c;
  c.grid = 11;
  std::mt19937_64 rng(36);
  const auto sym = accessible_choi_from_channel(correlated_channel({0.3, 0.6}));
  EXPECT_NEAR(q_det(sym, c).q_det_raw, q_det(swap_pairs(sym), c).q_det_raw, 1e-9);
  const auto asym = accessible_choi_from_channel(capwit::testing::random_pauli_channel(2, rng));
  EXPECT_NEAR(q_det(asym, c).q_det_raw, q_det(swap_pairs(asym), c).q_det_raw, 1e-9);
}

TEST(witness, q_det_is_deterministic) {
  const auto t = appendix_choi("p3_8_mu7_15.json", true);
  const auto a = q_det(t);
  const auto b = q_det(t);
  EXPECT_EQ(a.q_det_raw, b.q_det_raw);
  EXPECT_EQ(a.best_basis, b.best_basis);
}

TEST(witness, appendix_without_fit_fails_floor) {
  const auto t = appendix_choi("p1_2_mu1.json", false);
  EXPECT_FALSE(t.has_pair_correlators());
  EXPECT_THROW(q_det(t), DataError);
  EXPECT_THROW(q_lim(t), DataError);
}

TEST(witness, appendix_uncorrelated_is_clamped) {
  const auto r = q_det(appendix_choi("p1_2_mu0.json", true));
  EXPECT_LT(r.q_det_raw, 0);
  EXPECT_EQ(r.q_det, 0);
  EXPECT_TRUE(r.clamped);
  EXPECT_NE(std::find(r.assumptions.begin(), r.assumptions.end(), "unital_output_assumed"), r.assumptions.end());
  EXPECT_NE(std::find(r.assumptions.begin(), r.assumptions.end(), "marginals_model_assisted"), r.assumptions.end());
  EXPECT_NEAR(r.output_entropy, 2, 1e-12);
}

TEST(witness, slightly_negative_probabilities_use_real_part_rule) {
  // Over-unity correlators push one Bell probability just below zero.
  AccessibleChoi t(1);
  t.set(7, {1.02, 0, CoefficientSource::kMeasured});
  t.set(8, {1.02, 0, CoefficientSource::kMeasured});
  t.set(9, {0.98, 0, CoefficientSource::kMeasured});
  const auto q = bell_probabilities(t);
  double h = 0;
  bool negative = false;
  for (std::size_t k = 0; k < 4; ++k) {
    negative |= q[k] < 0;
    h += q[k] == 0 ? 0 : -q[k] * std::log2(std::abs(q[k]));
  }
  EXPECT_TRUE(negative);
  EXPECT_TRUE(std::isfinite(shannon_entropy(q)));
  EXPECT_NEAR(shannon_entropy(q), h, 1e-15);
  const auto r = q_det(t);
  EXPECT_TRUE(std::isfinite(r.q_det_raw));
}

TEST(witness, q_lim_examples) {
  const auto quarter = q_lim(ChannelParams{0.25, 0.4});
  EXPECT_NEAR(quarter.q1, dephasing_capacity(0.25), 1e-9);
  EXPECT_NEAR(quarter.q2, dephasing_capacity(0.25), 1e-9);
  EXPECT_NEAR(quarter.q_lim, 2 * (1 - binary_entropy(0.25)), 1e-12);
  EXPECT_NEAR(quarter.q_lim, 0.377444, 1e-6);
  EXPECT_TRUE(quarter.model_assisted);

  EXPECT_NEAR(q_lim(ChannelParams{0.5, 0.7}).q_lim, 0, 1e-9);
  const auto id = q_lim(accessible_choi_from_channel(PauliChannel::identity(2)));
  EXPECT_NEAR(id.q_lim, 2, 1e-9);
  EXPECT_FALSE(id.model_assisted);

  const auto fitted = q_lim(appendix_choi("p1_4_mu1.json", true));
  EXPECT_TRUE(fitted.model_assisted);
  EXPECT_NEAR(fitted.q_lim, fitted.q1 + fitted.q2, 1e-12);
}

TEST(witness, bootstrap_zero_sigmas) {
  const auto t = accessible_choi_from_channel(correlated_channel({0.4, 0.5}));
  BootstrapConfig b;
  b.resamples = 20;
  EXPECT_NEAR(bootstrap_error(t, b), 0, 1e-12);
}

TEST(witness, bootstrap_config_errors) {
  const auto t = accessible_choi_from_channel(correlated_channel({0.4, 0.5}));
  BootstrapConfig b;
  b.resamples = 9;
  EXPECT_THROW(bootstrap_error(t, b), ConfigError);
}

TEST(witness, bootstrap_deterministic_and_scales_with_sigma) {
  const auto t = appendix_choi("p1_2_mu1.json", true);
  const auto nominal = q_det(t);
  BootstrapConfig b;
  b.resamples = 200;
  b.seed = 5;
  b.refresh = refit_imputed;
  const double s1 = bootstrap_error(t, b, nominal);
  EXPECT_EQ(s1, bootstrap_error(t, b, nominal));
  EXPECT_GT(s1, 0);

  AccessibleChoi doubled = t;
  for (std::size_t k = 1; k < t.size(); ++k) {
    Coefficient c = t.at(k);
    c.sigma *= 2;
    doubled.set(k, c);
  }
  const double s2 = bootstrap_error(doubled, b, nominal);
  // Near-linear response: doubling the noise should come close to doubling sigma.
  EXPECT_GT(s2, 1.5 * s1);
  EXPECT_LT(s2, 2.5 * s1);
}
