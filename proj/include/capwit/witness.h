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

// Detectable lower bound on the quantum capacity.
//
// The witness is Q_det = S[E(I/d)] - min H(p), where p is the outcome
// distribution of the Choi state in an orthonormal product basis built from
// the B1/B2/B3 families of superposed Bell states. Only Pauli-product
// components reachable with matched-axis settings {s_i (x) s_j} enter the
// Choi state; the B families are exactly the bases whose probabilities depend
// on nothing else.
//
// Reference operators are written transposed throughout: a component with
// label "YY" on a pair means (s_Y^T on the reference) (x) (s_Y on the system),
// which is what preparing s_Y eigenstates and measuring s_Y estimates.

#ifndef CAPWIT_WITNESS_H
#define CAPWIT_WITNESS_H

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "capwit/capacity.h"
#include "capwit/channels.h"
#include "capwit/qmath.h"

namespace capwit {

enum class BasisFamily : std::uint8_t { kB1 = 0, kB2 = 1, kB3 = 2 };

std::string_view family_name(BasisFamily f);
BasisFamily parse_family(std::string_view name);

/// One reference/system pair's basis. b = sin(theta_b), a = cos(theta_b),
/// d = sin(theta_d), c = cos(theta_d).
struct PairBasis {
  BasisFamily family = BasisFamily::kB1;
  double theta_b = 0;
  double theta_d = 0;
  bool operator==(const PairBasis&) const = default;
};

/// Product basis, one PairBasis per pair.
struct BasisSpec {
  std::vector<PairBasis> pairs;
  bool operator==(const BasisSpec&) const = default;
};

/// |Phi+>, |Phi->, |Psi+>, |Psi-> on (reference, system).
std::array<CVector, 4> bell_vectors();

/// The four vectors of one B-family basis, in the order they are listed for
/// the family.
std::array<CVector, 4> basis_vectors(const PairBasis& basis);
/// Product vectors over pairs, first pair most significant.
std::vector<CVector> basis_vectors(const BasisSpec& basis);

// ---------------------------------------------------------------------------
// Pair components.

/// Ten components per pair: identity, reference marginals, output marginals,
/// and matched correlators.
enum class ComponentKind : std::uint8_t { kIdentity, kReference, kOutput, kCorrelator };

inline constexpr int kComponentsPerPair = 10;

struct PairComponent {
  ComponentKind kind;
  /// 0, 1, 2 for X, Y, Z; unused for kIdentity.
  int axis;
};

PairComponent pair_component(int index);
int pair_component_index(PairComponent c);
/// "II", "XI", "YI", "ZI", "IX", "IY", "IZ", "XX", "YY", "ZZ".
std::string pair_component_label(int index);
/// sigma^T (x) sigma as a 4x4 operator on (reference, system).
CMatrix pair_component_operator(int index);

enum class Convention : std::uint8_t { kTranspose, kNoTranspose };
std::string_view convention_name(Convention c);
Convention parse_convention(std::string_view name);

enum class CoefficientSource : std::uint8_t { kAbsent, kMeasured, kImputed };

struct Coefficient {
  double value = 0;
  double sigma = 0;
  CoefficientSource source = CoefficientSource::kAbsent;
};

/// Choi-state expansion restricted to the accessible components. Component
/// coefficients are expectation values Tr[C (A_1 (x) A_2)], so the identity
/// coefficient is 1.
class AccessibleChoi {
 public:
  static constexpr double kMaxMagnitude = 1.05;

  explicit AccessibleChoi(int n_pairs);

  int n_pairs() const { return n_pairs_; }
  std::size_t size() const { return table_.size(); }

  /// Flat index of a product of pair components.
  std::size_t index(std::span<const int> components) const;
  std::size_t index(int c1) const;
  std::size_t index(int c1, int c2) const;
  /// e.g. "XX|YY" for two pairs, "YY" for one.
  std::string label(std::size_t flat) const;
  std::size_t parse_label(std::string_view label) const;

  const Coefficient& at(std::size_t flat) const { return table_.at(flat); }
  /// Throws DataError when |value| exceeds kMaxMagnitude.
  void set(std::size_t flat, Coefficient c);

  /// (1/4^n) sum of coefficient * component operator, tensor order
  /// (R1, S1, R2, S2). Absent components contribute zero.
  CMatrix assemble() const;
  /// E(I/2^n) from the output-marginal components.
  CMatrix output_state() const;
  /// True when every output-only component is present.
  bool has_output_marginals() const;
  /// True when every single-pair correlator is present.
  bool has_pair_correlators() const;
  /// One-pair view of pair `which` (0-based), the other pair traced out.
  AccessibleChoi pair_marginal(int which) const;

  std::vector<std::string> assumptions;

 private:
  int n_pairs_;
  std::vector<Coefficient> table_;
};

/// Exact accessible components of a Pauli channel's Choi state.
AccessibleChoi accessible_choi_from_channel(const PauliChannel& ch);

/// Bell-basis distribution (Phi+, Phi-, Psi+, Psi-) of a one-pair table.
ProbVector bell_probabilities(const AccessibleChoi& choi);

/// p_i = <Phi_i| C |Phi_i>, evaluated pair-factorized on the component table.
ProbVector probability_vector(const AccessibleChoi& choi, const BasisSpec& basis);
/// Same quantity evaluated directly on an assembled operator.
ProbVector probability_vector(const CMatrix& op, const BasisSpec& basis);

// ---------------------------------------------------------------------------
// Optimization.

struct SearchConfig {
  /// Grid points per theta over [-pi/2, pi/2]; 0 disables the grid (warm
  /// starts only).
  int grid = 21;
  bool refine = true;
  /// Number of best grid points refined with Nelder-Mead.
  int refine_starts = 5;
  int max_evaluations = 2000;
  double tolerance = 1e-12;
};

struct WitnessResult {
  /// max(q_det_raw, 0).
  double q_det = 0;
  double q_det_raw = 0;
  bool clamped = false;
  BasisSpec best_basis;
  ProbVector prob_vector{std::vector<double>{1.0}};
  double output_entropy = 0;
  double min_entropy = 0;
  std::optional<double> sigma_q;
  /// Refined optima, best first; reused as warm starts for resampling.
  std::vector<BasisSpec> candidates;
  std::vector<std::string> assumptions;
};

/// Grid search over every family combination followed by Nelder-Mead
/// refinement. Ties within `tolerance` are broken by preferring B2, then B1,
/// then B3 pairwise, then the smallest sum |theta|.
WitnessResult q_det(const AccessibleChoi& choi, const SearchConfig& config = {},
                    std::span<const BasisSpec> warm_starts = {});

/// Q1 and Q2 from single-pair witnesses on each pair's marginal table.
/// Throws DataError when the table lacks single-pair correlators.
CapacityReport q_lim(const AccessibleChoi& choi, const SearchConfig& config = {});
/// Same, evaluated on the ideal correlated channel with the given parameters.
CapacityReport q_lim(const ChannelParams& params, const SearchConfig& config = {});

struct BootstrapConfig {
  int resamples = 1000;
  std::uint64_t seed = 0;
  /// Resamples are re-optimized from the nominal optimum's candidates.
  SearchConfig search{.grid = 0, .refine = true, .refine_starts = 5, .max_evaluations = 1500, .tolerance = 1e-12};
  /// Applied to every resampled table, e.g. to re-derive imputed entries
  /// from the perturbed measurements.
  std::function<AccessibleChoi(const AccessibleChoi&)> refresh;
};

/// Standard deviation of the raw witness over Gaussian resamples of every
/// measured coefficient (independent draws, truncated to [-1, 1]). Each
/// resample uses an mt19937_64 seeded from (seed, resample index).
double bootstrap_error(const AccessibleChoi& choi, const BootstrapConfig& config,
                       const SearchConfig& nominal_search = {});
/// Reuses an already computed nominal result for the warm starts.
double bootstrap_error(const AccessibleChoi& choi, const BootstrapConfig& config, const WitnessResult& nominal);

}  // namespace capwit

#endif  // CAPWIT_WITNESS_H
