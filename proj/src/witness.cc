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
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include "capwit/errors.h"
#include "capwit/optimize.h"

namespace capwit {

namespace {

constexpr char kAxisLabels[3] = {'X', 'Y', 'Z'};

// <u_a| O_k |u_a> for the four basis vectors a and the ten pair components k.
using PairExpectations = std::array<std::array<double, kComponentsPerPair>, 4>;

const std::array<CMatrix, kComponentsPerPair>& component_operators() {
  static const std::array<CMatrix, kComponentsPerPair> ops = [] {
    std::array<CMatrix, kComponentsPerPair> out;
    for (int k = 0; k < kComponentsPerPair; ++k) {
      out[static_cast<std::size_t>(k)] = pair_component_operator(k);
    }
    return out;
  }();
  return ops;
}

PairExpectations pair_expectations(const PairBasis& basis) {
  const auto vecs = basis_vectors(basis);
  const auto& ops = component_operators();
  PairExpectations e{};
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t k = 0; k < ops.size(); ++k) {
      e[a][k] = expectation(ops[k], vecs[a]);
    }
  }
  return e;
}

void check_floor(std::span<const double> probs) {
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] < ProbVector::kFloor) {
      std::ostringstream msg;
      msg << "probability " << probs[k] << " (outcome " << k << ") below floor " << ProbVector::kFloor
          << ": correlator data are inconsistent";
      throw DataError(msg.str());
    }
  }
}

// Dense copy of the coefficient table; absent entries are zero.
std::vector<double> coefficient_values(const AccessibleChoi& choi) {
  std::vector<double> t(choi.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = choi.at(k).source == CoefficientSource::kAbsent ? 0.0 : choi.at(k).value;
  }
  return t;
}

// Fills probs (size 4^n) for the given per-pair expectations.
void factorized_probabilities(const std::vector<double>& t, int n_pairs, const PairExpectations& e1,
                              const PairExpectations* e2, std::span<double> probs) {
  if (n_pairs == 1) {
    for (std::size_t a = 0; a < 4; ++a) {
      double s = 0;
      for (std::size_t k = 0; k < kComponentsPerPair; ++k) {
        s += t[k] * e1[a][k];
      }
      probs[a] = s / 4;
    }
    return;
  }
  for (std::size_t a = 0; a < 4; ++a) {
    std::array<double, kComponentsPerPair> w{};
    for (std::size_t k1 = 0; k1 < kComponentsPerPair; ++k1) {
      const double x = e1[a][k1];
      if (x == 0) {
        continue;
      }
      for (std::size_t k2 = 0; k2 < kComponentsPerPair; ++k2) {
        w[k2] += x * t[k1 * kComponentsPerPair + k2];
      }
    }
    for (std::size_t b = 0; b < 4; ++b) {
      double s = 0;
      for (std::size_t k2 = 0; k2 < kComponentsPerPair; ++k2) {
        s += w[k2] * (*e2)[b][k2];
      }
      probs[a * 4 + b] = s / 16;
    }
  }
}

double wrap_theta(double theta) { return theta - std::numbers::pi * std::round(theta / std::numbers::pi); }

int family_rank(BasisFamily f) {
  switch (f) {
    case BasisFamily::kB2:
      return 0;
    case BasisFamily::kB1:
      return 1;
    case BasisFamily::kB3:
      return 2;
  }
  return 3;
}

// Lexicographic (family ranks, sum |theta|, thetas).
bool tie_less(const BasisSpec& x, const BasisSpec& y) {
  auto key = [](const BasisSpec& b) {
    std::vector<int> ranks;
    double abs_sum = 0;
    std::vector<double> thetas;
    for (const auto& p : b.pairs) {
      ranks.push_back(family_rank(p.family));
      abs_sum += std::abs(p.theta_b) + std::abs(p.theta_d);
      thetas.push_back(p.theta_b);
      thetas.push_back(p.theta_d);
    }
    return std::make_tuple(ranks, abs_sum, thetas);
  };
  return key(x) < key(y);
}

struct Candidate {
  BasisSpec basis;
  double entropy;
};

// Picks the minimum-entropy candidate; near-ties go to tie_less.
std::vector<Candidate> rank_candidates(std::vector<Candidate> pool, double tolerance) {
  if (pool.empty()) {
    return pool;
  }
  std::sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
    if (a.entropy != b.entropy) {
      return a.entropy < b.entropy;
    }
    return tie_less(a.basis, b.basis);
  });
  const double h_min = pool.front().entropy;
  const double cut = h_min + tolerance * std::max(1.0, std::abs(h_min));
  auto tie_end = std::find_if(pool.begin(), pool.end(), [&](const Candidate& c) { return c.entropy > cut; });
  std::stable_sort(pool.begin(), tie_end, [](const Candidate& a, const Candidate& b) { return tie_less(a.basis, b.basis); });
  return pool;
}

class EntropyEvaluator {
 public:
  explicit EntropyEvaluator(const AccessibleChoi& choi)
      : n_pairs_(choi.n_pairs()), t_(coefficient_values(choi)), probs_(std::size_t{1} << (2 * n_pairs_)) {}

  double operator()(const BasisSpec& basis) {
    const auto e1 = pair_expectations(basis.pairs[0]);
    if (n_pairs_ == 1) {
      factorized_probabilities(t_, 1, e1, nullptr, probs_);
    } else {
      const auto e2 = pair_expectations(basis.pairs[1]);
      factorized_probabilities(t_, 2, e1, &e2, probs_);
    }
    check_floor(probs_);
    return shannon_entropy(std::span<const double>(probs_));
  }

  std::vector<double> probabilities(const BasisSpec& basis) {
    (*this)(basis);
    return probs_;
  }

  int n_pairs() const { return n_pairs_; }
  const std::vector<double>& table() const { return t_; }

 private:
  int n_pairs_;
  std::vector<double> t_;
  std::vector<double> probs_;
};

std::vector<PairBasis> grid_pair_bases(int grid) {
  std::vector<double> thetas;
  if (grid == 1) {
    thetas.push_back(0);
  } else {
    for (int k = 0; k < grid; ++k) {
      thetas.push_back(-std::numbers::pi / 2 + std::numbers::pi * k / (grid - 1));
    }
  }
  std::vector<PairBasis> out;
  for (auto f : {BasisFamily::kB1, BasisFamily::kB2, BasisFamily::kB3}) {
    for (double tb : thetas) {
      for (double td : thetas) {
        out.push_back({f, tb, td});
      }
    }
  }
  return out;
}

// Full grid; returns the starting candidates for refinement.
std::vector<Candidate> grid_search(EntropyEvaluator& eval, const SearchConfig& config) {
  const auto keys = grid_pair_bases(config.grid);
  std::vector<PairExpectations> exps;
  exps.reserve(keys.size());
  for (const auto& k : keys) {
    exps.push_back(pair_expectations(k));
  }

  const int n = eval.n_pairs();
  const std::size_t n_points = n == 1 ? keys.size() : keys.size() * keys.size();
  std::vector<double> h(n_points);
  std::vector<double> probs(std::size_t{1} << (2 * n));
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (n == 1) {
      factorized_probabilities(eval.table(), 1, exps[i], nullptr, probs);
      check_floor(probs);
      h[i] = shannon_entropy(std::span<const double>(probs));
      continue;
    }
    for (std::size_t j = 0; j < keys.size(); ++j) {
      factorized_probabilities(eval.table(), 2, exps[i], &exps[j], probs);
      check_floor(probs);
      h[i * keys.size() + j] = shannon_entropy(std::span<const double>(probs));
    }
  }

  auto spec_of = [&](std::size_t idx) {
    BasisSpec b;
    if (n == 1) {
      b.pairs = {keys[idx]};
    } else {
      b.pairs = {keys[idx / keys.size()], keys[idx % keys.size()]};
    }
    return b;
  };

  const auto starts = static_cast<std::size_t>(std::max(1, config.refine_starts));
  const double h_min = *std::min_element(h.begin(), h.end());
  const double cut = h_min + config.tolerance * std::max(1.0, std::abs(h_min));

  // The best of the near-minimal grid points by tie order, plus the best by
  // entropy overall.
  std::vector<Candidate> tied;
  for (std::size_t idx = 0; idx < n_points; ++idx) {
    if (h[idx] <= cut) {
      tied.push_back({spec_of(idx), h[idx]});
    }
  }
  std::sort(tied.begin(), tied.end(), [](const Candidate& a, const Candidate& b) { return tie_less(a.basis, b.basis); });
  if (tied.size() > starts) {
    tied.resize(starts);
  }

  std::vector<std::size_t> order(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    order[k] = k;
  }
  const std::size_t top = std::min(starts, n_points);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t a, std::size_t b) { return h[a] != h[b] ? h[a] < h[b] : a < b; });

  std::vector<Candidate> out = std::move(tied);
  for (std::size_t k = 0; k < top; ++k) {
    Candidate c{spec_of(order[k]), h[order[k]]};
    if (std::none_of(out.begin(), out.end(), [&](const Candidate& o) { return o.basis == c.basis; })) {
      out.push_back(std::move(c));
    }
  }
  return out;
}

Candidate refine(EntropyEvaluator& eval, const Candidate& start, const SearchConfig& config) {
  std::vector<double> x0;
  for (const auto& p : start.basis.pairs) {
    x0.push_back(p.theta_b);
    x0.push_back(p.theta_d);
  }
  auto to_spec = [&](std::span<const double> x) {
    BasisSpec b = start.basis;
    for (std::size_t k = 0; k < b.pairs.size(); ++k) {
      b.pairs[k].theta_b = x[2 * k];
      b.pairs[k].theta_d = x[2 * k + 1];
    }
    return b;
  };
  NelderMeadOptions opts;
  opts.max_evaluations = config.max_evaluations;
  const auto r = nelder_mead([&](std::span<const double> x) { return eval(to_spec(x)); }, x0, opts);
  BasisSpec b = to_spec(r.x);
  for (auto& p : b.pairs) {
    p.theta_b = wrap_theta(p.theta_b);
    p.theta_d = wrap_theta(p.theta_d);
  }
  return {b, eval(b)};
}

}  // namespace

std::string_view family_name(BasisFamily f) {
  switch (f) {
    case BasisFamily::kB1:
      return "B1";
    case BasisFamily::kB2:
      return "B2";
    case BasisFamily::kB3:
      return "B3";
  }
  return "?";
}

BasisFamily parse_family(std::string_view name) {
  if (name == "B1") return BasisFamily::kB1;
  if (name == "B2") return BasisFamily::kB2;
  if (name == "B3") return BasisFamily::kB3;
  throw ValidationError("unknown basis family '" + std::string(name) + "'");
}

std::array<CVector, 4> bell_vectors() {
  const double r = 1 / std::sqrt(2.0);
  return {CVector{r, 0, 0, r}, CVector{r, 0, 0, -r}, CVector{0, r, r, 0}, CVector{0, r, -r, 0}};
}

std::array<CVector, 4> basis_vectors(const PairBasis& basis) {
  const auto bell = bell_vectors();
  const auto& phi_p = bell[0];
  const auto& phi_m = bell[1];
  const auto& psi_p = bell[2];
  const auto& psi_m = bell[3];
  const double a = std::cos(basis.theta_b), b = std::sin(basis.theta_b);
  const double c = std::cos(basis.theta_d), d = std::sin(basis.theta_d);
  auto mix = [](Complex x, const CVector& u, Complex y, const CVector& v) {
    CVector out(4);
    for (std::size_t k = 0; k < 4; ++k) {
      out[k] = x * u[k] + y * v[k];
    }
    return out;
  };
  const Complex i{0, 1};
  switch (basis.family) {
    case BasisFamily::kB1:
      return {mix(a, phi_p, b, phi_m), mix(-b, phi_p, a, phi_m), mix(c, psi_p, d, psi_m), mix(-d, psi_p, c, psi_m)};
    case BasisFamily::kB2:
      return {mix(a, phi_p, b, psi_p), mix(-b, phi_p, a, psi_p), mix(c, phi_m, d, psi_m), mix(-d, phi_m, c, psi_m)};
    case BasisFamily::kB3:
      return {mix(a, phi_p, i * b, psi_m), mix(i * b, phi_p, a, psi_m), mix(c, phi_m, i * d, psi_p),
              mix(i * d, phi_m, c, psi_p)};
  }
  throw ValidationError("invalid basis family");
}

std::vector<CVector> basis_vectors(const BasisSpec& basis) {
  if (basis.pairs.empty()) {
    throw ValidationError("basis spec has no pairs");
  }
  std::vector<CVector> out;
  for (const auto& v : basis_vectors(basis.pairs[0])) {
    out.push_back(v);
  }
  for (std::size_t k = 1; k < basis.pairs.size(); ++k) {
    const auto next = basis_vectors(basis.pairs[k]);
    std::vector<CVector> grown;
    for (const auto& u : out) {
      for (const auto& v : next) {
        grown.push_back(kron(std::span<const Complex>(u), std::span<const Complex>(v)));
      }
    }
    out = std::move(grown);
  }
  return out;
}

PairComponent pair_component(int index) {
  if (index == 0) return {ComponentKind::kIdentity, 0};
  if (index >= 1 && index <= 3) return {ComponentKind::kReference, index - 1};
  if (index >= 4 && index <= 6) return {ComponentKind::kOutput, index - 4};
  if (index >= 7 && index <= 9) return {ComponentKind::kCorrelator, index - 7};
  throw ValidationError("pair component index out of range");
}

int pair_component_index(PairComponent c) {
  switch (c.kind) {
    case ComponentKind::kIdentity:
      return 0;
    case ComponentKind::kReference:
      return 1 + c.axis;
    case ComponentKind::kOutput:
      return 4 + c.axis;
    case ComponentKind::kCorrelator:
      return 7 + c.axis;
  }
  return -1;
}

std::string pair_component_label(int index) {
  const auto c = pair_component(index);
  const char ax = kAxisLabels[c.axis];
  switch (c.kind) {
    case ComponentKind::kIdentity:
      return "II";
    case ComponentKind::kReference:
      return {ax, 'I'};
    case ComponentKind::kOutput:
      return {'I', ax};
    case ComponentKind::kCorrelator:
      return {ax, ax};
  }
  return "??";
}

CMatrix pair_component_operator(int index) {
  const auto label = pair_component_label(index);
  return kron(CMatrix::pauli(label[0]).transpose(), CMatrix::pauli(label[1]));
}

std::string_view convention_name(Convention c) {
  return c == Convention::kTranspose ? "transpose" : "no_transpose";
}

Convention parse_convention(std::string_view name) {
  if (name == "transpose") return Convention::kTranspose;
  if (name == "no_transpose") return Convention::kNoTranspose;
  throw DataError("unknown correlator convention '" + std::string(name) + "'");
}

AccessibleChoi::AccessibleChoi(int n_pairs) : n_pairs_(n_pairs) {
  if (n_pairs != 1 && n_pairs != 2) {
    throw ValidationError("AccessibleChoi supports 1 or 2 pairs");
  }
  table_.resize(n_pairs == 1 ? kComponentsPerPair : kComponentsPerPair * kComponentsPerPair);
  table_[0] = {1.0, 0.0, CoefficientSource::kMeasured};
}

std::size_t AccessibleChoi::index(std::span<const int> components) const {
  if (static_cast<int>(components.size()) != n_pairs_) {
    throw ValidationError("component product has the wrong number of pairs");
  }
  std::size_t flat = 0;
  for (int c : components) {
    if (c < 0 || c >= kComponentsPerPair) {
      throw ValidationError("pair component index out of range");
    }
    flat = flat * kComponentsPerPair + static_cast<std::size_t>(c);
  }
  return flat;
}

std::size_t AccessibleChoi::index(int c1) const {
  const int c[1] = {c1};
  return index(c);
}

std::size_t AccessibleChoi::index(int c1, int c2) const {
  const int c[2] = {c1, c2};
  return index(c);
}

std::string AccessibleChoi::label(std::size_t flat) const {
  if (n_pairs_ == 1) {
    return pair_component_label(static_cast<int>(flat));
  }
  return pair_component_label(static_cast<int>(flat / kComponentsPerPair)) + "|" +
         pair_component_label(static_cast<int>(flat % kComponentsPerPair));
}

std::size_t AccessibleChoi::parse_label(std::string_view label) const {
  auto one = [](std::string_view s) {
    for (int k = 0; k < kComponentsPerPair; ++k) {
      if (pair_component_label(k) == s) {
        return k;
      }
    }
    throw DataError("unknown component label '" + std::string(s) + "'");
  };
  if (n_pairs_ == 1) {
    return index(one(label));
  }
  const auto bar = label.find('|');
  if (bar == std::string_view::npos) {
    throw DataError("two-pair component label needs '|': '" + std::string(label) + "'");
  }
  return index(one(label.substr(0, bar)), one(label.substr(bar + 1)));
}

void AccessibleChoi::set(std::size_t flat, Coefficient c) {
  if (!(std::abs(c.value) <= kMaxMagnitude)) {
    std::ostringstream msg;
    msg << "coefficient " << label(flat) << " = " << c.value << " exceeds " << kMaxMagnitude << " in magnitude";
    throw DataError(msg.str());
  }
  if (flat == 0 && std::abs(c.value - 1) > 1e-12) {
    throw DataError("identity coefficient must be 1");
  }
  table_.at(flat) = c;
}

CMatrix AccessibleChoi::assemble() const {
  const auto& ops = component_operators();
  const std::size_t d = std::size_t{1} << (2 * n_pairs_);
  CMatrix out(d);
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    const auto& c = table_[flat];
    if (c.source == CoefficientSource::kAbsent || c.value == 0) {
      continue;
    }
    const CMatrix op = n_pairs_ == 1 ? ops[flat]
                                     : kron(ops[flat / kComponentsPerPair], ops[flat % kComponentsPerPair]);
    out += op * Complex(c.value / static_cast<double>(d));
  }
  return out;
}

CMatrix AccessibleChoi::output_state() const {
  const std::size_t d = std::size_t{1} << n_pairs_;
  CMatrix out(d);
  auto output_pauli = [](int comp) -> char {
    const auto c = pair_component(comp);
    if (c.kind == ComponentKind::kIdentity) return 'I';
    if (c.kind == ComponentKind::kOutput) return kAxisLabels[c.axis];
    return 0;
  };
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    const auto& c = table_[flat];
    if (c.source == CoefficientSource::kAbsent) {
      continue;
    }
    std::string pauli;
    if (n_pairs_ == 1) {
      pauli = {output_pauli(static_cast<int>(flat))};
    } else {
      pauli = {output_pauli(static_cast<int>(flat / kComponentsPerPair)),
               output_pauli(static_cast<int>(flat % kComponentsPerPair))};
    }
    if (pauli.find('\0') != std::string::npos) {
      continue;
    }
    out += pauli_string_matrix(pauli) * Complex(c.value / static_cast<double>(d));
  }
  return out;
}

bool AccessibleChoi::has_output_marginals() const {
  auto output_like = [](int comp) {
    const auto kind = pair_component(comp).kind;
    return kind == ComponentKind::kIdentity || kind == ComponentKind::kOutput;
  };
  for (std::size_t flat = 1; flat < table_.size(); ++flat) {
    const bool relevant = n_pairs_ == 1 ? output_like(static_cast<int>(flat))
                                        : output_like(static_cast<int>(flat / kComponentsPerPair)) &&
                                              output_like(static_cast<int>(flat % kComponentsPerPair));
    if (relevant && table_[flat].source == CoefficientSource::kAbsent) {
      return false;
    }
  }
  return true;
}

bool AccessibleChoi::has_pair_correlators() const {
  for (int axis = 0; axis < 3; ++axis) {
    const int comp = pair_component_index({ComponentKind::kCorrelator, axis});
    if (n_pairs_ == 1) {
      if (table_[index(comp)].source == CoefficientSource::kAbsent) return false;
    } else if (table_[index(comp, 0)].source == CoefficientSource::kAbsent ||
               table_[index(0, comp)].source == CoefficientSource::kAbsent) {
      return false;
    }
  }
  return true;
}

AccessibleChoi AccessibleChoi::pair_marginal(int which) const {
  if (n_pairs_ != 2 || (which != 0 && which != 1)) {
    throw ValidationError("pair_marginal needs a two-pair table and which in {0, 1}");
  }
  AccessibleChoi out(1);
  for (int k = 1; k < kComponentsPerPair; ++k) {
    out.table_[static_cast<std::size_t>(k)] = table_[which == 0 ? index(k, 0) : index(0, k)];
  }
  out.assumptions = assumptions;
  return out;
}

AccessibleChoi accessible_choi_from_channel(const PauliChannel& ch) {
  const CMatrix c = choi(ch);
  const auto& ops = component_operators();
  AccessibleChoi out(ch.n_qubits());
  for (std::size_t flat = 1; flat < out.size(); ++flat) {
    const CMatrix op =
        ch.n_qubits() == 1 ? ops[flat] : kron(ops[flat / kComponentsPerPair], ops[flat % kComponentsPerPair]);
    out.set(flat, {(c * op).trace().real(), 0.0, CoefficientSource::kMeasured});
  }
  return out;
}

ProbVector bell_probabilities(const AccessibleChoi& choi) {
  if (choi.n_pairs() != 1) {
    throw ValidationError("bell_probabilities needs a one-pair table");
  }
  auto corr = [&](int axis) {
    const auto& c = choi.at(choi.index(pair_component_index({ComponentKind::kCorrelator, axis})));
    return c.source == CoefficientSource::kAbsent ? 0.0 : c.value;
  };
  const double cx = corr(0), cy = corr(1), cz = corr(2);
  return ProbVector({(1 + cx + cy + cz) / 4, (1 - cx - cy + cz) / 4, (1 + cx - cy - cz) / 4, (1 - cx + cy - cz) / 4});
}

ProbVector probability_vector(const AccessibleChoi& choi, const BasisSpec& basis) {
  if (static_cast<int>(basis.pairs.size()) != choi.n_pairs()) {
    throw ValidationError("basis pair count does not match the correlator table");
  }
  EntropyEvaluator eval(choi);
  return ProbVector(eval.probabilities(basis));
}

ProbVector probability_vector(const CMatrix& op, const BasisSpec& basis) {
  const auto vecs = basis_vectors(basis);
  if (vecs.front().size() != op.dim()) {
    throw ValidationError("basis dimension does not match the operator");
  }
  std::vector<double> probs;
  for (const auto& v : vecs) {
    probs.push_back(expectation(op, v));
  }
  return ProbVector(std::move(probs));
}

WitnessResult q_det(const AccessibleChoi& choi, const SearchConfig& config, std::span<const BasisSpec> warm_starts) {
  if (config.grid < 0 || config.refine_starts < 1) {
    throw ConfigError("search config: grid must be >= 0 and refine_starts >= 1");
  }
  EntropyEvaluator eval(choi);

  std::vector<Candidate> starts;
  if (config.grid > 0) {
    starts = grid_search(eval, config);
  }
  for (const auto& w : warm_starts) {
    if (static_cast<int>(w.pairs.size()) != choi.n_pairs()) {
      throw ValidationError("warm start has the wrong number of pairs");
    }
    starts.push_back({w, eval(w)});
  }
  if (starts.empty()) {
    // Bell bases of every family combination.
    for (auto f1 : {BasisFamily::kB1, BasisFamily::kB2, BasisFamily::kB3}) {
      if (choi.n_pairs() == 1) {
        BasisSpec b{{{f1, 0, 0}}};
        starts.push_back({b, eval(b)});
        continue;
      }
      for (auto f2 : {BasisFamily::kB1, BasisFamily::kB2, BasisFamily::kB3}) {
        BasisSpec b{{{f1, 0, 0}, {f2, 0, 0}}};
        starts.push_back({b, eval(b)});
      }
    }
  }

  std::vector<Candidate> pool = starts;
  if (config.refine) {
    for (const auto& s : starts) {
      pool.push_back(refine(eval, s, config));
    }
  }
  pool = rank_candidates(std::move(pool), config.tolerance);

  WitnessResult r;
  r.best_basis = pool.front().basis;
  r.min_entropy = pool.front().entropy;
  r.prob_vector = ProbVector(eval.probabilities(r.best_basis));
  r.output_entropy = von_neumann_entropy(choi.output_state());
  r.q_det_raw = r.output_entropy - r.min_entropy;
  r.clamped = r.q_det_raw < 0;
  r.q_det = std::max(0.0, r.q_det_raw);
  for (const auto& c : pool) {
    if (r.candidates.size() >= static_cast<std::size_t>(config.refine_starts)) {
      break;
    }
    if (std::none_of(r.candidates.begin(), r.candidates.end(), [&](const BasisSpec& b) { return b == c.basis; })) {
      r.candidates.push_back(c.basis);
    }
  }
  r.assumptions = choi.assumptions;
  if (!choi.has_output_marginals()) {
    r.assumptions.push_back("unital_output_assumed");
  }
  return r;
}

CapacityReport q_lim(const AccessibleChoi& choi, const SearchConfig& config) {
  if (choi.n_pairs() != 2) {
    throw ValidationError("q_lim needs a two-pair correlator table");
  }
  if (!choi.has_pair_correlators()) {
    throw DataError("single-pair correlators are absent; fit the channel to estimate Q1 and Q2");
  }
  CapacityReport r;
  r.q1 = q_det(choi.pair_marginal(0), config).q_det;
  r.q2 = q_det(choi.pair_marginal(1), config).q_det;
  r.q_lim = r.q1 + r.q2;
  for (int k = 0; k < 3; ++k) {
    const int comp = pair_component_index({ComponentKind::kCorrelator, k});
    if (choi.at(choi.index(comp, 0)).source == CoefficientSource::kImputed ||
        choi.at(choi.index(0, comp)).source == CoefficientSource::kImputed) {
      r.model_assisted = true;
    }
  }
  return r;
}

CapacityReport q_lim(const ChannelParams& params, const SearchConfig& config) {
  CapacityReport r = q_lim(accessible_choi_from_channel(correlated_channel(params)), config);
  r.model_assisted = true;
  return r;
}

double bootstrap_error(const AccessibleChoi& choi, const BootstrapConfig& config, const SearchConfig& nominal_search) {
  return bootstrap_error(choi, config, q_det(choi, nominal_search));
}

double bootstrap_error(const AccessibleChoi& choi, const BootstrapConfig& config, const WitnessResult& nominal) {
  if (config.resamples < 10) {
    throw ConfigError("bootstrap needs at least 10 resamples");
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(config.resamples));
  for (int r = 0; r < config.resamples; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    AccessibleChoi resampled = choi;
    for (std::size_t flat = 1; flat < choi.size(); ++flat) {
      const auto& c = choi.at(flat);
      if (c.source != CoefficientSource::kMeasured || !(c.sigma > 0)) {
        continue;
      }
      Coefficient drawn = c;
      drawn.value = std::clamp(c.value + c.sigma * normal(rng), -1.0, 1.0);
      resampled.set(flat, drawn);
    }
    if (config.refresh) {
      resampled = config.refresh(resampled);
    }
    values.push_back(q_det(resampled, config.search, nominal.candidates).q_det_raw);
  }
  double mean = 0;
  for (double v : values) {
    mean += v;
  }
  mean /= static_cast<double>(values.size());
  double var = 0;
  for (double v : values) {
    var += (v - mean) * (v - mean);
  }
  return std::sqrt(var / static_cast<double>(values.size() - 1));
}

}  // namespace capwit
