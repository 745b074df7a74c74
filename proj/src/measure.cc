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

#include "capwit/measure.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "capwit/errors.h"

namespace capwit {

namespace {

constexpr char kAxes[3] = {'X', 'Y', 'Z'};

std::vector<int> components_of(const AccessibleChoi& table, std::size_t flat) {
  if (table.n_pairs() == 1) {
    return {static_cast<int>(flat)};
  }
  return {static_cast<int>(flat / kComponentsPerPair), static_cast<int>(flat % kComponentsPerPair)};
}

// Setting that estimates a component product: each pair's own axis, X where
// the pair only contributes the identity.
std::string canonical_setting(std::span<const int> comps) {
  std::string axes;
  for (int c : comps) {
    const auto pc = pair_component(c);
    axes.push_back(pc.kind == ComponentKind::kIdentity ? 'X' : kAxes[pc.axis]);
  }
  return axes;
}

// +-1 value of a component product on one outcome.
int product_sign(std::span<const int> comps, std::size_t outcome) {
  const std::size_t n = comps.size();
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const bool prep_neg = (outcome >> (2 * n - 1 - k)) & 1;
    const bool out_neg = (outcome >> (n - 1 - k)) & 1;
    switch (pair_component(comps[k]).kind) {
      case ComponentKind::kIdentity:
        break;
      case ComponentKind::kReference:
        sign *= prep_neg ? -1 : 1;
        break;
      case ComponentKind::kOutput:
        sign *= out_neg ? -1 : 1;
        break;
      case ComponentKind::kCorrelator:
        sign *= (prep_neg != out_neg) ? -1 : 1;
        break;
    }
  }
  return sign;
}

CMatrix eigen_projector(std::string_view axes, std::size_t bits) {
  CMatrix out = CMatrix::identity(1);
  const std::size_t n = axes.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double s = ((bits >> (n - 1 - k)) & 1) ? -1.0 : 1.0;
    const CMatrix proj = (CMatrix::identity(2) + CMatrix::pauli(axes[k]) * Complex(s)) * Complex(0.5);
    out = kron(out, proj);
  }
  return out;
}

void check_axes(const std::string& axes, int n_pairs) {
  if (static_cast<int>(axes.size()) != n_pairs ||
      std::any_of(axes.begin(), axes.end(), [](char c) { return c != 'X' && c != 'Y' && c != 'Z'; })) {
    throw ValidationError("invalid setting '" + axes + "'");
  }
}

const SettingData& find_setting(const CorrelatorRecord& rec, const std::string& axes) {
  for (const auto& s : rec.settings) {
    if (s.axes == axes) {
      return s;
    }
  }
  throw DataError("record has no setting '" + axes + "'");
}

// Fills rec.coefficients from the per-setting data.
void derive_coefficients(CorrelatorRecord& rec) {
  const AccessibleChoi table(rec.n_pairs);
  rec.coefficients.clear();
  for (std::size_t flat = 1; flat < table.size(); ++flat) {
    const auto comps = components_of(table, flat);
    const auto& s = find_setting(rec, canonical_setting(comps));
    RecordCoefficient c{table.label(flat), 0.0, 0.0};
    if (rec.sampled) {
      std::int64_t total = 0;
      double sum = 0;
      for (std::size_t o = 0; o < s.counts.size(); ++o) {
        total += s.counts[o];
        sum += static_cast<double>(product_sign(comps, o) * s.counts[o]);
      }
      if (total > 0) {
        c.value = sum / static_cast<double>(total);
        c.sigma = std::sqrt(std::max(0.0, 1 - c.value * c.value) / static_cast<double>(total));
      } else {
        c.sigma = 1;
      }
    } else {
      for (std::size_t o = 0; o < s.probabilities.size(); ++o) {
        c.value += product_sign(comps, o) * s.probabilities[o];
      }
    }
    rec.coefficients.push_back(std::move(c));
  }
}

}  // namespace

std::size_t outcome_index(std::span<const int> prep_signs, std::span<const int> out_signs) {
  if (prep_signs.size() != out_signs.size()) {
    throw ValidationError("outcome_index: prep and out sizes differ");
  }
  std::size_t idx = 0;
  for (int s : prep_signs) {
    idx = (idx << 1) | (s < 0 ? 1 : 0);
  }
  for (int s : out_signs) {
    idx = (idx << 1) | (s < 0 ? 1 : 0);
  }
  return idx;
}

std::vector<std::string> all_settings(int n_pairs) {
  if (n_pairs != 1 && n_pairs != 2) {
    throw ValidationError("settings exist for 1 or 2 pairs");
  }
  std::vector<std::string> out;
  for (char a : kAxes) {
    if (n_pairs == 1) {
      out.push_back({a});
      continue;
    }
    for (char b : kAxes) {
      out.push_back({a, b});
    }
  }
  return out;
}

std::vector<double> joint_distribution(const PauliChannel& ch, const std::string& axes) {
  const int n = ch.n_qubits();
  check_axes(axes, n);
  const std::size_t half = std::size_t{1} << n;
  std::vector<CMatrix> projectors;
  for (std::size_t bits = 0; bits < half; ++bits) {
    projectors.push_back(eigen_projector(axes, bits));
  }
  std::vector<double> dist(half * half);
  for (std::size_t prep = 0; prep < half; ++prep) {
    const CMatrix out_state = apply(ch, projectors[prep]);
    for (std::size_t out = 0; out < half; ++out) {
      dist[prep * half + out] = (out_state * projectors[out]).trace().real() / static_cast<double>(half);
    }
  }
  return dist;
}

CorrelatorRecord exact_record(const PauliChannel& ch) {
  CorrelatorRecord rec;
  rec.n_pairs = ch.n_qubits();
  rec.channel = ch;
  for (const auto& axes : all_settings(rec.n_pairs)) {
    rec.settings.push_back({axes, 0, {}, joint_distribution(ch, axes)});
  }
  derive_coefficients(rec);
  return rec;
}

CorrelatorRecord sampled_record(const PauliChannel& ch, const SampleOptions& options) {
  if (options.shots_per_setting < 1) {
    throw ConfigError("shots_per_setting must be >= 1");
  }
  CorrelatorRecord rec;
  rec.n_pairs = ch.n_qubits();
  rec.sampled = true;
  rec.seed = options.seed;
  rec.shots_per_setting = options.shots_per_setting;
  rec.poisson_shots = options.poisson_shots;
  rec.channel = ch;
  const auto settings = all_settings(rec.n_pairs);
  for (std::size_t k = 0; k < settings.size(); ++k) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::int64_t shots = options.shots_per_setting;
    if (options.poisson_shots) {
      shots = std::poisson_distribution<std::int64_t>(static_cast<double>(shots))(rng);
    }
    auto probs = joint_distribution(ch, settings[k]);
    for (auto& p : probs) {
      p = std::max(p, 0.0);
    }
    // Multinomial as a chain of conditional binomials.
    std::vector<std::int64_t> counts(probs.size());
    std::int64_t left = shots;
    double mass = 0;
    for (double p : probs) {
      mass += p;
    }
    for (std::size_t o = 0; o + 1 < probs.size() && left > 0; ++o) {
      const double q = mass > 0 ? std::clamp(probs[o] / mass, 0.0, 1.0) : 0.0;
      counts[o] = std::binomial_distribution<std::int64_t>(left, q)(rng);
      left -= counts[o];
      mass -= probs[o];
    }
    counts.back() += left;
    rec.settings.push_back({settings[k], shots, std::move(counts), {}});
  }
  derive_coefficients(rec);
  return rec;
}

AccessibleChoi record_to_accessible_choi(const CorrelatorRecord& rec) {
  AccessibleChoi out(rec.n_pairs);
  for (const auto& c : rec.coefficients) {
    const std::size_t flat = out.parse_label(c.component);
    if (flat == 0) {
      continue;
    }
    double value = c.value;
    if (rec.convention == Convention::kNoTranspose) {
      for (int comp : components_of(out, flat)) {
        const auto pc = pair_component(comp);
        const bool reference_side = pc.kind == ComponentKind::kReference || pc.kind == ComponentKind::kCorrelator;
        if (reference_side && pc.axis == 1) {
          value = -value;
        }
      }
    }
    out.set(flat, {value, c.sigma, CoefficientSource::kMeasured});
  }
  return out;
}

}  // namespace capwit
