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

// Separable prepare-and-measure simulation.
//
// Each setting fixes one Pauli axis per pair. The input qubit of the pair is
// prepared in a uniformly random eigenstate of that axis, sent through the
// channel, and measured along the same axis. The joint record of preparation
// and outcome eigenvalues gives every matched-axis Choi component:
//   <s^T (x) s> = E[prep * out],  <s^T (x) I> = E[prep],  <I (x) s> = E[out].

#ifndef CAPWIT_MEASURE_H
#define CAPWIT_MEASURE_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "capwit/channels.h"
#include "capwit/witness.h"

namespace capwit {

/// Outcome index layout for n pairs: bits (prep_1 .. prep_n, out_1 .. out_n),
/// prep_1 most significant; a set bit means eigenvalue -1.
std::size_t outcome_index(std::span<const int> prep_signs, std::span<const int> out_signs);

/// One measurement setting, one axis character per pair, e.g. "XZ".
struct SettingData {
  std::string axes;
  std::int64_t shots = 0;
  /// Sampled mode: outcome counts, size 4^n.
  std::vector<std::int64_t> counts;
  /// Exact mode: outcome probabilities, size 4^n.
  std::vector<double> probabilities;
};

struct RecordCoefficient {
  std::string component;  // AccessibleChoi label, e.g. "XX|IY"
  double value = 0;
  double sigma = 0;
};

struct CorrelatorRecord {
  int n_pairs = 1;
  Convention convention = Convention::kTranspose;
  bool sampled = false;
  std::optional<std::uint64_t> seed;
  std::int64_t shots_per_setting = 0;
  bool poisson_shots = false;
  std::optional<PauliChannel> channel;
  std::vector<SettingData> settings;
  std::vector<RecordCoefficient> coefficients;
};

/// All 3^n settings in lexicographic X < Y < Z order.
std::vector<std::string> all_settings(int n_pairs);

/// Exact joint distribution over the outcome index for one setting.
std::vector<double> joint_distribution(const PauliChannel& ch, const std::string& axes);

CorrelatorRecord exact_record(const PauliChannel& ch);

struct SampleOptions {
  std::int64_t shots_per_setting = 10000;
  std::uint64_t seed = 0;
  /// Draw each setting's total from Poisson(shots_per_setting).
  bool poisson_shots = false;
};

/// Multinomial draw per setting. The setting with index k uses an mt19937_64
/// seeded from (seed, k).
CorrelatorRecord sampled_record(const PauliChannel& ch, const SampleOptions& options);

/// Transfers the record's coefficients, converted to the transpose
/// convention, with sigmas.
AccessibleChoi record_to_accessible_choi(const CorrelatorRecord& rec);

}  // namespace capwit

#endif  // CAPWIT_MEASURE_H
