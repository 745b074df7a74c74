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

// Pauli channels on one or two qubits, the correlated bit-flip family, Choi
// operators, and the liquid-crystal voltage schedules that realize the family.

#ifndef CAPWIT_CHANNELS_H
#define CAPWIT_CHANNELS_H

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "capwit/errors.h"
#include "capwit/qmath.h"

namespace capwit {

using Rational = boost::rational<std::int64_t>;

/// Generic CPTP map in Kraus form.
class KrausChannel {
 public:
  KrausChannel(std::size_t in_dim, std::size_t out_dim, std::vector<CMatrix> kraus_ops);

  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }
  const std::vector<CMatrix>& kraus_ops() const { return ops_; }

  CMatrix apply(const CMatrix& rho) const;

 private:
  std::size_t in_dim_;
  std::size_t out_dim_;
  std::vector<CMatrix> ops_;
};

/// Probability distribution over Pauli strings such as "IX" (first character
/// acts on qubit 1). Strings with zero probability may be omitted.
class PauliChannel {
 public:
  PauliChannel(int n_qubits, std::map<std::string, double> probs);

  static PauliChannel identity(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const std::map<std::string, double>& probs() const { return probs_; }
  double prob(std::string_view pauli_string) const;

  KrausChannel to_kraus() const;

 private:
  int n_qubits_;
  std::map<std::string, double> probs_;
};

/// All 4^n Pauli strings in lexicographic I < X < Y < Z order.
std::vector<std::string> pauli_strings(int n_qubits);
/// Tensor product of single-qubit Paulis, first character most significant.
CMatrix pauli_string_matrix(std::string_view s);

/// Flip probability and correlation strength of the correlated bit-flip family.
struct ChannelParams {
  double p = 0;
  double mu = 0;
};

struct ExactChannelParams {
  Rational p;
  Rational mu;
};

/// A(IX) = A(XI) = p(1-p)(1-mu).
double flip_overlap(const ChannelParams& params);

/// {II: 1-p-A, IX: A, XI: A, XX: p-A} with A = flip_overlap(params).
PauliChannel correlated_channel(const ChannelParams& params);
/// Exact coefficients (II, IX, XI, XX).
std::array<Rational, 4> correlated_coefficients(const ExactChannelParams& params);

CMatrix apply(const PauliChannel& ch, const CMatrix& rho);

/// (I_R (x) E)(|phi+><phi+|) per qubit, tensor order (R1, S1, R2, S2).
CMatrix choi(const PauliChannel& ch);

/// Single-qubit reduction on qubit `which` (1 or 2).
PauliChannel marginal(const PauliChannel& ch, int which);

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Ideal two-qubit correlators <s_i (x) s_j> in the reporting convention of the
/// experimental tables (Choi correlators without reference transposition), with
/// i, j running over X, Y, Z.
Matrix3 theory_correlators(const ChannelParams& params);

// ---------------------------------------------------------------------------
// Voltage schedules.

enum class Level : std::uint8_t { kV0, kVX };

template <class T>
struct Segment {
  T duration;
  Level level;
  bool operator==(const Segment&) const = default;
};

/// Piecewise-constant two-level voltage sequence for one LC arm.
template <class T>
class BasicSchedule {
 public:
  explicit BasicSchedule(std::vector<Segment<T>> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) {
      throw ValidationError("schedule needs at least one segment");
    }
    for (const auto& s : segments_) {
      if (!(s.duration > T(0))) {
        throw ValidationError("schedule segment durations must be positive");
      }
    }
  }

  const std::vector<Segment<T>>& segments() const { return segments_; }

  T total() const {
    T t(0);
    for (const auto& s : segments_) {
      t += s.duration;
    }
    return t;
  }

  T time_at(Level level) const {
    T t(0);
    for (const auto& s : segments_) {
      if (s.level == level) {
        t += s.duration;
      }
    }
    return t;
  }

  bool operator==(const BasicSchedule&) const = default;

 private:
  std::vector<Segment<T>> segments_;
};

using Schedule = BasicSchedule<double>;
using ExactSchedule = BasicSchedule<Rational>;

/// Fraction of the counting time each level pair is held, ordered
/// (V0,V0), (V0,VX), (VX,V0), (VX,VX), i.e. Pauli strings II, IX, XI, XX.
template <class T>
std::array<T, 4> overlap_fractions(const BasicSchedule<T>& arm1, const BasicSchedule<T>& arm2);

PauliChannel schedule_to_channel(const Schedule& arm1, const Schedule& arm2);
PauliChannel schedule_to_channel(const ExactSchedule& arm1, const ExactSchedule& arm2);

/// Arm 1 switches V0 -> VX once; arm 2 switches to VX early for A*Tc and back
/// for A*Tc, so both arms spend p*Tc at VX.
std::pair<Schedule, Schedule> channel_to_schedules(const ChannelParams& params, double tc);
std::pair<ExactSchedule, ExactSchedule> channel_to_schedules(const ExactChannelParams& params, Rational tc);

// ---------------------------------------------------------------------------
// Fitting the correlated family to measured correlators.

struct Measured {
  double value = 0;
  double sigma = 0;
};

using MeasuredMatrix3 = std::array<std::array<Measured, 3>, 3>;

struct ChannelFit {
  double p = 0;
  /// Absent when p(1-p) < 1e-9.
  std::optional<double> mu;
  /// II, IX, XI, XX.
  std::array<double, 4> coefficients{};
  /// Sum of squared sigma-weighted residuals over all nine entries.
  double residual = 0;

  /// Requires mu.
  ChannelParams params() const;
};

/// Weighted least squares of theory_correlators over the probability simplex
/// of (A_II, A_IX = A_XI, A_XX). Entries with sigma <= 0 get unit weight.
ChannelFit fit_channel(const MeasuredMatrix3& correlators);

}  // namespace capwit

#endif  // CAPWIT_CHANNELS_H
