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

#ifndef CAPWIT_CAPACITY_H
#define CAPWIT_CAPACITY_H

#include <optional>

#include "capwit/channels.h"
#include "capwit/qmath.h"

namespace capwit {

/// Capacities in qubits per channel use. q_lim = q1 + q2 is the capacity
/// available when the two channels are used independently.
struct CapacityReport {
  std::optional<double> q_exact;
  double q1 = 0;
  double q2 = 0;
  double q_lim = 0;
  /// Set when q1/q2 came from a fitted channel model instead of measured
  /// single-pair correlators.
  bool model_assisted = false;
};

/// Closed-form quantum capacity of the correlated bit-flip channel:
///   Q = 2 - p H2[(1-p)(1-mu)] - (1-p) H2[p(1-mu)] - H2(p).
double exact_capacity(const ChannelParams& params);

/// 1 - H2(p), the capacity of a single-qubit flip channel.
double dephasing_capacity(double p);

/// exact_capacity together with the independent-use limit 2 (1 - H2(p)).
CapacityReport capacity_report(const ChannelParams& params);

/// I_c = S[E(rho)] - S_e(rho, E), with the entropy exchange evaluated on the
/// eigen-purification of rho.
double coherent_information(const KrausChannel& ch, const CMatrix& rho);

/// n - H(probs): the coherent information of a Pauli channel at the maximally
/// mixed input.
double pauli_coherent_information(const PauliChannel& ch);

}  // namespace capwit

#endif  // CAPWIT_CAPACITY_H
