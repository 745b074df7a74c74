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
#include <vector>

#include "capwit/errors.h"

namespace capwit {

namespace {

constexpr double kDropEigenvalue = 1e-14;

}  // namespace

double exact_capacity(const ChannelParams& params) {
  flip_overlap(params);  // validates the domain
  const double p = params.p, mu = params.mu;
  return 2 - p * binary_entropy((1 - p) * (1 - mu)) - (1 - p) * binary_entropy(p * (1 - mu)) - binary_entropy(p);
}

double dephasing_capacity(double p) {
  if (!(p >= 0 && p <= 1)) {
    throw DomainError("dephasing_capacity: p outside [0, 1]");
  }
  return 1 - binary_entropy(p);
}

CapacityReport capacity_report(const ChannelParams& params) {
  CapacityReport r;
  r.q_exact = exact_capacity(params);
  r.q1 = r.q2 = dephasing_capacity(params.p);
  r.q_lim = r.q1 + r.q2;
  return r;
}

double coherent_information(const KrausChannel& ch, const CMatrix& rho) {
  if (rho.dim() != ch.in_dim()) {
    throw ValidationError("coherent_information: state dimension does not match channel input");
  }
  const double output_entropy = von_neumann_entropy(ch.apply(rho));

  // |Psi> = sum_k sqrt(l_k) |k>_R |e_k>_S over the nonzero eigenvalues of rho.
  const EigenSystem eig = hermitian_eigensystem(rho);
  const std::size_t d = rho.dim();
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    if (eig.values[k] < -1e-10) {
      throw ValidationError("coherent_information: state has a negative eigenvalue");
    }
    if (eig.values[k] > kDropEigenvalue) {
      support.push_back(k);
    }
  }
  const std::size_t r = support.size();
  CVector psi(r * d);
  for (std::size_t slot = 0; slot < r; ++slot) {
    const std::size_t k = support[slot];
    const double amp = std::sqrt(eig.values[k]);
    for (std::size_t s = 0; s < d; ++s) {
      psi[slot * d + s] = amp * eig.vectors[k][s];
    }
  }
  const CMatrix purified = CMatrix::projector(psi);
  CMatrix joint(r * ch.out_dim());
  const CMatrix id_r = CMatrix::identity(r);
  for (const auto& k : ch.kraus_ops()) {
    const CMatrix lifted = kron(id_r, k);
    joint += lifted * purified * lifted.adjoint();
  }
  return output_entropy - von_neumann_entropy(joint);
}

double pauli_coherent_information(const PauliChannel& ch) {
  std::vector<double> probs;
  for (const auto& [s, p] : ch.probs()) {
    probs.push_back(p);
  }
  return ch.n_qubits() - shannon_entropy(std::span<const double>(probs));
}

}  // namespace capwit
