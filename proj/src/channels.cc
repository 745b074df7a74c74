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

#include "capwit/channels.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <type_traits>

namespace capwit {

namespace {

constexpr double kProbTolerance = 1e-12;
constexpr char kPauliLabels[4] = {'I', 'X', 'Y', 'Z'};

void check_unit_interval(double x, const char* name) {
  if (!(x >= 0 && x <= 1)) {
    std::ostringstream msg;
    msg << name << " = " << x << " outside [0, 1]";
    throw DomainError(msg.str());
  }
}

void check_unit_interval(const Rational& x, const char* name) {
  if (x < 0 || x > 1) {
    std::ostringstream msg;
    msg << name << " = " << x << " outside [0, 1]";
    throw DomainError(msg.str());
  }
}

// (I (x) sigma)|phi+> for one reference/system pair.
CVector bell_image(char pauli) {
  const double r = 1 / std::sqrt(2.0);
  const CVector phi_plus{r, 0, 0, r};
  return kron(CMatrix::identity(2), CMatrix::pauli(pauli)) * std::span<const Complex>(phi_plus);
}

}  // namespace

KrausChannel::KrausChannel(std::size_t in_dim, std::size_t out_dim, std::vector<CMatrix> kraus_ops)
    : in_dim_(in_dim), out_dim_(out_dim), ops_(std::move(kraus_ops)) {
  if (in_dim_ != out_dim_) {
    throw ValidationError("KrausChannel: only square Kraus operators are supported");
  }
  if (ops_.empty()) {
    throw ValidationError("KrausChannel: no Kraus operators");
  }
  CMatrix completeness(in_dim_);
  for (const auto& k : ops_) {
    if (k.dim() != in_dim_) {
      throw ValidationError("KrausChannel: Kraus operator dimension mismatch");
    }
    completeness += k.adjoint() * k;
  }
  const double dev = (completeness - CMatrix::identity(in_dim_)).frobenius_norm();
  if (dev > 1e-10) {
    std::ostringstream msg;
    msg << "KrausChannel: sum K^dag K deviates from identity by " << dev;
    throw ValidationError(msg.str());
  }
}

CMatrix KrausChannel::apply(const CMatrix& rho) const {
  if (rho.dim() != in_dim_) {
    throw ValidationError("KrausChannel::apply: state dimension mismatch");
  }
  CMatrix out(out_dim_);
  for (const auto& k : ops_) {
    out += k * rho * k.adjoint();
  }
  return out;
}

PauliChannel::PauliChannel(int n_qubits, std::map<std::string, double> probs)
    : n_qubits_(n_qubits), probs_(std::move(probs)) {
  if (n_qubits_ != 1 && n_qubits_ != 2) {
    throw ValidationError("PauliChannel supports 1 or 2 qubits");
  }
  double total = 0;
  for (const auto& [s, p] : probs_) {
    if (static_cast<int>(s.size()) != n_qubits_ ||
        !std::all_of(s.begin(), s.end(), [](char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; })) {
      throw ValidationError("PauliChannel: invalid Pauli string '" + s + "'");
    }
    if (!(p >= 0)) {
      std::ostringstream msg;
      msg << "PauliChannel: negative probability " << p << " for " << s;
      throw ValidationError(msg.str());
    }
    total += p;
  }
  if (std::abs(total - 1) > kProbTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "PauliChannel: probabilities sum to " << total;
    throw ValidationError(msg.str());
  }
}

PauliChannel PauliChannel::identity(int n_qubits) {
  return PauliChannel(n_qubits, {{std::string(static_cast<std::size_t>(n_qubits), 'I'), 1.0}});
}

double PauliChannel::prob(std::string_view pauli_string) const {
  auto it = probs_.find(std::string(pauli_string));
  return it == probs_.end() ? 0.0 : it->second;
}

KrausChannel PauliChannel::to_kraus() const {
  std::vector<CMatrix> ops;
  for (const auto& [s, p] : probs_) {
    if (p > 0) {
      ops.push_back(pauli_string_matrix(s) * Complex(std::sqrt(p)));
    }
  }
  const std::size_t d = std::size_t{1} << n_qubits_;
  return KrausChannel(d, d, std::move(ops));
}

std::vector<std::string> pauli_strings(int n_qubits) {
  std::vector<std::string> out{""};
  for (int q = 0; q < n_qubits; ++q) {
    std::vector<std::string> next;
    for (const auto& prefix : out) {
      for (char c : kPauliLabels) {
        next.push_back(prefix + c);
      }
    }
    out = std::move(next);
  }
  return out;
}

CMatrix pauli_string_matrix(std::string_view s) {
  if (s.empty()) {
    throw ValidationError("empty Pauli string");
  }
  CMatrix m = CMatrix::pauli(s[0]);
  for (std::size_t k = 1; k < s.size(); ++k) {
    m = kron(m, CMatrix::pauli(s[k]));
  }
  return m;
}

double flip_overlap(const ChannelParams& params) {
  check_unit_interval(params.p, "p");
  check_unit_interval(params.mu, "mu");
  return params.p * (1 - params.p) * (1 - params.mu);
}

PauliChannel correlated_channel(const ChannelParams& params) {
  const double a = flip_overlap(params);
  const double ii = 1 - params.p - a;
  const double xx = params.p - a;
  return PauliChannel(2, {{"II", ii}, {"IX", a}, {"XI", a}, {"XX", xx}});
}

std::array<Rational, 4> correlated_coefficients(const ExactChannelParams& params) {
  check_unit_interval(params.p, "p");
  check_unit_interval(params.mu, "mu");
  const Rational a = params.p * (1 - params.p) * (1 - params.mu);
  return {1 - params.p - a, a, a, params.p - a};
}

CMatrix apply(const PauliChannel& ch, const CMatrix& rho) {
  const std::size_t d = std::size_t{1} << ch.n_qubits();
  if (rho.dim() != d) {
    std::ostringstream msg;
    msg << "apply: state has dim " << rho.dim() << ", channel acts on dim " << d;
    throw ValidationError(msg.str());
  }
  CMatrix out(d);
  for (const auto& [s, p] : ch.probs()) {
    if (p == 0) {
      continue;
    }
    const CMatrix k = pauli_string_matrix(s);
    out += (k * rho * k) * Complex(p);
  }
  return out;
}

CMatrix choi(const PauliChannel& ch) {
  const std::size_t d = std::size_t{1} << (2 * ch.n_qubits());
  CMatrix out(d);
  for (const auto& [s, p] : ch.probs()) {
    if (p == 0) {
      continue;
    }
    CVector v = bell_image(s[0]);
    for (std::size_t k = 1; k < s.size(); ++k) {
      v = kron(std::span<const Complex>(v), std::span<const Complex>(bell_image(s[k])));
    }
    out += CMatrix::projector(v) * Complex(p);
  }
  return out;
}

PauliChannel marginal(const PauliChannel& ch, int which) {
  if (ch.n_qubits() != 2 || (which != 1 && which != 2)) {
    throw ValidationError("marginal: needs a two-qubit channel and which in {1, 2}");
  }
  std::map<std::string, double> probs;
  for (const auto& [s, p] : ch.probs()) {
    probs[std::string(1, s[static_cast<std::size_t>(which - 1)])] += p;
  }
  return PauliChannel(1, std::move(probs));
}

Matrix3 theory_correlators(const ChannelParams& params) {
  const double a4 = 4 * flip_overlap(params);
  const double p2 = 1 - 2 * params.p;
  return {{{1, -p2, p2}, {-p2, 1 - a4, -1 + a4}, {p2, -1 + a4, 1 - a4}}};
}

template <class T>
std::array<T, 4> overlap_fractions(const BasicSchedule<T>& arm1, const BasicSchedule<T>& arm2) {
  const T total = arm1.total();
  if (total != arm2.total()) {
    // Doubles get a relative tolerance; rationals must match exactly.
    if constexpr (std::is_floating_point_v<T>) {
      if (std::abs(total - arm2.total()) > 1e-9 * std::max(T(1), std::abs(total))) {
        throw ValidationError("schedules have different total durations");
      }
    } else {
      throw ValidationError("schedules have different total durations");
    }
  }
  std::array<T, 4> held{T(0), T(0), T(0), T(0)};
  const auto& s1 = arm1.segments();
  const auto& s2 = arm2.segments();
  auto exhausted = [&](const T& left) {
    if constexpr (std::is_floating_point_v<T>) {
      return left <= 1e-12 * total;
    } else {
      return left == T(0);
    }
  };
  std::size_t i = 0, j = 0;
  T left1 = s1[0].duration, left2 = s2[0].duration;
  while (i < s1.size() && j < s2.size()) {
    const T step = std::min(left1, left2);
    const int slot = (s1[i].level == Level::kVX ? 2 : 0) + (s2[j].level == Level::kVX ? 1 : 0);
    held[static_cast<std::size_t>(slot)] += step;
    left1 -= step;
    left2 -= step;
    if (exhausted(left1) && ++i < s1.size()) {
      left1 = s1[i].duration;
    }
    if (exhausted(left2) && ++j < s2.size()) {
      left2 = s2[j].duration;
    }
  }
  for (auto& h : held) {
    h /= total;
  }
  return held;
}

template std::array<double, 4> overlap_fractions(const Schedule&, const Schedule&);
template std::array<Rational, 4> overlap_fractions(const ExactSchedule&, const ExactSchedule&);

namespace {

PauliChannel channel_from_fractions(const std::array<double, 4>& f) {
  const double sum = f[0] + f[1] + f[2] + f[3];
  return PauliChannel(2, {{"II", f[0] / sum}, {"IX", f[1] / sum}, {"XI", f[2] / sum}, {"XX", f[3] / sum}});
}

template <class T>
BasicSchedule<T> make_schedule(std::initializer_list<Segment<T>> raw) {
  std::vector<Segment<T>> segs;
  for (const auto& s : raw) {
    if (!(s.duration > T(0))) {
      continue;
    }
    if (!segs.empty() && segs.back().level == s.level) {
      segs.back().duration += s.duration;
    } else {
      segs.push_back(s);
    }
  }
  return BasicSchedule<T>(std::move(segs));
}

template <class T>
std::pair<BasicSchedule<T>, BasicSchedule<T>> build_schedules(T p, T a, T tc) {
  const T one(1);
  auto arm1 = make_schedule<T>({{(one - p) * tc, Level::kV0}, {p * tc, Level::kVX}});
  auto arm2 = make_schedule<T>({{(one - p - a) * tc, Level::kV0},
                                {a * tc, Level::kVX},
                                {a * tc, Level::kV0},
                                {(p - a) * tc, Level::kVX}});
  return {std::move(arm1), std::move(arm2)};
}

}  // namespace

PauliChannel schedule_to_channel(const Schedule& arm1, const Schedule& arm2) {
  return channel_from_fractions(overlap_fractions(arm1, arm2));
}

PauliChannel schedule_to_channel(const ExactSchedule& arm1, const ExactSchedule& arm2) {
  const auto f = overlap_fractions(arm1, arm2);
  return channel_from_fractions({boost::rational_cast<double>(f[0]), boost::rational_cast<double>(f[1]),
                                 boost::rational_cast<double>(f[2]), boost::rational_cast<double>(f[3])});
}

std::pair<Schedule, Schedule> channel_to_schedules(const ChannelParams& params, double tc) {
  if (!(tc > 0)) {
    throw DomainError("counting time must be positive");
  }
  return build_schedules<double>(params.p, flip_overlap(params), tc);
}

std::pair<ExactSchedule, ExactSchedule> channel_to_schedules(const ExactChannelParams& params, Rational tc) {
  if (tc <= 0) {
    throw DomainError("counting time must be positive");
  }
  const auto a = correlated_coefficients(params)[1];
  return build_schedules<Rational>(params.p, a, tc);
}

ChannelParams ChannelFit::params() const {
  if (!mu) {
    throw DomainError("fit is degenerate (p(1-p) ~ 0): mu undefined");
  }
  return {p, *mu};
}

ChannelFit fit_channel(const MeasuredMatrix3& m) {
  for (const auto& row : m) {
    for (const auto& e : row) {
      if (!(std::abs(e.value) <= 1.05)) {
        std::ostringstream msg;
        msg << "fit_channel: correlator " << e.value << " outside [-1.05, 1.05]";
        throw DataError(msg.str());
      }
    }
  }
  auto weight = [](const Measured& e) { return e.sigma > 0 ? 1 / (e.sigma * e.sigma) : 1.0; };

  // Theory entries are affine in p (first row/column) or in A (lower block),
  // so the objective is Wp (p - p_hat)^2 + Wa (A - a_hat)^2 + const.
  struct Term {
    int r, c;
    double sign;  // theory = sign * (1 - 2p) or sign * (1 - 4A)
  };
  constexpr Term kPTerms[] = {{0, 1, -1}, {0, 2, 1}, {1, 0, -1}, {2, 0, 1}};
  constexpr Term kATerms[] = {{1, 1, 1}, {1, 2, -1}, {2, 1, -1}, {2, 2, 1}};
  double wp = 0, p_hat = 0, wa = 0, a_hat = 0;
  for (const auto& t : kPTerms) {
    const auto& e = m[static_cast<std::size_t>(t.r)][static_cast<std::size_t>(t.c)];
    const double w = 4 * weight(e);
    wp += w;
    p_hat += w * (1 - t.sign * e.value) / 2;
  }
  for (const auto& t : kATerms) {
    const auto& e = m[static_cast<std::size_t>(t.r)][static_cast<std::size_t>(t.c)];
    const double w = 16 * weight(e);
    wa += w;
    a_hat += w * (1 - t.sign * e.value) / 4;
  }
  p_hat /= wp;
  a_hat /= wa;

  auto objective = [&](double p, double a) { return wp * (p - p_hat) * (p - p_hat) + wa * (a - a_hat) * (a - a_hat); };
  auto feasible = [](double p, double a) { return a >= 0 && a <= p && a <= 1 - p; };

  double best_p = p_hat, best_a = a_hat;
  if (!feasible(p_hat, a_hat)) {
    // Minimum lies on the boundary of the triangle {A >= 0, A <= p, A <= 1 - p}.
    const double on_zero = std::clamp(p_hat, 0.0, 1.0);
    const double on_left = std::clamp((wp * p_hat + wa * a_hat) / (wp + wa), 0.0, 0.5);
    const double on_right = std::clamp((wp * p_hat + wa * (1 - a_hat)) / (wp + wa), 0.5, 1.0);
    const std::array<std::pair<double, double>, 3> candidates{
        {{on_zero, 0.0}, {on_left, on_left}, {on_right, 1 - on_right}}};
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [p, a] : candidates) {
      if (objective(p, a) < best) {
        best = objective(p, a);
        best_p = p;
        best_a = a;
      }
    }
  }

  ChannelFit fit;
  fit.p = best_p;
  fit.coefficients = {1 - best_p - best_a, best_a, best_a, best_p - best_a};
  const double pq = best_p * (1 - best_p);
  if (pq >= 1e-9) {
    fit.mu = std::clamp(1 - best_a / pq, 0.0, 1.0);
  }
  const double a4 = 4 * best_a, p2 = 1 - 2 * best_p;
  const Matrix3 theory{{{1, -p2, p2}, {-p2, 1 - a4, -1 + a4}, {p2, -1 + a4, 1 - a4}}};
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      const double d = theory[r][c] - m[r][c].value;
      fit.residual += weight(m[r][c]) * d * d;
    }
  }
  return fit;
}

}  // namespace capwit
