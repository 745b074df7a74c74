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

#include "capwit/qmath.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "capwit/errors.h"

namespace capwit {

namespace {

constexpr double kHermitianTolerance = 1e-10;
constexpr double kJacobiOffDiagonal = 1e-12;
constexpr int kJacobiMaxSweeps = 100;

double off_diagonal_norm(const CMatrix& m) {
  double s = 0;
  for (std::size_t r = 0; r < m.dim(); ++r) {
    for (std::size_t c = 0; c < m.dim(); ++c) {
      if (r != c) {
        s += std::norm(m(r, c));
      }
    }
  }
  return std::sqrt(s);
}

}  // namespace

CMatrix::CMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

CMatrix::CMatrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), entries_(std::move(entries)) {
  if (entries_.size() != dim * dim) {
    std::ostringstream msg;
    msg << "CMatrix of dim " << dim << " needs " << dim * dim << " entries, got " << entries_.size();
    throw ValidationError(msg.str());
  }
}

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    m(k, k) = 1;
  }
  return m;
}

CMatrix CMatrix::projector(std::span<const Complex> v) {
  CMatrix m(v.size());
  for (std::size_t r = 0; r < v.size(); ++r) {
    for (std::size_t c = 0; c < v.size(); ++c) {
      m(r, c) = v[r] * std::conj(v[c]);
    }
  }
  return m;
}

CMatrix CMatrix::pauli(char label) {
  const Complex i{0, 1};
  switch (label) {
    case 'I':
      return CMatrix(2, {1, 0, 0, 1});
    case 'X':
      return CMatrix(2, {0, 1, 1, 0});
    case 'Y':
      return CMatrix(2, {0, -i, i, 0});
    case 'Z':
      return CMatrix(2, {1, 0, 0, -1});
    default:
      throw ValidationError(std::string("unknown Pauli label '") + label + "'");
  }
}

Complex CMatrix::trace() const {
  Complex t = 0;
  for (std::size_t k = 0; k < dim_; ++k) {
    t += (*this)(k, k);
  }
  return t;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) {
      out(c, r) = std::conj((*this)(r, c));
    }
  }
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) {
      out(c, r) = (*this)(r, c);
    }
  }
  return out;
}

double CMatrix::max_asymmetry() const {
  double worst = 0;
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = r; c < dim_; ++c) {
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    }
  }
  return worst;
}

double CMatrix::frobenius_norm() const {
  double s = 0;
  for (const auto& e : entries_) {
    s += std::norm(e);
  }
  return std::sqrt(s);
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (other.dim_ != dim_) {
    throw ValidationError("CMatrix addition: dimension mismatch");
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    entries_[k] += other.entries_[k];
  }
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (other.dim_ != dim_) {
    throw ValidationError("CMatrix subtraction: dimension mismatch");
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    entries_[k] -= other.entries_[k];
  }
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& e : entries_) {
    e *= s;
  }
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.dim_ != b.dim_) {
    throw ValidationError("CMatrix product: dimension mismatch");
  }
  const std::size_t n = a.dim_;
  CMatrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex{}) {
        continue;
      }
      for (std::size_t c = 0; c < n; ++c) {
        out(r, c) += ark * b(k, c);
      }
    }
  }
  return out;
}

CVector operator*(const CMatrix& a, std::span<const Complex> v) {
  if (v.size() != a.dim_) {
    throw ValidationError("CMatrix-vector product: dimension mismatch");
  }
  CVector out(a.dim_);
  for (std::size_t r = 0; r < a.dim_; ++r) {
    for (std::size_t c = 0; c < a.dim_; ++c) {
      out[r] += a(r, c) * v[c];
    }
  }
  return out;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) {
    throw ValidationError("inner product: dimension mismatch");
  }
  Complex s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    s += std::conj(a[k]) * b[k];
  }
  return s;
}

double expectation(const CMatrix& m, std::span<const Complex> v) {
  return inner(v, m * v).real();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim();
  CMatrix out(na * nb);
  for (std::size_t ra = 0; ra < na; ++ra) {
    for (std::size_t ca = 0; ca < na; ++ca) {
      const Complex x = a(ra, ca);
      for (std::size_t rb = 0; rb < nb; ++rb) {
        for (std::size_t cb = 0; cb < nb; ++cb) {
          out(ra * nb + rb, ca * nb + cb) = x * b(rb, cb);
        }
      }
    }
  }
  return out;
}

CVector kron(std::span<const Complex> a, std::span<const Complex> b) {
  CVector out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) {
      out.push_back(x * y);
    }
  }
  return out;
}

CMatrix partial_trace(const CMatrix& m, std::span<const std::size_t> dims, std::span<const bool> keep) {
  if (dims.size() != keep.size() || dims.empty()) {
    throw ValidationError("partial_trace: dims and keep mask must have equal nonzero length");
  }
  const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (total != m.dim()) {
    std::ostringstream msg;
    msg << "partial_trace: subsystem dims multiply to " << total << " but matrix has dim " << m.dim();
    throw ValidationError(msg.str());
  }
  const std::size_t n_sub = dims.size();
  std::size_t kept_dim = 1;
  for (std::size_t s = 0; s < n_sub; ++s) {
    if (keep[s]) {
      kept_dim *= dims[s];
    }
  }

  // Digits of a flat index in mixed radix `dims` (most significant first).
  auto digits = [&](std::size_t flat) {
    std::vector<std::size_t> d(n_sub);
    for (std::size_t s = n_sub; s-- > 0;) {
      d[s] = flat % dims[s];
      flat /= dims[s];
    }
    return d;
  };
  auto kept_index = [&](const std::vector<std::size_t>& d) {
    std::size_t idx = 0;
    for (std::size_t s = 0; s < n_sub; ++s) {
      if (keep[s]) {
        idx = idx * dims[s] + d[s];
      }
    }
    return idx;
  };

  CMatrix out(kept_dim);
  for (std::size_t r = 0; r < m.dim(); ++r) {
    const auto dr = digits(r);
    for (std::size_t c = 0; c < m.dim(); ++c) {
      const auto dc = digits(c);
      bool traced_diagonal = true;
      for (std::size_t s = 0; s < n_sub && traced_diagonal; ++s) {
        traced_diagonal = keep[s] || dr[s] == dc[s];
      }
      if (traced_diagonal) {
        out(kept_index(dr), kept_index(dc)) += m(r, c);
      }
    }
  }
  return out;
}

EigenSystem hermitian_eigensystem(const CMatrix& m) {
  const double asym = m.max_asymmetry();
  if (asym > kHermitianTolerance) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: max |m(i,j) - conj(m(j,i))| = " << asym;
    throw ValidationError(msg.str());
  }
  const std::size_t n = m.dim();
  CMatrix a = m;
  CMatrix v = CMatrix::identity(n);

  for (int sweep = 0; sweep < kJacobiMaxSweeps && off_diagonal_norm(a) >= kJacobiOffDiagonal; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) {
          continue;
        }
        // Phase rotation makes a(p,q) real, then a real Givens rotation zeros it.
        const Complex phase = std::conj(apq) / mag;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2 * mag, aqq - app);
        const double c = std::cos(theta), s = std::sin(theta);
        const Complex jpp = c, jpq = s, jqp = -s * phase, jqq = c * phase;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = a(q, p) = 0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });
  EigenSystem out;
  for (std::size_t k : order) {
    out.values.push_back(a(k, k).real());
    CVector col(n);
    for (std::size_t r = 0; r < n; ++r) {
      col[r] = v(r, k);
    }
    out.vectors.push_back(std::move(col));
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& m) { return hermitian_eigensystem(m).values; }

double hreg(double x) {
  if (x == 0) {
    return 0;
  }
  return -x * std::log2(std::abs(x));
}

ProbVector::ProbVector(std::vector<double> values) : values_(std::move(values)) {
  double sum = 0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!(values_[k] >= kFloor)) {
      std::ostringstream msg;
      msg << "probability entry " << k << " = " << values_[k] << " is below the floor " << kFloor;
      throw DataError(msg.str());
    }
    sum += values_[k];
  }
  if (std::abs(sum - 1) > kSumTolerance) {
    std::ostringstream msg;
    msg << "probabilities sum to " << sum << ", not 1";
    throw DataError(msg.str());
  }
}

double shannon_entropy(std::span<const double> p) {
  double h = 0;
  for (double x : p) {
    h += hreg(x);
  }
  return h;
}

double shannon_entropy(const ProbVector& p) { return shannon_entropy(p.values()); }

double binary_entropy(double x) {
  if (!(x >= -0.05 && x <= 1.05)) {
    std::ostringstream msg;
    msg << "binary_entropy argument " << x << " outside [-0.05, 1.05]";
    throw DomainError(msg.str());
  }
  return hreg(x) + hreg(1 - x);
}

double von_neumann_entropy(const CMatrix& rho) {
  const Complex tr = rho.trace();
  if (std::abs(tr - Complex{1}) > 1e-6) {
    std::ostringstream msg;
    msg << "state trace " << tr.real() << "+" << tr.imag() << "i deviates from 1";
    throw ValidationError(msg.str());
  }
  return shannon_entropy(std::span<const double>(hermitian_eigenvalues(rho)));
}

}  // namespace capwit
