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

// Small dense complex matrices (dimension 2..16) and entropy functions.
// Everything here is value-typed and pure.

#ifndef CAPWIT_QMATH_H
#define CAPWIT_QMATH_H

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace capwit {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

class CMatrix {
 public:
  CMatrix() = default;
  /// Zero matrix of the given dimension.
  explicit CMatrix(std::size_t dim);
  /// Row-major entries; entries.size() must equal dim * dim.
  CMatrix(std::size_t dim, std::vector<Complex> entries);

  static CMatrix identity(std::size_t dim);
  /// |v><v|.
  static CMatrix projector(std::span<const Complex> v);
  /// One of 'I', 'X', 'Y', 'Z'.
  static CMatrix pauli(char label);

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }
  std::span<const Complex> entries() const { return entries_; }

  Complex trace() const;
  CMatrix adjoint() const;
  CMatrix transpose() const;
  /// max |m(i,j) - conj(m(j,i))|.
  double max_asymmetry() const;
  bool is_hermitian(double tol = 1e-12) const { return max_asymmetry() <= tol; }
  double frobenius_norm() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CVector operator*(const CMatrix& a, std::span<const Complex> v);

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
};

/// <a|b>, conjugate-linear in the first argument.
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
/// Re <v|m|v>.
double expectation(const CMatrix& m, std::span<const Complex> v);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(std::span<const Complex> a, std::span<const Complex> b);

/// Traces out every subsystem whose `keep` flag is false. `dims` lists the
/// subsystem dimensions in tensor order; their product must equal m.dim().
CMatrix partial_trace(const CMatrix& m, std::span<const std::size_t> dims, std::span<const bool> keep);

struct EigenSystem {
  /// Descending.
  std::vector<double> values;
  /// vectors[k] is the normalized eigenvector for values[k].
  std::vector<CVector> vectors;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Throws ValidationError
/// when the input deviates from Hermitian by more than 1e-10.
EigenSystem hermitian_eigensystem(const CMatrix& m);
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

/// Real part of -x log2(x), continued to small negative x as -x log2|x|.
double hreg(double x);

/// Probability vector as estimated from data. Entries may dip slightly below
/// zero; anything below kFloor is rejected as a data-integrity error.
class ProbVector {
 public:
  static constexpr double kFloor = -0.05;
  static constexpr double kSumTolerance = 1e-9;

  explicit ProbVector(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// Entropies are in bits.
double shannon_entropy(const ProbVector& p);
/// Unvalidated variant for inner loops.
double shannon_entropy(std::span<const double> p);
/// Defined on [-0.05, 1.05]; throws DomainError outside.
double binary_entropy(double x);
/// Requires a Hermitian operator with unit trace (1e-6).
double von_neumann_entropy(const CMatrix& rho);

}  // namespace capwit

#endif  // CAPWIT_QMATH_H
