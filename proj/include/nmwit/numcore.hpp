// Copyright 2026 The nmwit Authors
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

#pragma once

// Dense linear algebra for the small operators that appear in qubit channel
// work: 2x2 states, 4x4 Choi and pseudo-density matrices, 4x4 real affine
// maps. Sizes never exceed a few dozen, so everything is dense and row-major.

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "nmwit/errors.hpp"

namespace nmw {

using cplx = std::complex<double>;

inline constexpr double kHermTol = 1e-10;
inline constexpr double kJacobiTol = 1e-12;
inline constexpr double kLogFloor = 1e-15;

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::initializer_list<T> values);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const T> data() const { return data_; }
  std::span<T> data() { return data_; }

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(T scale);

  Matrix transpose() const;
  Matrix adjoint() const;
  T trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, T s) { return a *= s; }
  friend Matrix operator*(T s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  static Matrix multiply(const Matrix& a, const Matrix& b);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using CMat = Matrix<cplx>;
using RMat = Matrix<double>;
using Vec3 = std::array<double, 3>;

CMat to_complex(const RMat& a);

/// A complex matrix known to be Hermitian. Construction checks
/// max |A - A^dagger| <= tol and stores the symmetrized (A + A^dagger)/2.
class HermMat {
 public:
  HermMat() = default;
  explicit HermMat(const CMat& a, double tol = kHermTol);

  const CMat& mat() const { return m_; }
  std::size_t dim() const { return m_.rows(); }
  double trace() const { return m_.trace().real(); }

 private:
  CMat m_;
};

struct BlochVec {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  double norm() const;
  bool physical(double tol = 1e-9) const { return norm() <= 1.0 + tol; }
  Vec3 as_array() const { return {x1, x2, x3}; }
  static BlochVec from_array(const Vec3& v) { return {v[0], v[1], v[2]}; }
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  CMat vectors;                // columns are eigenvectors
};

struct Svd {
  RMat u;                      // m x n, orthonormal columns
  std::vector<double> sigma;   // descending
  RMat v;                      // n x n orthogonal
};

enum class Subsystem { first, second };

// Pauli operators, index 0 is the identity.
const CMat& pauli(int i);
// SWAP = (1/2) sum_i sigma_i (x) sigma_i on two qubits.
const CMat& swap_operator();

CMat kron(const CMat& a, const CMat& b);
CMat partial_transpose(const CMat& a, Subsystem subsystem);
CMat outer(std::span<const cplx> ket, std::span<const cplx> bra);

/// Cyclic Jacobi diagonalization. Reconstruction U diag(l) U^dagger = A.
EigenDecomposition herm_eig(const HermMat& a);
EigenDecomposition herm_eig(const CMat& a, double tol = kHermTol);
std::vector<double> herm_eigvals(const CMat& a, double tol = kHermTol);
double min_eigenvalue(const CMat& a, double tol = kHermTol);

/// Sum of singular values. Hermitian input takes the eigenvalue path.
double trace_norm(const CMat& a);

/// One-sided Jacobi SVD of a real matrix with rows >= cols.
Svd svd(const RMat& a);
double condition_number(const RMat& a);
RMat inverse(const RMat& a);
RMat pseudo_inverse(const RMat& a, double rcond = 1e-12);

template <class T>
Matrix<T> expm(const Matrix<T>& a);

/// Base-2 logarithm on the support. Eigenvalues below zero_floor map to 0
/// (callers apply the 0 log 0 = 0 convention). Throws DomainError when an
/// eigenvalue is below -tol.
HermMat matrix_log_psd(const HermMat& a, double zero_floor = kLogFloor, double tol = 1e-9);

HermMat density_from_bloch(const BlochVec& x);
BlochVec bloch_from_density(const CMat& rho);

/// Returns the operator coefficients c_i = Tr(sigma_i A) / 2 so that
/// A = sum_i c_i sigma_i for any 2x2 A.
std::array<cplx, 4> pauli_coefficients(const CMat& a);

}  // namespace nmw
