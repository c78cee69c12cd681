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

#include "nmwit/numcore.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nmw {

namespace {

double abs_value(double v) { return std::abs(v); }
double abs_value(const cplx& v) { return std::abs(v); }
double conj_value(double v) { return v; }
cplx conj_value(const cplx& v) { return std::conj(v); }

void require_square(std::size_t rows, std::size_t cols, const char* op) {
  if (rows != cols) {
    std::ostringstream msg;
    msg << op << ": expected a square matrix, got " << rows << "x" << cols;
    throw DimensionError(msg.str());
  }
}

}  // namespace

template <class T>
Matrix<T>::Matrix(std::size_t rows, std::size_t cols, std::initializer_list<T> values)
    : rows_(rows), cols_(cols), data_(values) {
  if (data_.size() != rows * cols) {
    throw DimensionError("Matrix: initializer size does not match dimensions");
  }
}

template <class T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = T{1};
  return out;
}

template <class T>
Matrix<T>& Matrix<T>::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("Matrix +: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

template <class T>
Matrix<T>& Matrix<T>::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("Matrix -: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

template <class T>
Matrix<T>& Matrix<T>::operator*=(T scale) {
  for (auto& v : data_) v *= scale;
  return *this;
}

template <class T>
Matrix<T> Matrix<T>::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

template <class T>
Matrix<T> Matrix<T>::adjoint() const {
  Matrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = conj_value((*this)(r, c));
  return out;
}

template <class T>
T Matrix<T>::trace() const {
  require_square(rows_, cols_, "trace");
  T sum{};
  for (std::size_t i = 0; i < rows_; ++i) sum += (*this)(i, i);
  return sum;
}

template <class T>
double Matrix<T>::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& v : data_) sum += abs_value(v) * abs_value(v);
  return std::sqrt(sum);
}

template <class T>
double Matrix<T>::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, abs_value(v));
  return m;
}

template <class T>
Matrix<T> Matrix<T>::multiply(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("Matrix *: inner dimensions differ");
  Matrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const T aik = a(i, k);
      if (aik == T{}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

template class Matrix<double>;
template class Matrix<cplx>;

CMat to_complex(const RMat& a) {
  CMat out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
  return out;
}

HermMat::HermMat(const CMat& a, double tol) {
  require_square(a.rows(), a.cols(), "HermMat");
  double defect = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      defect = std::max(defect, std::abs(a(r, c) - std::conj(a(c, r))));
  if (defect > tol) {
    std::ostringstream msg;
    msg << "HermMat: matrix is not Hermitian (max |A - A^dagger| = " << defect << ")";
    throw ValidationError(msg.str());
  }
  m_ = a;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    m_(r, r) = a(r, r).real();
    for (std::size_t c = r + 1; c < a.cols(); ++c) {
      const cplx avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
      m_(r, c) = avg;
      m_(c, r) = std::conj(avg);
    }
  }
}

double BlochVec::norm() const { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3); }

const CMat& pauli(int i) {
  static const std::array<CMat, 4> table = {
      CMat(2, 2, {1.0, 0.0, 0.0, 1.0}),
      CMat(2, 2, {0.0, 1.0, 1.0, 0.0}),
      CMat(2, 2, {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}),
      CMat(2, 2, {1.0, 0.0, 0.0, -1.0}),
  };
  if (i < 0 || i > 3) throw DimensionError("pauli: index out of range");
  return table[static_cast<std::size_t>(i)];
}

const CMat& swap_operator() {
  static const CMat s = [] {
    CMat out(4, 4);
    for (int i = 0; i < 4; ++i) out += kron(pauli(i), pauli(i));
    return out * cplx(0.5);
  }();
  return s;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

CMat partial_transpose(const CMat& a, Subsystem subsystem) {
  if (a.rows() != 4 || a.cols() != 4) throw DimensionError("partial_transpose: expected a 4x4 matrix");
  CMat out(4, 4);
  // index = 2 * first + second
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t l = 0; l < 2; ++l) {
          const cplx v = a(2 * i + k, 2 * j + l);
          if (subsystem == Subsystem::first)
            out(2 * j + k, 2 * i + l) = v;
          else
            out(2 * i + l, 2 * j + k) = v;
        }
  return out;
}

CMat outer(std::span<const cplx> ket, std::span<const cplx> bra) {
  CMat out(ket.size(), bra.size());
  for (std::size_t i = 0; i < ket.size(); ++i)
    for (std::size_t j = 0; j < bra.size(); ++j) out(i, j) = ket[i] * std::conj(bra[j]);
  return out;
}

EigenDecomposition herm_eig(const HermMat& herm) {
  CMat a = herm.mat();
  const std::size_t n = a.rows();
  CMat u = CMat::identity(n);

  const double scale = std::max(1.0, a.frobenius_norm());
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * std::norm(a(p, q));
    return std::sqrt(s);
  };

  // Sweeps continue past the kJacobiTol gate while rotations are still
  // significant; convergence is quadratic so this costs at most one sweep.
  for (int sweep = 0; sweep < 60; ++sweep) {
    const bool converged = off_norm() <= kJacobiTol * scale;
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-18 * scale) continue;
        rotated = true;
        const cplx phase = apq / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // V = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
        const cplx vpp = c;
        const cplx vpq = s;
        const cplx vqp = -s * std::conj(phase);
        const cplx vqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * vpp + akq * vqp;
          a(k, q) = akp * vpq + akq * vqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
          a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx ukp = u(k, p);
          const cplx ukq = u(k, q);
          u(k, p) = ukp * vpp + ukq * vqp;
          u(k, q) = ukp * vpq + ukq * vqq;
        }
      }
    }
    if (!rotated || converged) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = CMat(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = u(r, order[k]);
  }
  return out;
}

EigenDecomposition herm_eig(const CMat& a, double tol) { return herm_eig(HermMat(a, tol)); }

std::vector<double> herm_eigvals(const CMat& a, double tol) { return herm_eig(a, tol).values; }

double min_eigenvalue(const CMat& a, double tol) { return herm_eigvals(a, tol).front(); }

double trace_norm(const CMat& a) {
  require_square(a.rows(), a.cols(), "trace_norm");
  double defect = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = r; c < a.cols(); ++c)
      defect = std::max(defect, std::abs(a(r, c) - std::conj(a(c, r))));
  double sum = 0.0;
  if (defect <= kHermTol * std::max(1.0, a.max_abs())) {
    for (double v : herm_eig(HermMat(a, std::numeric_limits<double>::infinity())).values) sum += std::abs(v);
    return sum;
  }
  for (double v : herm_eig(HermMat(a.adjoint() * a, 1e-8)).values) sum += std::sqrt(std::max(v, 0.0));
  return sum;
}

Svd svd(const RMat& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n) throw DimensionError("svd: expected rows >= cols");
  RMat w = a;
  RMat v = RMat::identity(n);
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          alpha += w(k, p) * w(k, p);
          beta += w(k, q) * w(k, q);
          gamma += w(k, p) * w(k, q);
        }
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const double wp = w(k, p);
          const double wq = w(k, q);
          w(k, p) = c * wp - s * wq;
          w(k, q) = s * wp + c * wq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vp = v(k, p);
          const double vq = v(k, q);
          v(k, p) = c * vp - s * vq;
          v(k, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += w(k, j) * w(k, j);
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  Svd out{RMat(m, n), std::vector<double>(n), RMat(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.sigma[k] = sigma[j];
    for (std::size_t r = 0; r < m; ++r) out.u(r, k) = sigma[j] > 0.0 ? w(r, j) / sigma[j] : 0.0;
    for (std::size_t r = 0; r < n; ++r) out.v(r, k) = v(r, j);
  }
  return out;
}

double condition_number(const RMat& a) {
  const auto s = svd(a).sigma;
  if (s.back() == 0.0) return std::numeric_limits<double>::infinity();
  return s.front() / s.back();
}

RMat inverse(const RMat& a) {
  require_square(a.rows(), a.cols(), "inverse");
  const std::size_t n = a.rows();
  RMat work = a;
  RMat inv = RMat::identity(n);
  const double scale = std::max(a.max_abs(), 1e-300);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
    if (std::abs(work(pivot, col)) <= 1e-15 * scale) throw DomainError("inverse: matrix is singular");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(work(col, c), work(pivot, c));
        std::swap(inv(col, c), inv(pivot, c));
      }
    }
    const double d = work(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      work(col, c) /= d;
      inv(col, c) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = work(r, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        work(r, c) -= f * work(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

RMat pseudo_inverse(const RMat& a, double rcond) {
  const Svd d = svd(a);
  const std::size_t n = a.cols();
  RMat out(n, a.rows());
  const double cutoff = rcond * d.sigma.front();
  for (std::size_t k = 0; k < n; ++k) {
    if (d.sigma[k] <= cutoff || d.sigma[k] == 0.0) continue;
    const double inv_s = 1.0 / d.sigma[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < a.rows(); ++j) out(i, j) += d.v(i, k) * inv_s * d.u(j, k);
  }
  return out;
}

template <class T>
Matrix<T> expm(const Matrix<T>& a) {
  require_square(a.rows(), a.cols(), "expm");
  const std::size_t n = a.rows();
  double norm = 0.0;  // infinity norm
  for (std::size_t r = 0; r < n; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < n; ++c) row += abs_value(a(r, c));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix<T> scaled = a * T(std::ldexp(1.0, -squarings));

  Matrix<T> result = Matrix<T>::identity(n);
  Matrix<T> term = Matrix<T>::identity(n);
  for (int k = 1; k <= 18; ++k) {
    term = term * scaled;
    term *= T(1.0 / k);
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

template RMat expm(const RMat&);
template CMat expm(const CMat&);

HermMat matrix_log_psd(const HermMat& a, double zero_floor, double tol) {
  const auto eig = herm_eig(a);
  if (eig.values.front() < -tol) {
    std::ostringstream msg;
    msg << "matrix_log_psd: negative eigenvalue " << eig.values.front();
    throw DomainError(msg.str());
  }
  const std::size_t n = a.dim();
  CMat out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = eig.values[k];
    if (lam <= zero_floor) continue;
    const double lg = std::log2(lam);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        out(r, c) += lg * eig.vectors(r, k) * std::conj(eig.vectors(c, k));
  }
  return HermMat(out, 1e-8);
}

HermMat density_from_bloch(const BlochVec& x) {
  CMat rho = pauli(0);
  rho += pauli(1) * cplx(x.x1);
  rho += pauli(2) * cplx(x.x2);
  rho += pauli(3) * cplx(x.x3);
  return HermMat(rho * cplx(0.5));
}

BlochVec bloch_from_density(const CMat& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw DimensionError("bloch_from_density: expected 2x2");
  const auto c = pauli_coefficients(rho);
  const double tr = 2.0 * c[0].real();
  const double norm = tr != 0.0 ? tr : 1.0;
  return {2.0 * c[1].real() / norm, 2.0 * c[2].real() / norm, 2.0 * c[3].real() / norm};
}

std::array<cplx, 4> pauli_coefficients(const CMat& a) {
  if (a.rows() != 2 || a.cols() != 2) throw DimensionError("pauli_coefficients: expected 2x2");
  return {0.5 * (a(0, 0) + a(1, 1)), 0.5 * (a(0, 1) + a(1, 0)),
          0.5 * cplx(0.0, 1.0) * (a(0, 1) - a(1, 0)), 0.5 * (a(0, 0) - a(1, 1))};
}

}  // namespace nmw
