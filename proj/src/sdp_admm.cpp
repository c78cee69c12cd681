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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nmwit/errors.hpp"
#include "nmwit/sdp.hpp"

namespace nmw {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Real isometric vectorization of an n x n Hermitian matrix: diagonal first,
// then sqrt(2) Re and sqrt(2) Im of each upper off-diagonal entry.
void svec(const CMat& a, double* out) {
  const std::size_t n = a.rows();
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) out[k++] = a(i, i).real();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      out[k++] = kSqrt2 * a(i, j).real();
      out[k++] = kSqrt2 * a(i, j).imag();
    }
}

CMat unsvec(const double* v, std::size_t n) {
  CMat a(n, n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = v[k++];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx z(v[k] / kSqrt2, v[k + 1] / kSqrt2);
      k += 2;
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  return a;
}

struct Cone {
  std::size_t offset;
  std::size_t dim;
  CMat scale;  // block value in problem coordinates is scale * X * scale^dagger
};

// Hermitian matrix function through the eigendecomposition.
template <class F>
CMat spectral(const CMat& a, F f) {
  const EigenDecomposition e = herm_eig(a, 1e-9);
  const std::size_t n = a.rows();
  CMat out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(e.values[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += fk * e.vectors(i, k) * std::conj(e.vectors(j, k));
  }
  return out;
}

CMat congruence(const CMat& t, const CMat& x) { return t * x * t.adjoint(); }


// Dense Cholesky of a symmetric positive definite matrix, stored row-major.
class Cholesky {
 public:
  Cholesky(std::vector<double> m, std::size_t n) : n_(n), l_(std::move(m)) {
    for (std::size_t j = 0; j < n_; ++j) {
      double d = l_[j * n_ + j];
      for (std::size_t k = 0; k < j; ++k) d -= l_[j * n_ + k] * l_[j * n_ + k];
      if (!(d > 0.0)) throw SolverError("admm: constraint map is rank deficient");
      const double root = std::sqrt(d);
      l_[j * n_ + j] = root;
      for (std::size_t i = j + 1; i < n_; ++i) {
        double s = l_[i * n_ + j];
        for (std::size_t k = 0; k < j; ++k) s -= l_[i * n_ + k] * l_[j * n_ + k];
        l_[i * n_ + j] = s / root;
      }
    }
  }

  void solve_in_place(std::vector<double>& b) const {
    for (std::size_t i = 0; i < n_; ++i) {
      double s = b[i];
      for (std::size_t k = 0; k < i; ++k) s -= l_[i * n_ + k] * b[k];
      b[i] = s / l_[i * n_ + i];
    }
    for (std::size_t i = n_; i-- > 0;) {
      double s = b[i];
      for (std::size_t k = i + 1; k < n_; ++k) s -= l_[k * n_ + i] * b[k];
      b[i] = s / l_[i * n_ + i];
    }
  }

 private:
  std::size_t n_;
  std::vector<double> l_;
};

double norm2(const std::vector<double>& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

class Admm {
 public:
  Admm(const SdpProblem& p, const AdmmOptions& opts) : p_(p) {
    p.validate();
    reduce(opts);
    std::size_t off = 0;
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
      const std::size_t r = block_scale_[b].cols();
      cones_.push_back({off, r, block_scale_[b]});
      off += r * r;
    }
    n_blocks_vars_ = off;
    for (std::size_t k = 0; k < p.constraints.size(); ++k) {
      const std::size_t r = row_basis_[k].cols();
      cones_.push_back({off, r, slack_scale_[k]});
      off += r * r;
    }
    n_ = off;
    m_ = n_ - n_blocks_vars_;

    c_.assign(n_, 0.0);
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
      const CMat& t = cones_[b].scale;
      if (cones_[b].dim > 0) svec(t.adjoint() * p.objective[b] * t, &c_[cones_[b].offset]);
    }

    // rows: R_k^+ (T_k X_k T_k^+ - sum coeff T_b X_b T_b^+) R_k = R_k^+ D_k R_k
    a_.assign(m_ * n_, 0.0);
    d_.assign(m_, 0.0);
    for (std::size_t k = 0; k < p.constraints.size(); ++k) {
      const std::size_t ks = p.blocks.size() + k;
      const CMat& r = row_basis_[k];
      const std::size_t row0 = cones_[ks].offset - n_blocks_vars_;
      const std::size_t rows = r.cols() * r.cols();
      if (rows == 0) continue;
      svec(r.adjoint() * p.constraints[k].offset * r, &d_[row0]);
      add_columns(row0, rows, r.adjoint() * cones_[ks].scale, cones_[ks], 1.0);
      for (const auto& t : p.constraints[k].terms)
        add_columns(row0, rows, r.adjoint() * cones_[t.block].scale, cones_[t.block], -t.coeff);
    }
    if (m_ > 0) {
      std::vector<double> aat(m_ * m_, 0.0);
      for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k < n_; ++k) s += a_[i * n_ + k] * a_[j * n_ + k];
          aat[i * m_ + j] = aat[j * m_ + i] = s;
        }
      chol_.emplace_back(std::move(aat), m_);
    }
  }

  // Columns for X -> svec(L X L^+) scaled by coeff, L mapping cone coordinates
  // to the rows of one constraint.
  void add_columns(std::size_t row0, std::size_t rows, const CMat& l, const Cone& cone, double coeff) {
    const std::size_t len = cone.dim * cone.dim;
    std::vector<double> e(len, 0.0), col(rows);
    for (std::size_t j = 0; j < len; ++j) {
      e[j] = 1.0;
      svec(congruence(l, unsvec(e.data(), cone.dim)), col.data());
      e[j] = 0.0;
      for (std::size_t r = 0; r < rows; ++r) a_[(row0 + r) * n_ + cone.offset + j] += coeff * col[r];
    }
  }

  // A PSD offset D_k caps every block it bounds, so blocks and slacks live in
  // its range (exact facial reduction; eigenvalues at round-off level count as
  // zero). Inside that range the metric comes from D_k + floor: slack scale
  // T_k = R_k diag(sqrt(lambda + floor)), block scale
  // T_b = U_b H_b^(1/2) with H_b^-1 = sum_k |c_kb| U_b^+ (D_k + floor)^+ U_b
  // and U_b spanning the intersection of the bounding ranges.
  void reduce(const AdmmOptions& opts) {
    constexpr double kZeroEig = 1e-14;
    const std::size_t nk = p_.constraints.size();
    row_basis_.assign(nk, CMat());
    slack_scale_.assign(nk, CMat());
    std::vector<bool> capping(nk, false);
    std::vector<std::vector<double>> kept_eigs(nk);
    for (std::size_t k = 0; k < nk; ++k) {
      const CMat& d = p_.constraints[k].offset;
      const std::size_t n = d.rows();
      row_basis_[k] = slack_scale_[k] = CMat::identity(n);
      if (!opts.precondition) continue;
      const EigenDecomposition e = herm_eig(d, 1e-9);
      const double top = std::max(e.values.back(), 0.0);
      if (e.values.front() < -kZeroEig * std::max(top, 1.0)) continue;
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < n; ++i)
        if (e.values[i] > kZeroEig * top && top > 0.0) keep.push_back(i);
      CMat r(n, keep.size()), t(n, keep.size());
      for (std::size_t c = 0; c < keep.size(); ++c) {
        const double lam = e.values[keep[c]];
        const double w = std::sqrt((lam + opts.precondition_floor * top) / top);
        kept_eigs[k].push_back(lam + opts.precondition_floor * top);
        for (std::size_t i = 0; i < n; ++i) {
          r(i, c) = e.vectors(i, keep[c]);
          t(i, c) = w * e.vectors(i, keep[c]);
        }
      }
      row_basis_[k] = r;
      slack_scale_[k] = t;
      capping[k] = true;
    }

    block_scale_.clear();
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      const std::size_t n = p_.blocks[b].dim;
      std::vector<std::pair<std::size_t, double>> caps;
      for (std::size_t k = 0; k < nk; ++k) {
        if (!capping[k]) continue;
        double c = 0.0;
        for (const auto& t : p_.constraints[k].terms)
          if (t.block == b) c += t.coeff;
        if (c < 0.0) caps.push_back({k, -c});
      }
      if (caps.empty()) {
        block_scale_.push_back(CMat::identity(n));
        continue;
      }
      // intersection of ranges = null space of sum_k (I - R_k R_k^+)
      CMat outside(n, n);
      for (const auto& [k, c] : caps) outside += CMat::identity(n) - row_basis_[k] * row_basis_[k].adjoint();
      const EigenDecomposition e = herm_eig(outside, 1e-9);
      std::vector<std::size_t> inside;
      for (std::size_t i = 0; i < n; ++i)
        if (e.values[i] < 1e-9) inside.push_back(i);
      CMat u(n, inside.size());
      for (std::size_t c = 0; c < inside.size(); ++c)
        for (std::size_t i = 0; i < n; ++i) u(i, c) = e.vectors(i, inside[c]);
      if (inside.empty()) {
        block_scale_.push_back(u);
        continue;
      }
      CMat h_inv(inside.size(), inside.size());
      for (const auto& [k, c] : caps) {
        const CMat proj = u.adjoint() * row_basis_[k];
        CMat weighted = proj;
        for (std::size_t i = 0; i < proj.rows(); ++i)
          for (std::size_t j = 0; j < proj.cols(); ++j) weighted(i, j) *= c / kept_eigs[k][j];
        h_inv += weighted * proj.adjoint();
      }
      h_inv = (h_inv + h_inv.adjoint()) * cplx(0.5);
      const double low = herm_eigvals(h_inv, 1e-9).front();
      block_scale_.push_back(u * spectral(h_inv, [low](double x) { return std::sqrt(low / x); }));
    }
  }

  SdpSolution run(const AdmmOptions& opts) {
    if (!(opts.tol > 0.0)) throw DomainError("admm: tol must be positive");
    const double rho0 = opts.rho;
    double rho = rho0;
    const double alpha = opts.relaxation;
    std::vector<double> x(n_, 0.0), z(n_, 0.0), u(n_, 0.0), z_old(n_), v(n_), xh(n_);

    SdpSolution sol;
    sol.status = SdpStatus::max_iter;
    for (int it = 1; it <= opts.max_iter; ++it) {
      for (std::size_t i = 0; i < n_; ++i) v[i] = z[i] - u[i] + c_[i] / rho;
      project_affine(v, x);
      z_old = z;
      for (std::size_t i = 0; i < n_; ++i) {
        xh[i] = alpha * x[i] + (1.0 - alpha) * z_old[i];
        z[i] = xh[i] + u[i];
      }
      project_cones(z);
      for (std::size_t i = 0; i < n_; ++i) u[i] += xh[i] - z[i];

      if (it % opts.check_every != 0 && it != opts.max_iter) continue;
      const Certificate cert = certify(x, z, z_old, u, rho);
      sol.iterations = it;
      fill(sol, z, cert);
      if (cert.r_rel <= opts.tol && cert.s_rel <= opts.tol && cert.gap <= opts.tol &&
          cert.dual_psd_violation <= opts.tol) {
        sol.status = SdpStatus::optimal;
        break;
      }
      double next = rho;
      if (!opts.adaptive_rho)
        continue;
      if (cert.r_rel > 10.0 * cert.s_rel)
        next = rho * 2.0;
      else if (cert.s_rel > 10.0 * cert.r_rel)
        next = rho / 2.0;
      next = std::clamp(next, 1e-4 * rho0, 1e4 * rho0);
      if (next != rho) {
        for (double& ui : u) ui *= rho / next;
        rho = next;
      }
    }
    return sol;
  }

 private:
  struct Certificate {
    double primal_obj;
    double dual_obj;
    double gap;
    double r_rel;
    double s_rel;
    double dual_psd_violation;
  };

  void project_affine(const std::vector<double>& v, std::vector<double>& out) const {
    out = v;
    if (m_ == 0) return;
    std::vector<double> r(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      double s = -d_[i];
      for (std::size_t k = 0; k < n_; ++k) s += a_[i * n_ + k] * v[k];
      r[i] = s;
    }
    chol_.front().solve_in_place(r);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t k = 0; k < n_; ++k) out[k] -= a_[i * n_ + k] * r[i];
  }

  void project_cones(std::vector<double>& z) const {
    for (const Cone& c : cones_) {
      if (c.dim == 0) continue;
      const CMat a = unsvec(&z[c.offset], c.dim);
      const EigenDecomposition e = herm_eig(a);
      CMat clipped(c.dim, c.dim);
      for (std::size_t k = 0; k < c.dim; ++k) {
        const double lam = e.values[k];
        if (lam <= 0.0) continue;
        for (std::size_t i = 0; i < c.dim; ++i)
          for (std::size_t j = 0; j < c.dim; ++j)
            clipped(i, j) += lam * e.vectors(i, k) * std::conj(e.vectors(j, k));
      }
      svec(clipped, &z[c.offset]);
    }
  }

  double min_cone_eigenvalue(const std::vector<double>& w) const {
    double worst = 0.0;
    for (const Cone& c : cones_)
      if (c.dim > 0) worst = std::min(worst, min_eigenvalue(unsvec(&w[c.offset], c.dim)));
    return worst;
  }

  Certificate certify(const std::vector<double>& x, const std::vector<double>& z, const std::vector<double>& z_old,
                      const std::vector<double>& u, double rho) const {
    Certificate cert{};
    std::vector<double> diff(n_), dz(n_), w(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      diff[i] = x[i] - z[i];
      dz[i] = rho * (z[i] - z_old[i]);
      w[i] = -rho * u[i];
    }
    cert.r_rel = norm2(diff) / (1.0 + std::max(norm2(x), norm2(z)));
    cert.s_rel = norm2(dz) / (1.0 + norm2(w));
    cert.primal_obj = std::inner_product(c_.begin(), c_.end(), z.begin(), 0.0);

    // least-squares multipliers y for A^T y = c + w; dual slack A^T y - c must be PSD
    std::vector<double> y(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < n_; ++k) s += a_[i * n_ + k] * (c_[k] + w[k]);
      y[i] = s;
    }
    if (m_ > 0) chol_.front().solve_in_place(y);
    std::vector<double> slack(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      double s = -c_[k];
      for (std::size_t i = 0; i < m_; ++i) s += a_[i * n_ + k] * y[i];
      slack[k] = s;
    }
    cert.dual_psd_violation = -min_cone_eigenvalue(slack);
    cert.dual_obj = std::inner_product(d_.begin(), d_.end(), y.begin(), 0.0);
    cert.gap = std::abs(cert.dual_obj - cert.primal_obj);
    return cert;
  }

  void fill(SdpSolution& sol, const std::vector<double>& z, const Certificate& cert) const {
    sol.blocks.clear();
    for (std::size_t b = 0; b < p_.blocks.size(); ++b)
      sol.blocks.emplace_back(congruence(cones_[b].scale, unsvec(&z[cones_[b].offset], cones_[b].dim)), 1e-9);
    sol.objective = cert.primal_obj;
    sol.dual_objective = cert.dual_obj;
    sol.gap = cert.gap;
    sol.primal_residual = cert.r_rel;
    sol.dual_residual = std::max(cert.s_rel, cert.dual_psd_violation);
  }

  const SdpProblem& p_;
  std::vector<Cone> cones_;
  std::size_t n_blocks_vars_ = 0;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<double> c_, a_, d_;
  std::vector<Cholesky> chol_;
  std::vector<CMat> row_basis_, slack_scale_, block_scale_;
};

}  // namespace

SdpSolution solve_admm(const SdpProblem& p, const AdmmOptions& opts) { return Admm(p, opts).run(opts); }

}  // namespace nmw
