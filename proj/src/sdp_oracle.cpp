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
#include <map>
#include <optional>

#include "nmwit/errors.hpp"
#include "nmwit/sdp.hpp"

namespace nmw {

namespace {

// Orthonormal basis of n x n Hermitian matrices under Tr(AB).
std::vector<CMat> hermitian_basis(std::size_t n) {
  std::vector<CMat> basis;
  const double h = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i) {
    CMat e(n, n);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      CMat re(n, n), im(n, n);
      re(i, j) = re(j, i) = h;
      im(i, j) = cplx(0.0, -h);
      im(j, i) = cplx(0.0, h);
      basis.push_back(re);
      basis.push_back(im);
    }
  return basis;
}

double trace_product(const CMat& a, const CMat& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) s += (a(i, k) * b(k, i)).real();
  return s;
}

// Lower-triangular factor of a Hermitian positive definite matrix, or nothing.
std::optional<CMat> cholesky(const CMat& a) {
  const std::size_t n = a.rows();
  CMat l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
    const double root = std::sqrt(d);
    l(j, j) = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / root;
    }
  }
  return l;
}

double log_det(const CMat& l) {
  double s = 0.0;
  for (std::size_t i = 0; i < l.rows(); ++i) s += 2.0 * std::log(l(i, i).real());
  return s;
}

CMat inverse_from_cholesky(const CMat& l) {
  const std::size_t n = l.rows();
  CMat inv(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<cplx> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = i == c ? cplx(1.0) : cplx(0.0);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      cplx s = y[i];
      for (std::size_t k = i + 1; k < n; ++k) s -= std::conj(l(k, i)) * y[k];
      y[i] = s / l(i, i);
    }
    for (std::size_t i = 0; i < n; ++i) inv(i, c) = y[i];
  }
  return inv;
}

// Gaussian elimination with partial pivoting; h is overwritten.
std::vector<double> solve_dense(std::vector<double> h, std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(h[r * n + col]) > std::abs(h[piv * n + col])) piv = r;
    if (h[piv * n + col] == 0.0) throw SolverError("oracle: singular Newton system");
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(h[col * n + k], h[piv * n + k]);
      std::swap(rhs[col], rhs[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = h[r * n + col] / h[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) h[r * n + k] -= f * h[col * n + k];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = rhs[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= h[r * n + k] * x[k];
    x[r] = s / h[r * n + r];
  }
  return x;
}

// Dual: minimize sum_k Tr(D_k Z_k) over Z_k >= 0 with W_b = -C_b - sum_k c_kb Z_k >= 0.
// Each Z_k also carries Tr Z_k <= bound. The dual optimal set is unbounded
// whenever the primal has no interior point, and the bound keeps the barrier
// subproblems solvable. Its multiplier is the primal slack needed in
// constraint k, so a multiplier that stays away from zero flags infeasibility.
class Barrier {
 public:
  explicit Barrier(const SdpProblem& p) : p_(p) {
    p.validate();
    for (const auto& c : p.constraints) {
      const std::size_t n = c.offset.rows();
      offsets_.push_back(nvar_);
      nvar_ += n * n;
      bases_.push_back(hermitian_basis(n));
    }
    users_.resize(p.blocks.size());
    for (std::size_t k = 0; k < p.constraints.size(); ++k) {
      std::map<std::size_t, double> merged;
      for (const auto& t : p.constraints[k].terms) merged[t.block] += t.coeff;
      for (const auto& [b, c] : merged)
        if (c != 0.0) users_[b].push_back({k, c});
    }
    double scale = 1.0;
    for (const auto& c : p.constraints) {
      barrier_dim_ += static_cast<double>(c.offset.rows()) + 1.0;
      scale = std::max(scale, c.offset.max_abs());
    }
    for (const auto& c : p.objective) scale = std::max(scale, c.max_abs());
    bound_ = 1e6 * scale;
    for (std::size_t k = 0; k < p.constraints.size(); ++k)
      for (const auto& e : bases_[k]) linear_grad_.push_back(trace_product(p.constraints[k].offset, e));
    for (std::size_t b = 0; b < p.blocks.size(); ++b)
      if (!users_[b].empty()) barrier_dim_ += static_cast<double>(p.blocks[b].dim);
  }

  SdpSolution run(double tol) {
    if (!(tol > 0.0)) throw DomainError("oracle: tol must be positive");
    SdpSolution sol;
    // blocks no constraint touches: bounded only if their objective is negative semidefinite
    for (std::size_t b = 0; b < p_.blocks.size(); ++b)
      if (users_[b].empty() && !cholesky(-1.0 * p_.objective[b] + CMat::identity(p_.blocks[b].dim) * cplx(1e-12))) {
        sol.status = SdpStatus::unbounded;
        return sol;
      }

    std::optional<std::vector<double>> start;
    for (double beta : {1.0, 10.0, 100.0, 1e3, 1e4, 1e5}) {
      std::vector<double> z(nvar_, 0.0);
      for (std::size_t k = 0; k < offsets_.size(); ++k)
        for (std::size_t i = 0; i < p_.constraints[k].offset.rows(); ++i) z[offsets_[k] + i] = beta;
      if (evaluate(z, 1.0)) {
        start = z;
        break;
      }
    }
    if (!start) {
      sol.status = SdpStatus::unbounded;
      return sol;
    }

    std::vector<double> z = *start;
    double t = 1.0;
    int newton_steps = 0;
    constexpr int kMaxNewton = 20000;
    bool stalled = false;
    std::optional<SdpSolution> best;
    while (!stalled) {
      for (int inner = 0; inner < 500; ++inner) {
        const auto point = evaluate(z, t, true);
        std::vector<double> neg_g(nvar_);
        for (std::size_t i = 0; i < nvar_; ++i) neg_g[i] = -point->gradient[i];
        std::vector<double> step;
        try {
          step = solve_dense(point->hessian, neg_g);
        } catch (const SolverError&) {
          stalled = true;
          break;
        }
        double decrement = 0.0;
        for (std::size_t i = 0; i < nvar_; ++i) decrement += step[i] * neg_g[i];
        ++newton_steps;
        if (decrement / 2.0 <= 1e-12) break;
        // t * <D, Z> is large late in the path; its change is linear in the
        // step, so only the barrier part is differenced.
        double linear_rate = 0.0;
        for (std::size_t i = 0; i < nvar_; ++i) linear_rate += step[i] * linear_grad_[i];
        double s = 1.0;
        std::vector<double> trial(nvar_);
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls, s *= 0.5) {
          for (std::size_t i = 0; i < nvar_; ++i) trial[i] = z[i] + s * step[i];
          const auto next = evaluate(trial, t);
          if (next && t * s * linear_rate + (next->barrier - point->barrier) <= -0.25 * s * decrement) {
            moved = true;
            break;
          }
        }
        if (!moved) break;
        z = trial;
        if (newton_steps >= kMaxNewton) break;
      }
      // the primal estimate can degrade once the Newton systems become
      // ill-conditioned, so the best feasible one along the path is kept
      SdpSolution candidate;
      recover(z, t, candidate);
      const auto score = [](const SdpSolution& c) { return std::abs(c.gap) + c.primal_residual; };
      if (!best || score(candidate) < score(*best)) best = candidate;
      if (stalled || barrier_dim_ / t < tol || newton_steps >= kMaxNewton) break;
      if (max_slack(z, t) > 1e-3) break;
      t *= 8.0;
    }

    sol.iterations = newton_steps;
    sol.status = barrier_dim_ / t < tol ? SdpStatus::optimal : SdpStatus::max_iter;
    recover(z, t, sol);
    if (best && std::abs(best->gap) + best->primal_residual < std::abs(sol.gap) + sol.primal_residual) {
      sol.blocks = best->blocks;
      sol.objective = best->objective;
      sol.primal_residual = best->primal_residual;
      sol.gap = sol.dual_objective - sol.objective;
    }
    const double slack = max_slack(z, t);
    sol.primal_residual = std::max(sol.primal_residual, slack);
    if (slack > std::sqrt(tol))
      sol.status = SdpStatus::infeasible;
    else if (sol.status == SdpStatus::optimal && (std::abs(sol.gap) > tol || sol.primal_residual > tol))
      sol.status = SdpStatus::max_iter;
    return sol;
  }

 private:
  struct Point {
    double barrier = 0.0;
    std::vector<double> gradient;
    std::vector<double> hessian;
  };

  double max_slack(const std::vector<double>& z, double t) const {
    double slack = 0.0;
    for (std::size_t k = 0; k < p_.constraints.size(); ++k)
      slack = std::max(slack, 1.0 / (t * (bound_ - z_matrix(z, k).trace().real())));
    return slack;
  }

  CMat z_matrix(const std::vector<double>& z, std::size_t k) const {
    const auto& basis = bases_[k];
    const std::size_t n = p_.constraints[k].offset.rows();
    CMat m(n, n);
    for (std::size_t i = 0; i < basis.size(); ++i) m += basis[i] * cplx(z[offsets_[k] + i]);
    return m;
  }

  CMat w_matrix(const std::vector<std::pair<std::size_t, double>>& users, const std::vector<CMat>& zs,
                std::size_t b) const {
    CMat w = -1.0 * p_.objective[b];
    for (const auto& [k, c] : users) w -= zs[k] * cplx(c);
    return w;
  }

  // Z_k assembled from any coordinate vector, e.g. a Newton step.
  double dual_value(const std::vector<double>& z) const {
    double s = 0.0;
    for (std::size_t k = 0; k < p_.constraints.size(); ++k) s += trace_product(p_.constraints[k].offset, z_matrix(z, k));
    return s;
  }

  std::optional<Point> evaluate(const std::vector<double>& z, double t, bool derivatives = false) const {
    std::vector<CMat> zs, z_inv;
    std::vector<double> rooms;
    Point pt;
    for (std::size_t k = 0; k < p_.constraints.size(); ++k) {
      zs.push_back(z_matrix(z, k));
      const auto l = cholesky(zs.back());
      if (!l) return std::nullopt;
      const double room = bound_ - zs.back().trace().real();
      if (!(room > 0.0)) return std::nullopt;
      pt.barrier -= log_det(*l) + std::log(room);
      if (derivatives) {
        z_inv.push_back(inverse_from_cholesky(*l));
        rooms.push_back(room);
      }
    }
    std::vector<CMat> w_inv(p_.blocks.size());
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      if (users_[b].empty()) continue;
      const auto l = cholesky(w_matrix(users_[b], zs, b));
      if (!l) return std::nullopt;
      pt.barrier -= log_det(*l);
      if (derivatives) w_inv[b] = inverse_from_cholesky(*l);
    }
    if (!derivatives) return pt;

    pt.gradient.assign(nvar_, 0.0);
    pt.hessian.assign(nvar_ * nvar_, 0.0);
    for (std::size_t k = 0; k < p_.constraints.size(); ++k) {
      const auto& basis = bases_[k];
      std::vector<CMat> prod;
      for (const auto& e : basis) prod.push_back(z_inv[k] * e);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        const double tr_i = basis[i].trace().real();
        pt.gradient[offsets_[k] + i] +=
            t * linear_grad_[offsets_[k] + i] - prod[i].trace().real() + tr_i / rooms[k];
        for (std::size_t j = 0; j < basis.size(); ++j)
          pt.hessian[(offsets_[k] + i) * nvar_ + offsets_[k] + j] +=
              trace_product(prod[i], prod[j]) + tr_i * basis[j].trace().real() / (rooms[k] * rooms[k]);
      }
    }
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      if (users_[b].empty()) continue;
      const auto basis = hermitian_basis(p_.blocks[b].dim);
      std::vector<CMat> prod;
      for (const auto& e : basis) prod.push_back(w_inv[b] * e);
      for (const auto& [k, ck] : users_[b]) {
        for (std::size_t i = 0; i < basis.size(); ++i) pt.gradient[offsets_[k] + i] += ck * prod[i].trace().real();
        for (const auto& [l, cl] : users_[b])
          for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < basis.size(); ++j)
              pt.hessian[(offsets_[k] + i) * nvar_ + offsets_[l] + j] += ck * cl * trace_product(prod[i], prod[j]);
      }
    }
    return pt;
  }

  void recover(const std::vector<double>& z, double t, SdpSolution& sol) const {
    std::vector<CMat> zs;
    for (std::size_t k = 0; k < p_.constraints.size(); ++k) zs.push_back(z_matrix(z, k));
    // Primal estimate from the linearized centrality condition at the last
    // iterate: Y_b = (W^-1 - W^-1 dW W^-1) / t with dW from one more Newton
    // step. Plain W^-1 / t carries the full centering error.
    std::vector<CMat> dzs(zs.size());
    if (const auto point = evaluate(z, t, true); point && nvar_ > 0) {
      std::vector<double> neg_g(nvar_);
      for (std::size_t i = 0; i < nvar_; ++i) neg_g[i] = -point->gradient[i];
      try {
        const auto step = solve_dense(point->hessian, neg_g);
        for (std::size_t k = 0; k < zs.size(); ++k) dzs[k] = z_matrix(step, k);
      } catch (const SolverError&) {
        dzs.assign(zs.size(), CMat());
      }
    }
    std::vector<HermMat> plain, corrected;
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      const std::size_t n = p_.blocks[b].dim;
      CMat y(n, n);
      CMat y_corr(n, n);
      if (!users_[b].empty()) {
        const auto l = cholesky(w_matrix(users_[b], zs, b));
        if (l) {
          const CMat w_inv = inverse_from_cholesky(*l);
          y = w_inv * cplx(1.0 / t);
          y_corr = y;
          CMat dw(n, n);
          bool have_step = true;
          for (const auto& [k, c] : users_[b]) {
            if (dzs[k].rows() != n) have_step = false;
            else dw -= dzs[k] * cplx(c);
          }
          if (have_step) {
            const CMat c = (w_inv - w_inv * dw * w_inv) * cplx(1.0 / t);
            y_corr = (c + c.adjoint()) * cplx(0.5);
          }
        }
      }
      plain.emplace_back((y + y.adjoint()) * cplx(0.5));
      corrected.emplace_back(y_corr);
    }
    // keep whichever estimate is more feasible; late in the path the Newton
    // system can be too ill-conditioned for the correction to help
    const double viol_plain = std::max(0.0, -min_constraint_eigenvalue(p_, plain));
    const double viol_corr = std::max(0.0, -min_constraint_eigenvalue(p_, corrected));
    sol.blocks = viol_corr <= std::max(viol_plain, 1e-12) ? corrected : plain;
    sol.objective = 0.0;
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      sol.objective += trace_product(p_.objective[b], sol.blocks[b].mat());
    }
    sol.dual_objective = dual_value(z);
    sol.gap = sol.dual_objective - sol.objective;
    sol.primal_residual = p_.constraints.empty() ? 0.0 : std::max(0.0, -min_constraint_eigenvalue(p_, sol.blocks));
    sol.dual_residual = 0.0;
  }

  const SdpProblem& p_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<CMat>> bases_;
  std::vector<std::vector<std::pair<std::size_t, double>>> users_;
  std::vector<double> linear_grad_;
  std::size_t nvar_ = 0;
  double barrier_dim_ = 0.0;
  double bound_ = 1.0;
};

}  // namespace

SdpSolution solve_oracle(const SdpProblem& p, double tol) { return Barrier(p).run(tol); }

}  // namespace nmw
