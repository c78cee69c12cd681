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

#include "nmwit/divisibility.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nmwit/families.hpp"

namespace nmw {

IntermediateMap intermediate_from(const AffineMap& at_s, const AffineMap& at_t, double s, double t) {
  if (s > t) throw DomainError("intermediate: need s <= t");
  IntermediateMap v;
  v.from_t = s;
  v.to_t = t;
  if (s == t) {
    v.affine = AffineMap::identity();
  } else {
    const RMat fs = at_s.matrix4();
    const bool singular = condition_number(fs) > kPinvConditionThreshold;
    v.pseudo_inverse_used = singular;
    const RMat fs_inv = singular ? pseudo_inverse(fs) : inverse(fs);
    RMat vt = at_t.matrix4() * fs_inv;
    // The pseudo-inverse may break the affine block structure; restore it.
    vt(0, 0) = 1.0;
    for (std::size_t j = 1; j < 4; ++j) vt(0, j) = 0.0;
    v.affine = AffineMap::from_matrix4(vt);
  }
  v.choi = choi_matrix(v.affine);
  v.min_choi_eig = herm_eig(v.choi).values.front();
  return v;
}

IntermediateMap intermediate(const DynamicalMap& map, double s, double t) {
  if (s < 0.0 || s > t) throw DomainError("intermediate: need 0 <= s <= t");
  return intermediate_from(map.at(s), map.at(t), s, t);
}

std::vector<BlochVec> fibonacci_sphere(std::size_t n) {
  std::vector<BlochVec> pts;
  pts.reserve(n);
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * static_cast<double>(i);
    pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return pts;
}

bool is_p_divisible_step(const IntermediateMap& v, int n_probe) {
  if (n_probe < 100) throw DomainError("is_p_divisible_step: n_probe must be >= 100");
  for (const auto& x : fibonacci_sphere(static_cast<std::size_t>(n_probe)))
    if (v.affine.apply(x).norm() > 1.0 + 1e-9) return false;
  return true;
}

namespace {

bool pauli_diagonal_unital(const AffineMap& f) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (std::abs(f.kappa[i]) > 1e-10) return false;
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j && std::abs(f.m(i, j)) > 1e-10) return false;
  }
  return true;
}

}  // namespace

std::vector<double> canonical_rates(const DynamicalMap& map, double t, double dt) {
  if (const auto* pc = map.phase_covariant()) {
    const PhaseCovRates r = phase_cov_rates(*pc, t);
    return {r.h, r.gamma_plus, r.gamma_minus, r.gamma_z};
  }
  if (!(dt > 0.0)) throw DomainError("canonical_rates: dt must be positive");

  const AffineMap f0 = map.at(t);
  if (!pauli_diagonal_unital(f0))
    throw DomainError("canonical_rates: map is neither Pauli-diagonal nor phase-covariant");

  Vec3 lam{}, dlam{};
  const bool central = t - dt >= map.t_min();
  const AffineMap f1 = map.at(t + dt);
  const AffineMap fm = central ? map.at(t - dt) : map.at(t + 2.0 * dt);
  for (std::size_t i = 0; i < 3; ++i) {
    lam[i] = f0.m(i, i);
    if (lam[i] <= 0.0) {
      std::ostringstream msg;
      msg << "canonical_rates: lambda_" << (i + 1) << " = " << lam[i] << " at t = " << t;
      throw SingularRateError(msg.str(), t);
    }
    dlam[i] = central ? (f1.m(i, i) - fm.m(i, i)) / (2.0 * dt)
                      : (-3.0 * lam[i] + 4.0 * f1.m(i, i) - fm.m(i, i)) / (2.0 * dt);
  }

  // d/dt log lambda_i = -2 sum_{j != i} gamma_j  ->  H gamma = r
  RMat h(3, 3, {0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0});
  const RMat h_inv = inverse(h);
  std::vector<double> gamma(3, 0.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) gamma[i] += h_inv(i, j) * (-0.5 * dlam[j] / lam[j]);
  return gamma;
}

}  // namespace nmw
