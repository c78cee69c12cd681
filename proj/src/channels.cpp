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

#include "nmwit/channels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nmw {

AffineMap AffineMap::from_matrix4(const RMat& f) {
  if (f.rows() != 4 || f.cols() != 4) throw DimensionError("AffineMap::from_matrix4: expected 4x4");
  AffineMap out;
  for (std::size_t i = 0; i < 3; ++i) {
    out.kappa[i] = f(i + 1, 0);
    for (std::size_t j = 0; j < 3; ++j) out.m(i, j) = f(i + 1, j + 1);
  }
  return out;
}

RMat AffineMap::matrix4() const {
  RMat f(4, 4);
  f(0, 0) = 1.0;
  for (std::size_t i = 0; i < 3; ++i) {
    f(i + 1, 0) = kappa[i];
    for (std::size_t j = 0; j < 3; ++j) f(i + 1, j + 1) = m(i, j);
  }
  return f;
}

bool AffineMap::unital(double tol) const {
  return std::sqrt(kappa[0] * kappa[0] + kappa[1] * kappa[1] + kappa[2] * kappa[2]) <= tol;
}

CMat AffineMap::apply(const CMat& x) const {
  const auto c = pauli_coefficients(x);
  CMat out = pauli(0) * c[0];
  for (std::size_t i = 0; i < 3; ++i) {
    cplx coeff = c[0] * kappa[i];
    for (std::size_t j = 0; j < 3; ++j) coeff += m(i, j) * c[j + 1];
    out += pauli(static_cast<int>(i) + 1) * coeff;
  }
  return out;
}

BlochVec AffineMap::apply(const BlochVec& x) const {
  const Vec3 v = x.as_array();
  Vec3 out = kappa;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) out[i] += m(i, j) * v[j];
  return BlochVec::from_array(out);
}

AffineMap compose(const AffineMap& later, const AffineMap& earlier) {
  return AffineMap::from_matrix4(later.matrix4() * earlier.matrix4());
}

KrausSet::KrausSet(std::vector<CMat> operators, double tol) : ops_(std::move(operators)) {
  if (ops_.empty()) throw ValidationError("KrausSet: no operators");
  for (const auto& k : ops_)
    if (k.rows() != 2 || k.cols() != 2) throw DimensionError("KrausSet: operators must be 2x2");
  const double defect = completeness_defect();
  if (defect > tol) {
    std::ostringstream msg;
    msg << "KrausSet: sum K^dagger K deviates from identity by " << defect;
    throw ValidationError(msg.str());
  }
}

CMat KrausSet::apply(const CMat& x) const {
  CMat out(2, 2);
  for (const auto& k : ops_) out += k * x * k.adjoint();
  return out;
}

double KrausSet::completeness_defect() const {
  CMat sum(2, 2);
  for (const auto& k : ops_) sum += k.adjoint() * k;
  return (sum - CMat::identity(2)).max_abs();
}

AffineMap affine_from_kraus(const KrausSet& k) {
  AffineMap out;
  const CMat image_of_identity = k.apply(pauli(0));
  for (int i = 1; i <= 3; ++i) {
    out.kappa[i - 1] = 0.5 * (pauli(i) * image_of_identity).trace().real();
    for (int j = 1; j <= 3; ++j) out.m(i - 1, j - 1) = 0.5 * (pauli(i) * k.apply(pauli(j))).trace().real();
  }
  return out;
}

std::variant<KrausSet, ChoiNegativity> kraus_from_affine(const AffineMap& f, double tol) {
  const auto eig = herm_eig(choi_matrix(f));
  if (eig.values.front() < -tol) return ChoiNegativity{eig.values.front()};
  std::vector<CMat> ops;
  for (std::size_t k = 0; k < 4; ++k) {
    const double lam = eig.values[k];
    if (lam <= tol) continue;
    CMat op(2, 2);
    const double s = std::sqrt(lam);
    // column k of the Choi eigenbasis is sum_i |i> (x) K|i>
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t m = 0; m < 2; ++m) op(m, i) = s * eig.vectors(2 * i + m, k);
    ops.push_back(std::move(op));
  }
  return KrausSet(std::move(ops), 1e-8);
}

CMat apply_to_second(const AffineMap& f, const CMat& b) {
  if (b.rows() != 4 || b.cols() != 4) throw DimensionError("apply_to_second: expected 4x4");
  CMat out(4, 4);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CMat block(2, 2);
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) block(k, l) = b(2 * i + k, 2 * j + l);
      const CMat image = f.apply(block);
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = image(k, l);
    }
  }
  return out;
}

HermMat choi_matrix(const AffineMap& f) {
  CMat psi(4, 4);
  psi(0, 0) = psi(0, 3) = psi(3, 0) = psi(3, 3) = 1.0;
  return HermMat(apply_to_second(f, psi), 1e-9);
}

CptpReport cptp_report(const AffineMap& f, double tol) {
  const HermMat chi = choi_matrix(f);
  CptpReport r;
  r.min_choi_eig = herm_eig(chi).values.front();
  r.cp = r.min_choi_eig >= -tol;
  // partial trace over the output factor
  CMat reduced(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      reduced(i, j) = chi.mat()(2 * i, 2 * j) + chi.mat()(2 * i + 1, 2 * j + 1);
  r.tp_defect = (reduced - CMat::identity(2)).frobenius_norm();
  return r;
}

RMat GeneratorSpec::pauli_generator(double t) const {
  CMat h;
  if (hamiltonian) h = hamiltonian(t);
  std::vector<double> rates;
  rates.reserve(terms.size());
  for (const auto& term : terms) rates.push_back(term.rate(t));

  RMat g(4, 4);
  const cplx minus_i(0.0, -1.0);
  for (int j = 0; j < 4; ++j) {
    const CMat& x = pauli(j);
    CMat lx(2, 2);
    if (hamiltonian) lx += (h * x - x * h) * minus_i;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const CMat& l = terms[k].op;
      const CMat ldl = l.adjoint() * l;
      lx += (l * x * l.adjoint() - (ldl * x + x * ldl) * cplx(0.5)) * cplx(rates[k]);
    }
    for (int i = 0; i < 4; ++i)
      g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 0.5 * (pauli(i) * lx).trace().real();
  }
  return g;
}

namespace {

[[noreturn]] void throw_singular(double t);

void check_rates(const GeneratorSpec& g, double t) {
  for (const auto& term : g.terms) {
    if (!std::isfinite(term.rate(t))) throw_singular(t);
  }
}

[[noreturn]] void throw_singular(double t) {
  std::ostringstream msg;
  msg << "generator rate is singular at t = " << t;
  throw SingularRateError(msg.str(), t);
}

// A pole between samples shows up as a sign flip with |rate| h large on both
// sides; a smooth zero crossing cannot do that. Bisection locates it.
void check_pole(const RateFn& rate, double a, double b, double h) {
  double ra = rate(a), rb = rate(b);
  if (!(ra * rb < 0.0) || std::abs(ra) * h < 0.05 || std::abs(rb) * h < 0.05) return;
  for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++i) {
    const double m = 0.5 * (a + b);
    const double rm = rate(m);
    if (!std::isfinite(rm)) throw_singular(m);
    if ((rm < 0.0) == (ra < 0.0)) {
      a = m;
      ra = rm;
    } else {
      b = m;
    }
  }
  throw_singular(0.5 * (a + b));
}

RMat midpoint_step(const GeneratorSpec& g, double t0, double h) {
  check_rates(g, t0 + h);
  const double mid = t0 + 0.5 * h;
  check_rates(g, mid);
  for (const auto& term : g.terms) {
    check_pole(term.rate, t0, mid, h);
    check_pole(term.rate, mid, t0 + h, h);
  }
  RMat gen = g.pauli_generator(mid);
  return expm(gen * h);
}

}  // namespace

AffineMap propagate_generator(const GeneratorSpec& g, double t, double dt) {
  if (!(dt > 0.0)) throw DomainError("propagate_generator: dt must be positive");
  if (t < 0.0) throw DomainError("propagate_generator: t must be non-negative");
  if (t == 0.0) return AffineMap::identity();
  check_rates(g, 0.0);
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t / dt - 1e-9)));
  const double h = t / static_cast<double>(steps);
  RMat f = RMat::identity(4);
  for (std::size_t k = 0; k < steps; ++k) f = midpoint_step(g, static_cast<double>(k) * h, h) * f;
  return AffineMap::from_matrix4(f);
}

DynamicalMap DynamicalMap::from_affine(std::string name, AffineFn fn, double t_min, double t_max) {
  DynamicalMap d;
  d.name_ = std::move(name);
  d.repr_ = Representation::affine;
  d.affine_ = std::move(fn);
  d.t_min_ = t_min;
  d.t_max_ = t_max;
  return d;
}

DynamicalMap DynamicalMap::from_kraus(std::string name, KrausFn fn, double t_min, double t_max) {
  DynamicalMap d;
  d.name_ = std::move(name);
  d.repr_ = Representation::kraus;
  d.kraus_ = std::move(fn);
  d.t_min_ = t_min;
  d.t_max_ = t_max;
  return d;
}

DynamicalMap DynamicalMap::from_generator(std::string name, GeneratorSpec g, double t_max, double dt) {
  if (!(dt > 0.0) || !(t_max >= 0.0)) throw DomainError("from_generator: need dt > 0 and t_max >= 0");
  DynamicalMap d;
  d.name_ = std::move(name);
  d.repr_ = Representation::generator;
  d.generator_ = std::make_shared<const GeneratorSpec>(std::move(g));
  d.dt_ = dt;
  d.t_min_ = 0.0;
  d.t_max_ = t_max;

  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  auto points = std::make_shared<std::vector<RMat>>();
  points->reserve(steps + 1);
  points->push_back(RMat::identity(4));
  check_rates(*d.generator_, 0.0);
  for (std::size_t k = 0; k < steps; ++k)
    points->push_back(midpoint_step(*d.generator_, static_cast<double>(k) * dt, dt) * points->back());
  d.checkpoints_ = std::move(points);
  return d;
}

AffineMap DynamicalMap::raw_at(double t) const {
  switch (repr_) {
    case Representation::affine:
      return affine_(t);
    case Representation::kraus:
      return affine_from_kraus(kraus_(t));
    case Representation::generator: {
      const auto& pts = *checkpoints_;
      auto k = static_cast<std::size_t>(std::floor(t / dt_));
      k = std::min(k, pts.size() - 1);
      const double rem = t - static_cast<double>(k) * dt_;
      if (rem <= 1e-15) return AffineMap::from_matrix4(pts[k]);
      return AffineMap::from_matrix4(midpoint_step(*generator_, static_cast<double>(k) * dt_, rem) * pts[k]);
    }
  }
  return {};
}

AffineMap DynamicalMap::at(double t) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(t_max_));
  if (!std::isfinite(t) || t < t_min_ - slack || t > t_max_ + slack) {
    std::ostringstream msg;
    msg << name_ << ": time " << t << " outside domain [" << t_min_ << ", " << t_max_ << "]";
    throw DomainError(msg.str());
  }
  const AffineMap f = raw_at(std::clamp(t, t_min_, t_max_));
  if (policy_ == CpPolicy::raise) {
    const CptpReport r = cptp_report(f);
    if (!r.cp) {
      std::ostringstream msg;
      msg << name_ << ": map is not completely positive at t = " << t
          << " (min Choi eigenvalue " << r.min_choi_eig << ")";
      throw CpViolation(msg.str(), t, r.min_choi_eig);
    }
  }
  return f;
}

KrausSet DynamicalMap::kraus_at(double t) const {
  if (repr_ == Representation::kraus) {
    at(t);  // domain and CP validation
    return kraus_(t);
  }
  auto k = kraus_from_affine(at(t));
  if (auto* neg = std::get_if<ChoiNegativity>(&k)) {
    std::ostringstream msg;
    msg << name_ << ": no Kraus form at t = " << t << " (min Choi eigenvalue " << neg->min_choi_eig << ")";
    throw CpViolation(msg.str(), t, neg->min_choi_eig);
  }
  return std::get<KrausSet>(std::move(k));
}

HermMat DynamicalMap::choi(double t) const { return choi_matrix(at(t)); }

CptpReport DynamicalMap::is_cptp(double t, double tol) const {
  return cptp_report(with_cp_policy(CpPolicy::allow).at(t), tol);
}

DynamicalMap DynamicalMap::with_cp_policy(CpPolicy policy) const {
  DynamicalMap d = *this;
  d.policy_ = policy;
  return d;
}

DynamicalMap DynamicalMap::with_phase_covariant(std::shared_ptr<const PhaseCovariantParams> params) const {
  DynamicalMap d = *this;
  d.phase_cov_ = std::move(params);
  return d;
}

double purity(const CMat& rho) { return (rho * rho).trace().real(); }

}  // namespace nmw
