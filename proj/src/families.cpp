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

#include "nmwit/families.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace nmw {

namespace {

struct NameVisitor {
  std::string operator()(const DephasingParams&) const { return "dephasing"; }
  std::string operator()(const GadParams&) const { return "gad"; }
  std::string operator()(const ExponentialPhaseCovParams&) const { return "phase_covariant"; }
  std::string operator()(const CounterexampleParams&) const { return "counterexample"; }
  std::string operator()(const EnmParams&) const { return "enm"; }
};

double central_difference(const RateFn& f, double t, double h) { return (f(t + h) - f(t - h)) / (2.0 * h); }

AffineMap pauli_diagonal(double l1, double l2, double l3) {
  AffineMap f;
  f.m(0, 0) = l1;
  f.m(1, 1) = l2;
  f.m(2, 2) = l3;
  return f;
}

}  // namespace

std::string family_name(const ChannelParams& p) { return std::visit(NameVisitor{}, p); }

double dephasing_rate(double alpha, double t) {
  const double denom = 2.0 * (1.0 - alpha * std::sinh(t));
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return (1.0 + alpha * std::exp(-t)) / denom;
}

double dephasing_coherence(double alpha, double t) { return std::exp(-t) * std::abs(1.0 - alpha * std::sinh(t)); }

GeneratorSpec dephasing_generator(double alpha) {
  GeneratorSpec g;
  g.terms.push_back({pauli(3), [alpha](double t) { return dephasing_rate(alpha, t); }});
  return g;
}

double gad_p(const GadParams& p, double t) {
  const double s = std::sin(p.omega_p * t);
  return s * s;
}

double gad_nu(double t) { return 1.0 - std::exp(-t); }

PhaseCovRates phase_cov_rates(const PhaseCovariantParams& p, double t) {
  const double h = 1e-5 * p.time_scale;
  const double eta_par = p.eta_par(t);
  const double eta_perp = p.eta_perp(t);
  if (std::abs(eta_par) < 1e-300 || std::abs(eta_perp) < 1e-300) {
    std::ostringstream msg;
    msg << "phase_cov_rates: eta vanishes at t = " << t;
    throw SingularRateError(msg.str(), t);
  }
  const double k = p.kappa(t);
  const double dk = central_difference(p.kappa, t, h);
  const double log_dpar = central_difference(p.eta_par, t, h) / eta_par;
  const double log_dperp = central_difference(p.eta_perp, t, h) / eta_perp;

  PhaseCovRates r;
  r.h = central_difference(p.theta, t, h);
  r.gamma_plus = 0.5 * (dk - log_dpar * (1.0 + k));
  r.gamma_minus = -0.5 * (dk + log_dpar * (1.0 - k));
  r.gamma_z = 0.25 * (log_dpar - 2.0 * log_dperp);
  return r;
}

KrausSet phase_covariant_kraus(double eta_par, double eta_perp, double kappa, double phase) {
  const double s = std::sqrt(kappa * kappa + 4.0 * eta_perp * eta_perp);
  double w1 = 0.5 * (1.0 - eta_par + kappa);
  double w2 = 0.5 * (1.0 - eta_par - kappa);
  double g_plus = 0.5 * (1.0 + eta_par + s);
  double g_minus = 0.5 * (1.0 + eta_par - s);
  const double worst = std::min({w1, w2, g_plus, g_minus});
  if (worst < -1e-12) {
    std::ostringstream msg;
    msg << "phase-covariant parameters are not completely positive (min Choi eigenvalue " << worst << ")";
    throw CpViolation(msg.str(), std::numeric_limits<double>::quiet_NaN(), worst);
  }
  w1 = std::max(w1, 0.0);
  w2 = std::max(w2, 0.0);
  g_minus = std::max(g_minus, 0.0);

  // cot(phi) = (kappa + s) / (2 eta_perp)
  double phi = 0.0;
  if (eta_perp != 0.0 || kappa + s != 0.0)
    phi = std::atan2(2.0 * eta_perp, kappa + s);
  else if (kappa < 0.0)
    phi = M_PI / 2.0;

  const cplx e_phase = std::polar(1.0, phase);
  const double c = std::cos(phi);
  const double sn = std::sin(phi);
  std::vector<CMat> ops;
  ops.push_back(CMat(2, 2, {0.0, std::sqrt(w1), 0.0, 0.0}));
  ops.push_back(CMat(2, 2, {0.0, 0.0, std::sqrt(w2), 0.0}));
  ops.push_back(CMat(2, 2, {std::sqrt(g_plus) * c, 0.0, 0.0, std::sqrt(g_plus) * sn * e_phase}));
  ops.push_back(CMat(2, 2, {-std::sqrt(g_minus) * sn, 0.0, 0.0, std::sqrt(g_minus) * c * e_phase}));
  return KrausSet(std::move(ops), 1e-9);
}

PhaseCovariantParams counterexample_functions(const CounterexampleParams& p) {
  if (!p.a_kappa) throw ConfigError("counterexample channel: A_kappa is required (no default)");
  const double a_kappa = *p.a_kappa;
  auto sigmoid = [alpha = p.alpha_s](double x) { return 1.0 / (1.0 + std::exp(-alpha * x)); };
  auto eta_raw = [=](double tau, double a) {
    return std::exp(-p.mu1 * tau) * sigmoid(1.0 - tau) +
           std::exp(-p.mu1) * std::exp(-p.mu2 * (tau - 1.0)) * sigmoid(tau - 1.0) * sigmoid(2.0 - tau) +
           std::exp(-p.mu1 - p.mu2) * ((3.0 - tau) + a * (tau - 2.0)) * sigmoid(tau - 2.0);
  };
  auto kappa_raw = [=](double tau) {
    return a_kappa * tau * sigmoid(2.0 - tau) + 2.0 * a_kappa * ((3.0 - tau) + p.a_par * (tau - 2.0)) * sigmoid(tau - 2.0);
  };
  // The smoothed steps leave eta(0) slightly below 1 and kappa(0) != 0;
  // rescale so that the map starts at the identity.
  const double eta_par0 = eta_raw(0.0, p.a_par);
  const double eta_perp0 = eta_raw(0.0, p.a_perp);
  const double kappa0 = kappa_raw(0.0);
  const double T = p.ref_time;

  PhaseCovariantParams out;
  out.eta_par = [=](double t) { return eta_raw(t / T, p.a_par) / eta_par0; };
  out.eta_perp = [=](double t) { return eta_raw(t / T, p.a_perp) / eta_perp0; };
  out.kappa = [=](double t) { return kappa_raw(t / T) - kappa0; };
  out.time_scale = T;
  return out;
}

GeneratorSpec enm_generator(double c) {
  GeneratorSpec g;
  g.terms.push_back({pauli(1), [c](double) { return c / 2.0; }});
  g.terms.push_back({pauli(2), [c](double) { return c / 2.0; }});
  g.terms.push_back({pauli(3), [c](double t) { return -c / 2.0 * std::tanh(t); }});
  return g;
}

std::array<double, 2> enm_generator_lambdas(double c, double t) {
  return {std::pow(std::exp(-t) * std::cosh(t), c), std::exp(-2.0 * c * t)};
}

DynamicalMap family_dephasing(const DephasingParams& p, double t_max) {
  const double alpha = p.alpha;
  return DynamicalMap::from_affine(
      "dephasing",
      [alpha](double t) {
        const double l = dephasing_coherence(alpha, t);
        return pauli_diagonal(l, l, 1.0);
      },
      0.0, t_max);
}

DynamicalMap family_gad(const GadParams& p, double t_max) {
  return DynamicalMap::from_affine(
      "gad",
      [p](double t) {
        const double nu = gad_nu(t);
        AffineMap f = pauli_diagonal(std::sqrt(1.0 - nu), std::sqrt(1.0 - nu), 1.0 - nu);
        f.kappa[2] = (1.0 - 2.0 * gad_p(p, t)) * nu;
        return f;
      },
      0.0, t_max);
}

DynamicalMap family_phase_covariant(const PhaseCovariantParams& p, double t_max, std::string name) {
  auto shared = std::make_shared<const PhaseCovariantParams>(p);
  DynamicalMap d = DynamicalMap::from_kraus(
      std::move(name),
      [shared](double t) {
        const double phase = shared->omega * t + shared->theta(t);
        try {
          return phase_covariant_kraus(shared->eta_par(t), shared->eta_perp(t), shared->kappa(t), phase);
        } catch (const CpViolation& e) {
          std::ostringstream msg;
          msg << "phase-covariant map is not completely positive at t = " << t << " (min Choi eigenvalue "
              << e.min_choi_eig() << ")";
          throw CpViolation(msg.str(), t, e.min_choi_eig());
        }
      },
      0.0, t_max);
  return d.with_phase_covariant(shared);
}

DynamicalMap family_exponential_phase_cov(const ExponentialPhaseCovParams& p, double t_max) {
  PhaseCovariantParams f;
  f.eta_par = [a = p.eta_par_rate](double t) { return std::exp(-a * t); };
  f.eta_perp = [b = p.eta_perp_rate](double t) { return std::exp(-b * t); };
  f.kappa = [a = p.eta_par_rate, k = p.kappa_inf](double t) { return k * (1.0 - std::exp(-a * t)); };
  f.omega = p.omega;
  return family_phase_covariant(f, t_max);
}

DynamicalMap family_counterexample(const CounterexampleParams& p, double t_max) {
  return family_phase_covariant(counterexample_functions(p), t_max, "counterexample");
}

DynamicalMap family_enm(const EnmParams& p, double t_max) {
  if (p.route == EnmRoute::generator) return DynamicalMap::from_generator("enm", enm_generator(p.c), t_max, p.dt);
  const double c = p.c;
  return DynamicalMap::from_kraus(
      "enm_kraus",
      [c](double t) {
        const double k = 0.25 * (1.0 - std::exp(-c * t));
        return KrausSet({pauli(0) * cplx(std::sqrt(1.0 - 2.0 * k)), pauli(1) * cplx(std::sqrt(k)),
                         pauli(2) * cplx(std::sqrt(k))});
      },
      0.0, t_max);
}

DynamicalMap make_channel(const ChannelParams& p, double t_max) {
  return std::visit(
      [t_max](const auto& params) -> DynamicalMap {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, DephasingParams>) return family_dephasing(params, t_max);
        if constexpr (std::is_same_v<T, GadParams>) return family_gad(params, t_max);
        if constexpr (std::is_same_v<T, ExponentialPhaseCovParams>) return family_exponential_phase_cov(params, t_max);
        if constexpr (std::is_same_v<T, CounterexampleParams>) return family_counterexample(params, t_max);
        if constexpr (std::is_same_v<T, EnmParams>) return family_enm(params, t_max);
      },
      p);
}

}  // namespace nmw
