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

// The channel families used by the reproduction scenarios.

#include <array>
#include <optional>
#include <string>
#include <variant>

#include "nmwit/channels.hpp"

namespace nmw {

/// Pure dephasing with gamma_z(t) = (1 + a e^{-t}) / (2 (1 - a sinh t)).
struct DephasingParams {
  double alpha = 0.0;
};

/// Generalized amplitude damping with p(t) = sin^2(omega_p t), nu(t) = 1 - e^{-t}.
struct GadParams {
  double omega_p = 5.0;
};

/// Phase-covariant map defined by its parameter functions. phase(t) =
/// omega t + theta(t). time_scale sets the finite-difference step used for
/// rate extraction (1e-5 * time_scale).
struct PhaseCovariantParams {
  RateFn eta_par;
  RateFn eta_perp;
  RateFn kappa;
  RateFn theta = [](double) { return 0.0; };
  double omega = 0.0;
  double time_scale = 1.0;
};

/// Config-friendly phase-covariant shape: eta_par = e^{-a t},
/// eta_perp = e^{-b t}, kappa = kappa_inf (1 - e^{-a t}).
struct ExponentialPhaseCovParams {
  double eta_par_rate = 1.0;
  double eta_perp_rate = 1.0;
  double kappa_inf = 0.0;
  double omega = 0.0;
};

/// Sigmoid-staged phase-covariant counterexample. a_kappa has no default.
struct CounterexampleParams {
  double a_par = 0.01;
  double a_perp = 1.01;
  std::optional<double> a_kappa;
  double mu1 = 5.0;
  double mu2 = 4.0;
  double alpha_s = 5.0;
  double ref_time = 1.0;
};

enum class EnmRoute { generator, kraus };

/// Eternally non-Markovian Pauli channel, gamma_1 = gamma_2 = c/2,
/// gamma_3 = -(c/2) tanh t.
struct EnmParams {
  double c = 3.0;
  EnmRoute route = EnmRoute::generator;
  double dt = 1e-4;
};

using ChannelParams =
    std::variant<DephasingParams, GadParams, ExponentialPhaseCovParams, CounterexampleParams, EnmParams>;

std::string family_name(const ChannelParams& p);

double dephasing_rate(double alpha, double t);
/// Closed-form coherence factor exp(-2 int_0^t gamma_z) = e^{-t} |1 - a sinh t|.
double dephasing_coherence(double alpha, double t);
GeneratorSpec dephasing_generator(double alpha);

double gad_p(const GadParams& p, double t);
double gad_nu(double t);

struct PhaseCovRates {
  double h = 0.0;
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
  double gamma_z = 0.0;
};

PhaseCovRates phase_cov_rates(const PhaseCovariantParams& p, double t);

/// Canonical Kraus operators K1..K4 of a phase-covariant map. Throws
/// CpViolation (time = NaN) when one of the weights is negative.
KrausSet phase_covariant_kraus(double eta_par, double eta_perp, double kappa, double phase);

PhaseCovariantParams counterexample_functions(const CounterexampleParams& p);
GeneratorSpec enm_generator(double c);
/// Closed-form Pauli eigenvalues of the generator solution (l1 = l2, l3).
std::array<double, 2> enm_generator_lambdas(double c, double t);

DynamicalMap family_dephasing(const DephasingParams& p, double t_max);
DynamicalMap family_gad(const GadParams& p, double t_max);
DynamicalMap family_phase_covariant(const PhaseCovariantParams& p, double t_max, std::string name = "phase_covariant");
DynamicalMap family_exponential_phase_cov(const ExponentialPhaseCovParams& p, double t_max);
DynamicalMap family_counterexample(const CounterexampleParams& p, double t_max);
DynamicalMap family_enm(const EnmParams& p, double t_max);

DynamicalMap make_channel(const ChannelParams& p, double t_max);

}  // namespace nmw
