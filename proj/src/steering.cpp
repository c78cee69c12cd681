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

#include "nmwit/steering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nmwit/errors.hpp"
#include "nmwit/json_io.hpp"

namespace nmw {

MeasurementSet::MeasurementSet(std::vector<std::array<HermMat, 2>> settings) : settings_(std::move(settings)) {
  if (settings_.empty()) throw ValidationError("MeasurementSet: no settings");
  for (const auto& s : settings_) {
    const std::size_t n = s[0].dim();
    if (n != 2 || s[1].dim() != 2) throw DimensionError("MeasurementSet: projectors must be 2x2");
    if ((s[0].mat() + s[1].mat() - CMat::identity(n)).max_abs() > 1e-10)
      throw ValidationError("MeasurementSet: projectors do not sum to identity");
    for (const auto& p : s)
      if ((p.mat() * p.mat() - p.mat()).max_abs() > 1e-10) throw ValidationError("MeasurementSet: projector not idempotent");
  }
}

MeasurementSet MeasurementSet::pauli() {
  std::vector<std::array<HermMat, 2>> settings;
  const CMat id = CMat::identity(2);
  for (int i = 1; i <= 3; ++i)
    settings.push_back({HermMat((id + nmw::pauli(i)) * cplx(0.5)), HermMat((id - nmw::pauli(i)) * cplx(0.5))});
  return MeasurementSet(std::move(settings));
}

CMat Assemblage::marginal(std::size_t x) const { return members.at(x)[0].mat() + members.at(x)[1].mat(); }

void Assemblage::validate(double tol) const {
  if (members.empty()) throw ValidationError("Assemblage: no members");
  const CMat ref = marginal(0);
  for (std::size_t x = 0; x < members.size(); ++x) {
    for (const auto& m : members[x])
      if (m.dim() != 2) throw DimensionError("Assemblage: members must be 2x2");
    for (const auto& m : members[x])
      if (min_eigenvalue(m.mat()) < -tol) throw ValidationError("Assemblage: member is not PSD");
    if ((marginal(x) - ref).max_abs() > tol) throw ValidationError("Assemblage: marginals differ across settings");
  }
}

nlohmann::json Assemblage::to_json() const {
  nlohmann::json j;
  j["t"] = t;
  j["members"] = nlohmann::json::array();
  for (std::size_t x = 0; x < members.size(); ++x)
    for (std::size_t a = 0; a < 2; ++a)
      j["members"].push_back({{"a", a}, {"x", x}, {"matrix", matrix_to_json(members[x][a].mat())}});
  return j;
}

Assemblage Assemblage::from_json(const nlohmann::json& j) {
  Assemblage out;
  out.t = j.at("t").get<double>();
  std::size_t n_settings = 0;
  for (const auto& m : j.at("members")) n_settings = std::max(n_settings, m.at("x").get<std::size_t>() + 1);
  out.members.resize(n_settings);
  for (const auto& m : j.at("members")) {
    const auto a = m.at("a").get<std::size_t>();
    if (a > 1) throw ValidationError("Assemblage json: outcome must be 0 or 1");
    out.members[m.at("x").get<std::size_t>()][a] = HermMat(matrix_from_json(m.at("matrix")), 1e-9);
  }
  for (const auto& s : out.members)
    for (const auto& m : s)
      if (m.dim() == 0) throw ValidationError("Assemblage json: missing member");
  out.validate();
  return out;
}

DeterministicStrategies::DeterministicStrategies(std::size_t n_settings) : n_settings_(n_settings) {
  if (n_settings < 1 || n_settings > 16) throw DomainError("DeterministicStrategies: 1..16 settings supported");
}

Assemblage make_assemblage(const CMat& rho, const MeasurementSet& m, const AffineMap& channel, double t) {
  Assemblage out;
  out.t = t;
  for (std::size_t x = 0; x < m.size(); ++x) {
    std::array<HermMat, 2> pair;
    for (std::size_t a = 0; a < 2; ++a) {
      const CMat& p = m.projector(a, x).mat();
      pair[a] = HermMat(channel.apply(p * rho * p), 1e-9);
    }
    out.members.push_back(pair);
  }
  return out;
}

Assemblage make_assemblage(const CMat& rho, const MeasurementSet& m, const DynamicalMap& map, double t) {
  return make_assemblage(rho, m, map.at(t), t);
}

SdpProblem tsw_problem(const Assemblage& a, const DeterministicStrategies& s) {
  if (s.settings() != a.settings()) throw DimensionError("tsw: strategy table and assemblage disagree on settings");
  SdpProblem p;
  for (std::size_t lambda = 0; lambda < s.size(); ++lambda) {
    p.blocks.push_back({"Y" + std::to_string(lambda), 2});
    p.objective.push_back(CMat::identity(2));
  }
  for (std::size_t x = 0; x < a.settings(); ++x)
    for (std::size_t out = 0; out < 2; ++out) {
      SdpConstraint c{a.member(out, x).mat(), {}};
      for (std::size_t lambda = 0; lambda < s.size(); ++lambda)
        if (s.q(lambda, out, x) != 0) c.terms.push_back({lambda, -1.0});
      p.constraints.push_back(std::move(c));
    }
  return p;
}

TswResult tsw(const Assemblage& a, const DeterministicStrategies& s, const TswOptions& opts) {
  a.validate();
  const SdpProblem p = tsw_problem(a, s);
  TswResult r;
  r.solution = solve_admm(p, opts.admm);
  const auto& sol = r.solution;
  if (sol.status != SdpStatus::optimal || sol.gap > opts.gap_tol) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "tsw: solver did not converge at t=" << a.t << " (status " << to_string(sol.status) << ", gap " << sol.gap
        << ", primal residual " << sol.primal_residual << ", dual residual " << sol.dual_residual << ")";
    throw SolverError(msg.str());
  }
  const double w = 1.0 - sol.objective;
  // the optimum lies in [0, 1]; excursions within the certified gap are rounding
  if (w < -opts.gap_tol || w > 1.0 + opts.gap_tol) throw SolverError("tsw: steerable weight outside [0, 1]");
  r.w = std::clamp(w, 0.0, 1.0);
  if (opts.verify) {
    const SdpSolution check = solve_oracle(p);
    if (check.status != SdpStatus::optimal) throw SolverError("tsw: oracle solver failed: " + to_string(check.status));
    r.oracle_w = 1.0 - check.objective;
    if (std::abs(*r.oracle_w - w) > opts.verify_tol) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "tsw: solvers disagree at t=" << a.t << " (admm " << w << ", oracle " << *r.oracle_w << ")";
      throw SolverError(msg.str());
    }
  }
  return r;
}

WitnessTrace tsw_trace(const CMat& rho, const MeasurementSet& m, const DynamicalMap& map,
                       std::span<const double> times, const TswOptions& opts, Execution exec) {
  const DeterministicStrategies strategies(m.size());
  WitnessTrace trace;
  trace.kind = WitnessKind::tsw;
  trace.times.assign(times.begin(), times.end());
  trace.values = map_grid<double>(
      times, [&](std::size_t, double t) { return tsw(make_assemblage(rho, m, map, t), strategies, opts).w; }, exec);
  return trace;
}

TswMeasure tsw_measure(const WitnessTrace& w_trace) {
  w_trace.validate();
  const auto& w = w_trace.values;
  double n = 0.0;
  // sum |dW| + W_end - W_0 telescopes to 2 sum max(dW, 0); this form is
  // exactly zero for a non-increasing trace
  for (std::size_t i = 1; i < w.size(); ++i) n += 2.0 * std::max(w[i] - w[i - 1], 0.0);
  TswMeasure m;
  for (MeasureResult* r : {&m.raw, &m.normalized}) {
    r->points = w.size();
    if (!w.empty()) {
      r->t0 = w_trace.times.front();
      r->t1 = w_trace.times.back();
    }
  }
  m.raw.kind = MeasureKind::n_tsw_raw;
  m.raw.value = n;
  m.normalized.kind = MeasureKind::n_tsw_normalized;
  m.normalized.value = n / (1.0 + n);
  return m;
}

}  // namespace nmw
