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

#include "nmwit/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "nmwit/divisibility.hpp"
#include "nmwit/errors.hpp"
#include "nmwit/report.hpp"
#include "nmwit/steering.hpp"

namespace nmw {

namespace {

BlochVec unit(const BlochVec& v) {
  const double n = v.norm();
  return {v.x1 / n, v.x2 / n, v.x3 / n};
}

TswOptions tsw_options(const Scenario& s) {
  TswOptions o;
  o.admm.tol = s.solver.tol;
  o.admm.max_iter = s.solver.max_iter;
  o.gap_tol = s.solver.gap_tol;
  o.verify = s.solver.verify;
  return o;
}

struct Expectation {
  MeasureKind measure;
  std::optional<bool> detected;
};

std::vector<Expectation> expectations(Figure f) {
  using M = MeasureKind;
  switch (f) {
    case Figure::fig1:
      return {{M::n_ccm, true}, {M::n_ccm_raw, true}};
    case Figure::fig2:
      return {{M::blp_td, false},   {M::blp_qjsd, true},        {M::n_lcm, true},
              {M::n_ccm, std::nullopt}, {M::n_ccm_raw, std::nullopt}, {M::n_tsw_raw, true},
              {M::n_tsw_normalized, true}};
    case Figure::fig3:
      return {{M::blp_td, true},  {M::blp_qjsd, false},   {M::n_lcm, false},
              {M::n_ccm, true},   {M::n_ccm_raw, true},   {M::n_tsw_raw, true},
              {M::n_tsw_normalized, true}};
    case Figure::fig4:
      return {{M::blp_td, false}, {M::blp_qjsd, false},   {M::n_lcm, true},
              {M::n_ccm, true},   {M::n_ccm_raw, true},   {M::n_tsw_raw, false},
              {M::n_tsw_normalized, false}};
  }
  return {};
}

std::string witness_of(MeasureKind k) {
  switch (k) {
    case MeasureKind::blp_td: return "td";
    case MeasureKind::blp_qjsd: return "qjsd";
    case MeasureKind::n_lcm: return "lcm";
    case MeasureKind::n_ccm:
    case MeasureKind::n_ccm_raw: return "ccm";
    case MeasureKind::n_tsw_raw:
    case MeasureKind::n_tsw_normalized: return "tsw";
  }
  return "";
}

}  // namespace

const MeasureResult* RunResult::find(MeasureKind k) const {
  for (const auto& run : runs)
    for (const auto& m : run.measures)
      if (m.kind == k) return &m;
  return nullptr;
}

DynamicalMap build_channel(const Scenario& s) {
  const double t_max = s.grid.t1 + 4.0 * s.ccm_epsilon() + 1e-9;
  return make_channel(s.channel, t_max).with_cp_policy(s.cp_policy);
}

WitnessRun run_witness(const Scenario& s, const DynamicalMap& map, WitnessKind kind, std::span<const double> times,
                       Execution exec) {
  WitnessRun out;
  out.kind = kind;
  const CMat rho = s.input.state();
  switch (kind) {
    case WitnessKind::td:
    case WitnessKind::qjsd: {
      const DistanceKind d = kind == WitnessKind::td ? DistanceKind::trace : DistanceKind::qjsd;
      out.trace = distance_trace(map, d, unit(s.trace_pair), times, exec);
      out.measures.push_back(blp_measure(map, d, times, s.blp_pairs, exec));
      break;
    }
    case WitnessKind::lcm: {
      out.trace = lcm_trace(rho, map, times, exec);
      MeasureResult m = lcm_measure(out.trace);
      if (s.input.sweep_pure > 0) {
        double best = -std::numeric_limits<double>::infinity();
        BlochVec best_x{};
        for (const BlochVec& x : fibonacci_sphere(s.input.sweep_pure)) {
          const double v = lcm_measure(density_from_bloch(x).mat(), map, times, exec).value;
          if (v > best) {
            best = v;
            best_x = x;
          }
        }
        m.metadata.emplace_back("pure_sweep_states", static_cast<double>(s.input.sweep_pure));
        m.metadata.emplace_back("pure_sweep_max", best);
        m.metadata.emplace_back("pure_sweep_x1", best_x.x1);
        m.metadata.emplace_back("pure_sweep_x2", best_x.x2);
        m.metadata.emplace_back("pure_sweep_x3", best_x.x3);
      }
      out.measures.push_back(std::move(m));
      break;
    }
    case WitnessKind::ccm_mu: {
      out.trace = ccm_trace(map, times, s.ccm_options(), rho, exec);
      CcmMeasure m = ccm_measure(out.trace);
      out.measures.push_back(std::move(m.normalized));
      out.measures.push_back(std::move(m.raw));
      break;
    }
    case WitnessKind::tsw: {
      out.trace = tsw_trace(rho, MeasurementSet::pauli(), map, times, tsw_options(s), exec);
      TswMeasure m = tsw_measure(out.trace);
      out.measures.push_back(std::move(m.raw));
      out.measures.push_back(std::move(m.normalized));
      break;
    }
  }
  return out;
}

RunResult run_scenario(const Scenario& s, Execution exec) {
  s.validate();
  RunResult r;
  r.scenario = s;
  r.times = s.grid.points();
  const DynamicalMap map = build_channel(s);
  for (WitnessKind k : s.witnesses) r.runs.push_back(run_witness(s, map, k, r.times, exec));
  return r;
}

std::vector<std::filesystem::path> write_traces(const RunResult& r, const std::string& command,
                                                const std::filesystem::path& dir, const std::string& prefix) {
  std::vector<std::filesystem::path> paths;
  for (const auto& run : r.runs) {
    const std::string name = to_string(run.kind);
    const auto path = dir / (prefix + "_" + name + ".csv");
    const CsvColumn cols[] = {{"t", run.trace.times}, {"value", run.trace.values}};
    write_csv(path, provenance(r.scenario, command, name), cols);
    paths.push_back(path);
  }
  return paths;
}

nlohmann::json summary_json(const RunResult& r, const std::string& command) {
  nlohmann::json j;
  j["tool"] = kToolVersion;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["config"] = to_json(r.scenario);
  j["measures"] = nlohmann::json::array();
  j["warnings"] = nlohmann::json::object();
  for (const auto& run : r.runs) {
    for (const auto& m : run.measures) j["measures"].push_back(to_json(m));
    j["warnings"][to_string(run.kind)] = run.trace.warnings;
  }
  j[kTimestampKey] = utc_timestamp();
  return j;
}

ChannelValidation validate_channel(const Scenario& s, Execution exec) {
  Scenario relaxed = s;
  relaxed.cp_policy = CpPolicy::allow;
  const DynamicalMap map = build_channel(relaxed);
  const std::vector<double> times = s.grid.points();
  const double eps = s.ccm_epsilon();
  ChannelValidation v;
  v.points = map_grid<ChannelPoint>(
      times,
      [&](std::size_t, double t) {
        ChannelPoint p;
        p.t = t;
        const CptpReport rep = map.is_cptp(t);
        p.min_choi_eig = rep.min_choi_eig;
        p.tp_defect = rep.tp_defect;
        const IntermediateMap step = intermediate(map, t, t + eps);
        p.step_min_choi_eig = step.min_choi_eig;
        p.step_p_divisible = is_p_divisible_step(step);
        return p;
      },
      exec);
  v.min_choi_eig = std::numeric_limits<double>::infinity();
  v.min_step_choi_eig = std::numeric_limits<double>::infinity();
  for (const auto& p : v.points) {
    v.cptp = v.cptp && p.min_choi_eig >= -1e-9 && p.tp_defect <= 1e-9;
    v.p_divisible = v.p_divisible && p.step_p_divisible;
    v.min_choi_eig = std::min(v.min_choi_eig, p.min_choi_eig);
    v.min_step_choi_eig = std::min(v.min_step_choi_eig, p.step_min_choi_eig);
  }
  return v;
}

Figure parse_figure(const std::string& name) {
  if (name == "fig1") return Figure::fig1;
  if (name == "fig2") return Figure::fig2;
  if (name == "fig3") return Figure::fig3;
  if (name == "fig4") return Figure::fig4;
  throw ConfigError("unknown figure '" + name + "' (expected fig1, fig2, fig3, fig4)");
}

std::string to_string(Figure f) {
  switch (f) {
    case Figure::fig1: return "fig1";
    case Figure::fig2: return "fig2";
    case Figure::fig3: return "fig3";
    case Figure::fig4: return "fig4";
  }
  return "";
}

Scenario figure_preset(Figure f) {
  Scenario s;
  const std::vector<WitnessKind> all = {WitnessKind::td, WitnessKind::qjsd, WitnessKind::lcm, WitnessKind::ccm_mu,
                                        WitnessKind::tsw};
  switch (f) {
    case Figure::fig1:
      s.channel = DephasingParams{5.0};
      s.witnesses = {WitnessKind::ccm_mu};
      s.grid = {0.0, 3.0, 2000};
      // past the singularity the closed form is no longer CP
      s.cp_policy = CpPolicy::allow;
      break;
    case Figure::fig2:
      s.channel = GadParams{5.0};
      s.witnesses = all;
      s.grid = {0.0, 3.0, 500};
      break;
    case Figure::fig3:
      s.channel = CounterexampleParams{};
      s.witnesses = all;
      s.grid = {0.0, 3.0, 1000};
      break;
    case Figure::fig4:
      s.channel = EnmParams{};
      s.witnesses = all;
      s.grid = {0.0, 3.0, 1000};
      break;
  }
  return s;
}

Reproduction reproduce(Figure f, const Scenario& s, Execution exec) {
  Reproduction out;
  out.figure = f;
  out.run = run_scenario(s, exec);

  for (const Expectation& e : expectations(f)) {
    const MeasureResult* m = out.run.find(e.measure);
    if (m == nullptr) continue;
    VerdictRow row;
    row.witness = witness_of(e.measure);
    row.measure = e.measure;
    row.value = m->value;
    row.detected = m->value > kDetectionThreshold;
    row.expected = e.detected;
    row.matches = !e.detected || *e.detected == row.detected;
    out.verdict.push_back(row);
  }

  const auto& times = out.run.times;
  if (f == Figure::fig1) {
    const auto* d = std::get_if<DephasingParams>(&s.channel);
    const WitnessRun* ccm = nullptr;
    for (const auto& r : out.run.runs)
      if (r.kind == WitnessKind::ccm_mu) ccm = &r;
    if (d != nullptr && ccm != nullptr) {
      const double singular = std::asinh(1.0 / d->alpha);
      std::size_t sign_bad = 0, used = 0;
      double worst = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double g = dephasing_rate(d->alpha, times[i]);
        out.gamma_z.push_back(g);
        if (std::abs(times[i] - singular) <= 1e-3) continue;
        const double mu = ccm->trace.values[i];
        ++used;
        if (!(std::signbit(mu) != std::signbit(g) && mu != 0.0 && g != 0.0)) ++sign_bad;
        worst = std::max(worst, std::abs(mu + 2.0 * g) / std::abs(2.0 * g));
      }
      out.checks.push_back({"sign_opposition", sign_bad == 0, static_cast<double>(sign_bad),
                            std::to_string(sign_bad) + " of " + std::to_string(used) + " points violate"});
      out.checks.push_back({"mu_equals_minus_2_gamma", worst <= 1e-2, worst, "max relative error"});
    }
  }
  if (f == Figure::fig2) {
    for (const auto& r : out.run.runs) {
      if (r.kind != WitnessKind::td) continue;
      double worst = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i)
        worst = std::max(worst, std::abs(r.trace.values[i] - std::sqrt(1.0 - gad_nu(times[i]))));
      out.checks.push_back({"td_closed_form", worst <= 1e-8, worst, "max |D(t) - sqrt(1 - nu(t))|"});
    }
  }
  if (f == Figure::fig4) {
    out.validation = validate_channel(s, exec);
    double worst_step = -std::numeric_limits<double>::infinity();
    for (const auto& p : out.validation->points)
      if (p.t > 0.05) worst_step = std::max(worst_step, p.step_min_choi_eig);
    out.checks.push_back({"step_not_cp", worst_step < -1e-6, worst_step,
                          "largest step min Choi eigenvalue for t > 0.05"});
    out.checks.push_back({"step_p_divisible", out.validation->p_divisible, out.validation->p_divisible ? 1.0 : 0.0,
                          "every step maps the Bloch sphere into the ball"});
  }
  return out;
}

std::vector<std::filesystem::path> write_reproduction(const Reproduction& r, const std::filesystem::path& dir) {
  const std::string name = to_string(r.figure);
  auto paths = write_traces(r.run, "reproduce " + name, dir, name);
  if (!r.gamma_z.empty()) {
    const WitnessRun* ccm = nullptr;
    for (const auto& run : r.run.runs)
      if (run.kind == WitnessKind::ccm_mu) ccm = &run;
    if (ccm != nullptr) {
      const auto path = dir / (name + "_gamma_mu.csv");
      const CsvColumn cols[] = {{"t", r.run.times}, {"gamma_z", r.gamma_z}, {"mu", ccm->trace.values}};
      write_csv(path, provenance(r.run.scenario, "reproduce " + name, "gamma_z,ccm"), cols);
      paths.push_back(path);
    }
  }
  if (r.validation) {
    std::vector<double> t, eig, tp, step, pdiv;
    for (const auto& p : r.validation->points) {
      t.push_back(p.t);
      eig.push_back(p.min_choi_eig);
      tp.push_back(p.tp_defect);
      step.push_back(p.step_min_choi_eig);
      pdiv.push_back(p.step_p_divisible ? 1.0 : 0.0);
    }
    const auto path = dir / (name + "_divisibility.csv");
    const CsvColumn cols[] = {
        {"t", t}, {"min_choi_eig", eig}, {"tp_defect", tp}, {"step_min_choi_eig", step}, {"step_p_divisible", pdiv}};
    write_csv(path, provenance(r.run.scenario, "reproduce " + name, "divisibility"), cols);
    paths.push_back(path);
  }
  nlohmann::json j = summary_json(r.run, "reproduce " + name);
  j["verdict"] = nlohmann::json::array();
  for (const auto& v : r.verdict)
    j["verdict"].push_back({{"witness", v.witness},
                            {"measure", to_string(v.measure)},
                            {"value", v.value},
                            {"detected", v.detected},
                            {"expected", v.expected ? nlohmann::json(*v.expected) : nlohmann::json(nullptr)},
                            {"matches", v.matches}});
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"detail", c.detail}});
  const auto path = dir / (name + "_summary.json");
  write_json(path, j);
  paths.push_back(path);
  return paths;
}

std::string verdict_table(const Reproduction& r) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "witness" << std::setw(20) << "measure" << std::setw(24) << "value"
      << std::setw(10) << "detected" << std::setw(10) << "expected" << "matches\n";
  for (const auto& v : r.verdict) {
    out << std::setw(8) << v.witness << std::setw(20) << to_string(v.measure) << std::setw(24)
        << format_double(v.value) << std::setw(10) << (v.detected ? "yes" : "no") << std::setw(10)
        << (v.expected ? (*v.expected ? "yes" : "no") : "-") << (v.matches ? "yes" : "NO") << '\n';
  }
  for (const auto& c : r.checks)
    out << "check " << c.name << ": " << (c.passed ? "ok" : "FAILED") << " (" << c.detail << " = "
        << format_double(c.value) << ")\n";
  return out.str();
}

}  // namespace nmw
