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

// nmwit: non-Markovianity witnesses for qubit channels.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nmwit/config.hpp"
#include "nmwit/errors.hpp"
#include "nmwit/report.hpp"
#include "nmwit/scenario.hpp"

namespace {

using namespace nmw;

enum Exit : int { ok = 0, other = 1, config = 2, domain = 3, solver = 4, io = 5 };

/// Flags shared by every subcommand. Unset flags leave the scenario alone.
struct Overrides {
  std::string config_file;
  std::string family;
  std::vector<std::string> params;
  std::vector<std::string> witnesses;
  std::optional<double> t0, t1, epsilon, a_kappa, tol, gap_tol;
  std::optional<std::size_t> steps, blp_pairs, sweep_pure;
  std::optional<int> max_iter, threads;
  std::vector<double> input_bloch, trace_pair;
  std::string ccm_baseline, cp_policy, enm_route, output_dir;
  bool verify = false, richardson = false, serial = false;

  void add_to(CLI::App& app, bool with_witnesses) {
    app.add_option("--config", config_file, "JSON scenario file (CLI flags take precedence)");
    app.add_option("--family", family, "dephasing | gad | phase_covariant | counterexample | enm");
    app.add_option("--param", params, "family parameter as key=value (repeatable)");
    if (with_witnesses)
      app.add_option("--witness", witnesses, "td, qjsd, lcm, ccm, tsw (repeatable or comma separated)")->delimiter(',');
    app.add_option("--t0", t0, "grid start");
    app.add_option("--t1", t1, "grid end");
    app.add_option("--steps", steps, "number of grid points (>= 2)");
    app.add_option("--epsilon", epsilon, "CCM finite-difference step (default 1e-4 (t1 - t0))");
    app.add_option("--ccm-baseline", ccm_baseline, "identity | literal");
    app.add_flag("--ccm-richardson", richardson, "Richardson-extrapolate the CCM rate");
    app.add_option("--blp-pairs", blp_pairs, "antipodal pairs probed by BLP");
    app.add_option("--input-bloch", input_bloch, "input state Bloch vector x y z")->expected(3);
    app.add_option("--sweep-pure", sweep_pure, "LCM: also sweep this many pure inputs");
    app.add_option("--trace-pair", trace_pair, "direction of the td/qjsd trace pair x y z")->expected(3);
    app.add_option("--cp-policy", cp_policy, "raise | allow");
    app.add_option("--tol", tol, "SDP tolerance");
    app.add_option("--max-iter", max_iter, "SDP iteration cap");
    app.add_option("--gap-tol", gap_tol, "accepted duality gap");
    app.add_flag("--verify", verify, "cross-check every SDP with the oracle solver");
    app.add_option("--enm-route", enm_route, "generator | kraus");
    app.add_option("--A-kappa", a_kappa, "counterexample a_kappa amplitude");
    app.add_option("--output-dir", output_dir, std::string("output directory (default $") + kOutputDirEnv + ")");
    app.add_option("--threads", threads, "worker threads (default: logical cores)");
    app.add_flag("--serial", serial, "use the serial reference kernels");
  }

  Scenario apply(Scenario s) const {
    if (!config_file.empty()) s = load_scenario(config_file, std::move(s));
    if (!family.empty() && family != family_name(s.channel)) s.channel = default_channel(family);
    for (const auto& kv : params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--param expects key=value, got '" + kv + "'");
      set_channel_param(s.channel, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!enm_route.empty()) set_channel_param(s.channel, "route", enm_route);
    if (a_kappa) set_channel_param(s.channel, "a_kappa", format_double(*a_kappa));
    if (!witnesses.empty()) {
      s.witnesses.clear();
      for (const auto& w : witnesses) s.witnesses.push_back(parse_witness(w));
    }
    if (t0) s.grid.t0 = *t0;
    if (t1) s.grid.t1 = *t1;
    if (steps) s.grid.steps = *steps;
    if (epsilon) s.epsilon = *epsilon;
    if (!ccm_baseline.empty())
      s = scenario_from_json({{"ccm_baseline", ccm_baseline}}, std::move(s));
    if (richardson) s.ccm_richardson = true;
    if (blp_pairs) s.blp_pairs = *blp_pairs;
    if (!input_bloch.empty()) s.input.bloch = {input_bloch[0], input_bloch[1], input_bloch[2]};
    if (sweep_pure) s.input.sweep_pure = *sweep_pure;
    if (!trace_pair.empty()) s.trace_pair = {trace_pair[0], trace_pair[1], trace_pair[2]};
    if (!cp_policy.empty()) s = scenario_from_json({{"cp_policy", cp_policy}}, std::move(s));
    if (tol) s.solver.tol = *tol;
    if (max_iter) s.solver.max_iter = *max_iter;
    if (gap_tol) s.solver.gap_tol = *gap_tol;
    if (verify) s.solver.verify = true;
    if (!output_dir.empty()) s.output_dir = output_dir;
    if (threads) s.threads = *threads;
    if (s.threads < 0) throw ConfigError("--threads must be >= 0");
    set_worker_threads(s.threads);
    return s;
  }

  Execution exec() const { return serial ? Execution::serial : Execution::parallel; }
};

void print_measures(const RunResult& r) {
  for (const auto& run : r.runs) {
    for (const auto& m : run.measures) std::cout << to_string(m.kind) << " = " << format_double(m.value) << '\n';
    for (const auto& w : run.trace.warnings) std::cerr << "warning (" << to_string(run.kind) << "): " << w << '\n';
  }
}

void print_paths(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::cout << "wrote " << p.string() << '\n';
}

int cmd_witness(const Overrides& o) {
  const Scenario s = o.apply({});
  s.validate();
  const RunResult r = run_scenario(s, o.exec());
  const auto dir = resolve_output_dir(s);
  const std::string prefix = family_name(s.channel);
  auto paths = write_traces(r, "witness", dir, prefix);
  const auto summary = dir / (prefix + "_summary.json");
  write_json(summary, summary_json(r, "witness"));
  paths.push_back(summary);
  print_measures(r);
  print_paths(paths);
  return ok;
}

int cmd_measure(const Overrides& o) {
  const Scenario s = o.apply({});
  s.validate();
  const RunResult r = run_scenario(s, o.exec());
  print_measures(r);
  if (!s.output_dir.empty() || std::getenv(kOutputDirEnv) != nullptr) {
    const auto path = resolve_output_dir(s) / (family_name(s.channel) + "_measures.json");
    write_json(path, summary_json(r, "measure"));
    print_paths({path});
  }
  return ok;
}

int cmd_reproduce(const Overrides& o, const std::string& figure) {
  const Figure f = parse_figure(figure);
  const Scenario s = o.apply(figure_preset(f));
  s.validate();
  const Reproduction r = reproduce(f, s, o.exec());
  std::cout << verdict_table(r);
  print_paths(write_reproduction(r, resolve_output_dir(s)));
  return ok;
}

int cmd_validate_channel(const Overrides& o) {
  Scenario s = o.apply({});
  if (s.witnesses.empty()) s.witnesses = {WitnessKind::td};  // not used here
  s.validate();
  const ChannelValidation v = validate_channel(s, o.exec());
  std::vector<double> t, eig, tp, step, pdiv;
  for (const auto& p : v.points) {
    t.push_back(p.t);
    eig.push_back(p.min_choi_eig);
    tp.push_back(p.tp_defect);
    step.push_back(p.step_min_choi_eig);
    pdiv.push_back(p.step_p_divisible ? 1.0 : 0.0);
  }
  const auto path = resolve_output_dir(s) / (family_name(s.channel) + "_validation.csv");
  const CsvColumn cols[] = {
      {"t", t}, {"min_choi_eig", eig}, {"tp_defect", tp}, {"step_min_choi_eig", step}, {"step_p_divisible", pdiv}};
  write_csv(path, provenance(s, "validate-channel", "divisibility"), cols);
  std::cout << "cptp: " << (v.cptp ? "yes" : "no") << " (min Choi eigenvalue " << format_double(v.min_choi_eig)
            << ")\n"
            << "p-divisible steps: " << (v.p_divisible ? "yes" : "no") << '\n'
            << "cp-divisible steps: " << (v.min_step_choi_eig >= -1e-9 ? "yes" : "no") << " (min step Choi eigenvalue "
            << format_double(v.min_step_choi_eig) << ")\n";
  print_paths({path});
  if (!v.cptp && s.cp_policy == CpPolicy::raise) {
    std::cerr << "error: channel leaves the CPTP set on the grid\n";
    return domain;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Markovianity witnesses for qubit channels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Overrides witness_o, measure_o, reproduce_o, validate_o;
  std::string figure;
  auto* witness = app.add_subcommand("witness", "write witness traces (CSV) and a measure summary (JSON)");
  witness_o.add_to(*witness, true);
  auto* measure = app.add_subcommand("measure", "print the non-Markovianity measures");
  measure_o.add_to(*measure, true);
  auto* repro = app.add_subcommand("reproduce", "run a figure preset and print its verdict table");
  repro->add_option("figure", figure, "fig1 | fig2 | fig3 | fig4")->required();
  reproduce_o.add_to(*repro, true);
  auto* validate = app.add_subcommand("validate-channel", "check CPTP and divisibility on the grid");
  validate_o.add_to(*validate, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config;
  }

  try {
    if (*witness) return cmd_witness(witness_o);
    if (*measure) return cmd_measure(measure_o);
    if (*repro) return cmd_reproduce(reproduce_o, figure);
    if (*validate) return cmd_validate_channel(validate_o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config;
  } catch (const CpViolation& e) {
    std::cerr << "CP-domain error: " << e.what() << '\n';
    return domain;
  } catch (const SingularRateError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return domain;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return domain;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return solver;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return io;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return other;
  }
  return other;
}
