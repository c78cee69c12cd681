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

#include "nmwit/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>

#include "nmwit/errors.hpp"

namespace nmw {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": bad value for '" + key + "'");
  }
}

std::string route_name(EnmRoute r) { return r == EnmRoute::generator ? "generator" : "kraus"; }

EnmRoute parse_route(const std::string& s) {
  if (s == "generator") return EnmRoute::generator;
  if (s == "kraus") return EnmRoute::kraus;
  throw ConfigError("enm route must be 'generator' or 'kraus'");
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ConfigError("parameter " + key + ": '" + text + "' is not a number");
  return v;
}

json bloch_json(const BlochVec& b) { return json::array({b.x1, b.x2, b.x3}); }

BlochVec bloch_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(where + ": expected [x, y, z]");
  try {
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  } catch (const json::exception&) {
    throw ConfigError(where + ": entries must be numbers");
  }
}

}  // namespace

WitnessKind parse_witness(const std::string& name) {
  if (name == "td") return WitnessKind::td;
  if (name == "qjsd") return WitnessKind::qjsd;
  if (name == "lcm") return WitnessKind::lcm;
  if (name == "ccm") return WitnessKind::ccm_mu;
  if (name == "tsw") return WitnessKind::tsw;
  throw ConfigError("unknown witness '" + name + "' (expected td, qjsd, lcm, ccm, tsw)");
}

void Scenario::validate() const {
  if (witnesses.empty()) throw ConfigError("scenario: witness list is empty");
  if (grid.steps < 2) throw ConfigError("scenario: grid needs at least 2 points");
  if (!(grid.t0 < grid.t1)) throw ConfigError("scenario: grid needs t0 < t1");
  if (grid.t0 < 0.0) throw ConfigError("scenario: grid must start at t >= 0");
  if (!(ccm_epsilon() > 0.0)) throw ConfigError("scenario: epsilon must be positive");
  if (blp_pairs < 1) throw ConfigError("scenario: blp pairs must be >= 1");
  if (!input.bloch.physical()) throw ConfigError("scenario: input Bloch vector has norm > 1");
  // Sum_a Pi rho Pi = rho for all three Pauli bases only at the origin;
  // elsewhere the assemblage signals in time.
  if (std::find(witnesses.begin(), witnesses.end(), WitnessKind::tsw) != witnesses.end() && input.bloch.norm() > 0.0)
    throw ConfigError("scenario: tsw needs the maximally mixed input (input Bloch vector 0)");
  if (trace_pair.norm() < 1e-12) throw ConfigError("scenario: trace pair direction must be non-zero");
  if (!(solver.tol > 0.0) || !(solver.gap_tol > 0.0) || solver.max_iter < 1)
    throw ConfigError("scenario: solver tolerances must be positive");
  if (const auto* c = std::get_if<CounterexampleParams>(&channel); c && !c->a_kappa)
    throw ConfigError("counterexample family needs a_kappa (not given in the source; pass --A-kappa)");
  if (const auto* e = std::get_if<EnmParams>(&channel); e && !(e->dt > 0.0))
    throw ConfigError("enm: dt must be positive");
}

json channel_to_json(const ChannelParams& p) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DephasingParams>) return {{"alpha", v.alpha}};
        if constexpr (std::is_same_v<T, GadParams>) return {{"omega_p", v.omega_p}};
        if constexpr (std::is_same_v<T, ExponentialPhaseCovParams>)
          return {{"eta_par_rate", v.eta_par_rate},
                  {"eta_perp_rate", v.eta_perp_rate},
                  {"kappa_inf", v.kappa_inf},
                  {"omega", v.omega}};
        if constexpr (std::is_same_v<T, CounterexampleParams>) {
          json j = {{"a_par", v.a_par}, {"a_perp", v.a_perp}, {"mu1", v.mu1},
                    {"mu2", v.mu2},     {"alpha_s", v.alpha_s}, {"ref_time", v.ref_time}};
          j["a_kappa"] = v.a_kappa ? json(*v.a_kappa) : json(nullptr);
          return j;
        }
        if constexpr (std::is_same_v<T, EnmParams>) return {{"c", v.c}, {"route", route_name(v.route)}, {"dt", v.dt}};
      },
      p);
}

ChannelParams default_channel(const std::string& family) {
  if (family == "dephasing") return DephasingParams{};
  if (family == "gad") return GadParams{};
  if (family == "phase_covariant") return ExponentialPhaseCovParams{};
  if (family == "counterexample") return CounterexampleParams{};
  if (family == "enm") return EnmParams{};
  throw ConfigError("unknown family '" + family + "' (expected dephasing, gad, phase_covariant, counterexample, enm)");
}

ChannelParams channel_from_json(const std::string& family, const json& params) {
  ChannelParams p = default_channel(family);
  const std::string where = "params(" + family + ")";
  std::visit(
      [&](auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DephasingParams>) {
          reject_unknown(params, {"alpha"}, where);
          read(params, "alpha", v.alpha, where);
        }
        if constexpr (std::is_same_v<T, GadParams>) {
          reject_unknown(params, {"omega_p"}, where);
          read(params, "omega_p", v.omega_p, where);
        }
        if constexpr (std::is_same_v<T, ExponentialPhaseCovParams>) {
          reject_unknown(params, {"eta_par_rate", "eta_perp_rate", "kappa_inf", "omega"}, where);
          read(params, "eta_par_rate", v.eta_par_rate, where);
          read(params, "eta_perp_rate", v.eta_perp_rate, where);
          read(params, "kappa_inf", v.kappa_inf, where);
          read(params, "omega", v.omega, where);
        }
        if constexpr (std::is_same_v<T, CounterexampleParams>) {
          reject_unknown(params, {"a_par", "a_perp", "a_kappa", "mu1", "mu2", "alpha_s", "ref_time"}, where);
          read(params, "a_par", v.a_par, where);
          read(params, "a_perp", v.a_perp, where);
          read(params, "mu1", v.mu1, where);
          read(params, "mu2", v.mu2, where);
          read(params, "alpha_s", v.alpha_s, where);
          read(params, "ref_time", v.ref_time, where);
          if (params.contains("a_kappa") && !params.at("a_kappa").is_null()) {
            double a = 0.0;
            read(params, "a_kappa", a, where);
            v.a_kappa = a;
          }
        }
        if constexpr (std::is_same_v<T, EnmParams>) {
          reject_unknown(params, {"c", "route", "dt"}, where);
          read(params, "c", v.c, where);
          read(params, "dt", v.dt, where);
          std::string route = route_name(v.route);
          read(params, "route", route, where);
          v.route = parse_route(route);
        }
      },
      p);
  return p;
}

void set_channel_param(ChannelParams& p, const std::string& key, const std::string& value) {
  json params = channel_to_json(p);
  if (!params.contains(key)) throw ConfigError("family " + family_name(p) + " has no parameter '" + key + "'");
  if (key == "route")
    params[key] = value;
  else
    params[key] = parse_number(key, value);
  p = channel_from_json(family_name(p), params);
}

json to_json(const Scenario& s) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["family"] = family_name(s.channel);
  j["params"] = channel_to_json(s.channel);
  j["witnesses"] = json::array();
  for (WitnessKind w : s.witnesses) j["witnesses"].push_back(to_string(w));
  j["grid"] = {{"t0", s.grid.t0}, {"t1", s.grid.t1}, {"steps", s.grid.steps}};
  j["input_state"] = {{"bloch", bloch_json(s.input.bloch)}, {"sweep_pure", s.input.sweep_pure}};
  j["epsilon"] = s.ccm_epsilon();
  j["ccm_baseline"] = s.ccm_baseline == CcmBaseline::identity ? "identity" : "literal";
  j["ccm_richardson"] = s.ccm_richardson;
  j["blp_pairs"] = s.blp_pairs;
  j["trace_pair"] = bloch_json(s.trace_pair);
  j["cp_policy"] = s.cp_policy == CpPolicy::raise ? "raise" : "allow";
  j["solver"] = {{"tol", s.solver.tol},
                 {"max_iter", s.solver.max_iter},
                 {"gap_tol", s.solver.gap_tol},
                 {"verify", s.solver.verify}};
  return j;
}

Scenario scenario_from_json(const json& j, Scenario base) {
  reject_unknown(j,
                 {"schema_version", "family", "params", "witnesses", "grid", "input_state", "epsilon", "ccm_baseline",
                  "ccm_richardson", "blp_pairs", "trace_pair", "cp_policy", "solver", "output_dir", "threads"},
                 "config");
  if (j.contains("schema_version")) {
    int version = 0;
    read(j, "schema_version", version, "config");
    if (version != kSchemaVersion)
      throw ConfigError("config: schema_version " + std::to_string(version) + " is not supported (expected " +
                        std::to_string(kSchemaVersion) + ")");
  }
  Scenario s = std::move(base);
  if (j.contains("family") || j.contains("params")) {
    std::string family = family_name(s.channel);
    read(j, "family", family, "config");
    const json params = j.contains("params") ? j.at("params") : json::object();
    // parameters of a different family never carry over
    if (family == family_name(s.channel)) {
      json merged = channel_to_json(s.channel);
      if (!params.is_object()) throw ConfigError("config: params must be an object");
      for (const auto& [k, v] : params.items()) merged[k] = v;
      s.channel = channel_from_json(family, merged);
    } else {
      s.channel = channel_from_json(family, params);
    }
  }
  if (j.contains("witnesses")) {
    if (!j.at("witnesses").is_array()) throw ConfigError("config: witnesses must be a list");
    s.witnesses.clear();
    for (const auto& w : j.at("witnesses")) {
      if (!w.is_string()) throw ConfigError("config: witness names must be strings");
      s.witnesses.push_back(parse_witness(w.get<std::string>()));
    }
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown(g, {"t0", "t1", "steps"}, "grid");
    read(g, "t0", s.grid.t0, "grid");
    read(g, "t1", s.grid.t1, "grid");
    read(g, "steps", s.grid.steps, "grid");
  }
  if (j.contains("input_state")) {
    const json& in = j.at("input_state");
    reject_unknown(in, {"bloch", "sweep_pure"}, "input_state");
    if (in.contains("bloch")) s.input.bloch = bloch_from(in.at("bloch"), "input_state.bloch");
    read(in, "sweep_pure", s.input.sweep_pure, "input_state");
  }
  if (j.contains("epsilon")) {
    if (j.at("epsilon").is_null())
      s.epsilon.reset();
    else {
      double e = 0.0;
      read(j, "epsilon", e, "config");
      s.epsilon = e;
    }
  }
  if (j.contains("ccm_baseline")) {
    std::string b;
    read(j, "ccm_baseline", b, "config");
    if (b == "identity")
      s.ccm_baseline = CcmBaseline::identity;
    else if (b == "literal")
      s.ccm_baseline = CcmBaseline::literal;
    else
      throw ConfigError("config: ccm_baseline must be 'identity' or 'literal'");
  }
  read(j, "ccm_richardson", s.ccm_richardson, "config");
  read(j, "blp_pairs", s.blp_pairs, "config");
  if (j.contains("trace_pair")) s.trace_pair = bloch_from(j.at("trace_pair"), "trace_pair");
  if (j.contains("cp_policy")) {
    std::string c;
    read(j, "cp_policy", c, "config");
    if (c == "raise")
      s.cp_policy = CpPolicy::raise;
    else if (c == "allow")
      s.cp_policy = CpPolicy::allow;
    else
      throw ConfigError("config: cp_policy must be 'raise' or 'allow'");
  }
  if (j.contains("solver")) {
    const json& so = j.at("solver");
    reject_unknown(so, {"tol", "max_iter", "gap_tol", "verify"}, "solver");
    read(so, "tol", s.solver.tol, "solver");
    read(so, "max_iter", s.solver.max_iter, "solver");
    read(so, "gap_tol", s.solver.gap_tol, "solver");
    read(so, "verify", s.solver.verify, "solver");
  }
  read(j, "output_dir", s.output_dir, "config");
  read(j, "threads", s.threads, "config");
  return s;
}

Scenario load_scenario(const std::filesystem::path& file, Scenario base) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + file.string() + " is not valid JSON: " + e.what());
  }
  return scenario_from_json(j, std::move(base));
}

std::filesystem::path resolve_output_dir(const Scenario& s) {
  if (!s.output_dir.empty()) return s.output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return "nmwit-output";
}

}  // namespace nmw
