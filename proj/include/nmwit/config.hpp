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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nmwit/channels.hpp"
#include "nmwit/families.hpp"
#include "nmwit/grid.hpp"
#include "nmwit/witnesses.hpp"

namespace nmw {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kOutputDirEnv = "NMWIT_OUTPUT_DIR";

WitnessKind parse_witness(const std::string& name);

struct InputState {
  /// Bloch vector of the input state; the origin is I/2.
  BlochVec bloch{};
  /// LCM only: additionally maximize over this many pure inputs (0 = off).
  std::size_t sweep_pure = 0;

  CMat state() const { return density_from_bloch(bloch).mat(); }
};

struct SolverConfig {
  double tol = 1e-8;
  int max_iter = 50000;
  double gap_tol = 1e-7;
  bool verify = false;
};

struct Scenario {
  ChannelParams channel = DephasingParams{};
  std::vector<WitnessKind> witnesses;
  TimeGrid grid{0.0, 3.0, 2000};
  InputState input;
  /// Finite-difference step for CCM; defaults to 1e-4 (t1 - t0).
  std::optional<double> epsilon;
  CcmBaseline ccm_baseline = CcmBaseline::identity;
  bool ccm_richardson = false;
  std::size_t blp_pairs = 64;
  /// Antipodal pair whose distance is written as the td/qjsd trace.
  BlochVec trace_pair{1.0, 0.0, 0.0};
  CpPolicy cp_policy = CpPolicy::raise;
  SolverConfig solver;
  std::string output_dir;
  int threads = 0;

  double ccm_epsilon() const { return epsilon.value_or(1e-4 * (grid.t1 - grid.t0)); }
  CcmOptions ccm_options() const { return {ccm_epsilon(), ccm_baseline, ccm_richardson}; }
  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

nlohmann::json channel_to_json(const ChannelParams& p);
ChannelParams channel_from_json(const std::string& family, const nlohmann::json& params);
/// Default parameters for a family name.
ChannelParams default_channel(const std::string& family);
/// Overwrite one parameter, value given as text (CLI --param key=value).
void set_channel_param(ChannelParams& p, const std::string& key, const std::string& value);

nlohmann::json to_json(const Scenario& s);
/// Keys present in j override base; unknown keys are rejected.
Scenario scenario_from_json(const nlohmann::json& j, Scenario base = {});
Scenario load_scenario(const std::filesystem::path& file, Scenario base = {});

/// Output directory from the scenario, then the environment, then the default.
std::filesystem::path resolve_output_dir(const Scenario& s);

}  // namespace nmw
