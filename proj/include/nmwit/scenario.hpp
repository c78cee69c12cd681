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
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nmwit/config.hpp"
#include "nmwit/witnesses.hpp"

namespace nmw {

inline constexpr double kDetectionThreshold = 1e-3;

struct WitnessRun {
  WitnessKind kind = WitnessKind::td;
  WitnessTrace trace;
  std::vector<MeasureResult> measures;
};

struct RunResult {
  Scenario scenario;
  std::vector<double> times;
  std::vector<WitnessRun> runs;

  const MeasureResult* find(MeasureKind k) const;
};

/// Family map with enough headroom past t1 for the finite-difference steps.
DynamicalMap build_channel(const Scenario& s);

WitnessRun run_witness(const Scenario& s, const DynamicalMap& map, WitnessKind kind, std::span<const double> times,
                       Execution exec = Execution::parallel);
RunResult run_scenario(const Scenario& s, Execution exec = Execution::parallel);

/// One CSV per witness named <prefix>_<witness>.csv. Returns the paths written.
std::vector<std::filesystem::path> write_traces(const RunResult& r, const std::string& command,
                                                const std::filesystem::path& dir, const std::string& prefix);
nlohmann::json summary_json(const RunResult& r, const std::string& command);

// ---------------------------------------------------------------------------
// Channel validation

struct ChannelPoint {
  double t = 0.0;
  double min_choi_eig = 0.0;
  double tp_defect = 0.0;
  /// Step map V(t + epsilon, t).
  double step_min_choi_eig = 0.0;
  bool step_p_divisible = true;
};

struct ChannelValidation {
  std::vector<ChannelPoint> points;
  bool cptp = true;
  bool p_divisible = true;
  double min_choi_eig = 0.0;
  double min_step_choi_eig = 0.0;
};

ChannelValidation validate_channel(const Scenario& s, Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------
// Figure reproduction

enum class Figure { fig1, fig2, fig3, fig4 };

Figure parse_figure(const std::string& name);
std::string to_string(Figure f);

/// Preset scenario. fig3 leaves a_kappa unset; validate() rejects it until supplied.
Scenario figure_preset(Figure f);

struct VerdictRow {
  std::string witness;
  MeasureKind measure = MeasureKind::blp_td;
  double value = 0.0;
  bool detected = false;
  std::optional<bool> expected;
  bool matches = true;
};

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string detail;
};

struct Reproduction {
  Figure figure = Figure::fig1;
  RunResult run;
  std::vector<VerdictRow> verdict;
  std::vector<Check> checks;
  /// fig1 only: gamma_z on the grid.
  std::vector<double> gamma_z;
  std::optional<ChannelValidation> validation;
};

Reproduction reproduce(Figure f, const Scenario& s, Execution exec = Execution::parallel);
std::vector<std::filesystem::path> write_reproduction(const Reproduction& r, const std::filesystem::path& dir);
std::string verdict_table(const Reproduction& r);

}  // namespace nmw
