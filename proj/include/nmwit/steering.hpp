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

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "nmwit/channels.hpp"
#include "nmwit/grid.hpp"
#include "nmwit/sdp.hpp"
#include "nmwit/witnesses.hpp"

namespace nmw {

/// Dichotomic projective measurements; settings[x][a] is the projector Pi_{a|x}.
class MeasurementSet {
 public:
  explicit MeasurementSet(std::vector<std::array<HermMat, 2>> settings);
  /// sigma_x, sigma_y, sigma_z eigenbases, outcome 0 for the +1 eigenvalue.
  static MeasurementSet pauli();

  std::size_t size() const { return settings_.size(); }
  const HermMat& projector(std::size_t a, std::size_t x) const { return settings_.at(x).at(a); }

 private:
  std::vector<std::array<HermMat, 2>> settings_;
};

/// Subnormalized conditional states sigma_{a|x}(t); traces carry p(a|x).
struct Assemblage {
  std::vector<std::array<HermMat, 2>> members;  // [x][a]
  double t = 0.0;

  std::size_t settings() const { return members.size(); }
  const HermMat& member(std::size_t a, std::size_t x) const { return members.at(x).at(a); }
  /// sum_a sigma_{a|x}
  CMat marginal(std::size_t x) const;
  /// Members PSD and marginals equal across settings, both within tol.
  void validate(double tol = 1e-9) const;

  nlohmann::json to_json() const;
  static Assemblage from_json(const nlohmann::json& j);
};

/// q_lambda(a|x) = 1 iff a equals bit x of lambda, for 2^n_settings strategies.
class DeterministicStrategies {
 public:
  explicit DeterministicStrategies(std::size_t n_settings);

  std::size_t size() const { return std::size_t{1} << n_settings_; }
  std::size_t settings() const { return n_settings_; }
  int q(std::size_t lambda, std::size_t a, std::size_t x) const {
    return static_cast<int>(((lambda >> x) & 1U) == a);
  }

 private:
  std::size_t n_settings_;
};

Assemblage make_assemblage(const CMat& rho, const MeasurementSet& m, const AffineMap& channel, double t);
Assemblage make_assemblage(const CMat& rho, const MeasurementSet& m, const DynamicalMap& map, double t);

/// max sum_lambda Tr Y_lambda s.t. sigma_{a|x} - sum_lambda q Y_lambda >= 0, Y >= 0.
SdpProblem tsw_problem(const Assemblage& a, const DeterministicStrategies& s);

struct TswOptions {
  AdmmOptions admm{};
  double gap_tol = 1e-7;
  bool verify = false;
  double verify_tol = 1e-5;
};

struct TswResult {
  double w = 0.0;  // steerable weight 1 - w'
  SdpSolution solution;
  std::optional<double> oracle_w;
};

TswResult tsw(const Assemblage& a, const DeterministicStrategies& s, const TswOptions& opts = {});

WitnessTrace tsw_trace(const CMat& rho, const MeasurementSet& m, const DynamicalMap& map,
                       std::span<const double> times, const TswOptions& opts = {},
                       Execution exec = Execution::parallel);

struct TswMeasure {
  MeasureResult raw;
  MeasureResult normalized;  // N / (1 + N)
};

/// N = sum |W_{i+1} - W_i| + W_end - W_0, so any non-increasing trace gives 0.
TswMeasure tsw_measure(const WitnessTrace& w_trace);

}  // namespace nmw
