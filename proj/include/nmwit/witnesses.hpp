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

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nmwit/channels.hpp"
#include "nmwit/divisibility.hpp"
#include "nmwit/grid.hpp"

namespace nmw {

enum class WitnessKind { td, qjsd, lcm, ccm_mu, tsw };
enum class MeasureKind { blp_td, blp_qjsd, n_lcm, n_ccm, n_ccm_raw, n_tsw_raw, n_tsw_normalized };

std::string to_string(WitnessKind k);
std::string to_string(MeasureKind k);

/// Sampled scalar witness. times strictly increasing, same length as values.
struct WitnessTrace {
  std::vector<double> times;
  std::vector<double> values;
  WitnessKind kind = WitnessKind::td;
  std::vector<std::string> warnings;

  void validate() const;
};

struct MeasureResult {
  double value = 0.0;
  MeasureKind kind = MeasureKind::blp_td;
  double t0 = 0.0;
  double t1 = 0.0;
  std::size_t points = 0;
  std::vector<std::pair<std::string, double>> metadata;
};

double trace_distance(const CMat& rho1, const CMat& rho2);
/// Base-2 von Neumann entropy with 0 log 0 = 0.
double von_neumann_entropy(const HermMat& rho);
/// Umegaki relative entropy Tr(X log X - X log Y), base 2, on supports.
double relative_entropy(const HermMat& x, const HermMat& y);
/// sqrt of the quantum Jensen-Shannon divergence, in [0, 1].
double qjsd_distance(const CMat& rho1, const CMat& rho2);

enum class DistanceKind { trace, qjsd };

/// D(Lambda(t)[rho_+], Lambda(t)[rho_-]) for the antipodal pure pair along dir.
WitnessTrace distance_trace(const DynamicalMap& map, DistanceKind kind, const BlochVec& direction,
                            std::span<const double> times, Execution exec = Execution::parallel);

/// Integral of the positive slope of D(t), maximized over antipodal pure
/// pairs along n_pairs Fibonacci directions.
MeasureResult blp_measure(const DynamicalMap& map, DistanceKind kind, std::span<const double> times,
                          std::size_t n_pairs = 64, Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------
// Pseudo-density matrices

struct PdmSource {
  enum class Kind { full_map, intermediate };
  Kind kind = Kind::full_map;
  double s = 0.0;
  double t = 0.0;
};

struct PseudoDensityMatrix {
  HermMat r;
  HermMat input_state;
  PdmSource source;
};

/// {rho (x) I/2, S} with S the two-qubit swap.
CMat pdm_seed(const CMat& rho);
PseudoDensityMatrix pdm(const CMat& rho, const DynamicalMap& map, double t);
PseudoDensityMatrix pdm(const CMat& rho, const IntermediateMap& v);

/// F = log2 ||R(t)||_1.
double lcm(const CMat& rho, const DynamicalMap& map, double t);
WitnessTrace lcm_trace(const CMat& rho, const DynamicalMap& map, std::span<const double> times,
                       Execution exec = Execution::parallel);
MeasureResult lcm_measure(const CMat& rho, const DynamicalMap& map, std::span<const double> times,
                          Execution exec = Execution::parallel);
MeasureResult lcm_measure(const WitnessTrace& trace);

enum class CcmBaseline {
  identity,  // subtract ||{rho (x) I/2, S}||_1, the identity-map value
  literal,   // subtract 1
};

struct CcmOptions {
  double epsilon = 3e-4;
  CcmBaseline baseline = CcmBaseline::identity;
  bool richardson = false;
};

struct CcmPoint {
  double mu = 0.0;
  bool pseudo_inverse_used = false;
};

CcmPoint ccm_point(const DynamicalMap& map, double t, const CcmOptions& opts, const CMat& rho);
double ccm_mu(const DynamicalMap& map, double t, const CcmOptions& opts, const CMat& rho);
WitnessTrace ccm_trace(const DynamicalMap& map, std::span<const double> times, const CcmOptions& opts,
                       const CMat& rho, Execution exec = Execution::parallel);

struct CcmMeasure {
  MeasureResult normalized;  // int tanh(mu+) / int chi, 0/0 = 0
  MeasureResult raw;         // int max(mu, 0)
};

CcmMeasure ccm_measure(const WitnessTrace& mu_trace);

const CMat& maximally_mixed();

}  // namespace nmw
