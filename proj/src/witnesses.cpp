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

#include "nmwit/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nmw {

std::string to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::td: return "td";
    case WitnessKind::qjsd: return "qjsd";
    case WitnessKind::lcm: return "lcm";
    case WitnessKind::ccm_mu: return "ccm";
    case WitnessKind::tsw: return "tsw";
  }
  return "?";
}

std::string to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::blp_td: return "BLP_TD";
    case MeasureKind::blp_qjsd: return "BLP_QJSD";
    case MeasureKind::n_lcm: return "N_LCM";
    case MeasureKind::n_ccm: return "N_CCM";
    case MeasureKind::n_ccm_raw: return "N_CCM_raw";
    case MeasureKind::n_tsw_raw: return "N_TSW_raw";
    case MeasureKind::n_tsw_normalized: return "N_TSW_normalized";
  }
  return "?";
}

void WitnessTrace::validate() const {
  if (times.size() != values.size()) throw ValidationError("WitnessTrace: times/values length mismatch");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ValidationError("WitnessTrace: times must be strictly increasing");
}

const CMat& maximally_mixed() {
  static const CMat half_identity = CMat::identity(2) * cplx(0.5);
  return half_identity;
}

double trace_distance(const CMat& rho1, const CMat& rho2) { return 0.5 * trace_norm(rho1 - rho2); }

double von_neumann_entropy(const HermMat& rho) {
  double s = 0.0;
  for (double lam : herm_eig(rho).values)
    if (lam > kLogFloor) s -= lam * std::log2(lam);
  return s;
}

double relative_entropy(const HermMat& x, const HermMat& y) {
  const CMat log_x = matrix_log_psd(x).mat();
  const CMat log_y = matrix_log_psd(y).mat();
  return (x.mat() * (log_x - log_y)).trace().real();
}

double qjsd_distance(const CMat& rho1, const CMat& rho2) {
  const HermMat a(rho1, 1e-9);
  const HermMat b(rho2, 1e-9);
  const HermMat m((rho1 + rho2) * cplx(0.5), 1e-9);
  const double js = 0.5 * (relative_entropy(a, m) + relative_entropy(b, m));
  return std::sqrt(std::clamp(js, 0.0, 1.0));
}

namespace {

double distance(DistanceKind kind, const CMat& a, const CMat& b) {
  return kind == DistanceKind::trace ? trace_distance(a, b) : qjsd_distance(a, b);
}

BlochVec negate(const BlochVec& x) { return {-x.x1, -x.x2, -x.x3}; }

std::vector<AffineMap> maps_on_grid(const DynamicalMap& map, std::span<const double> times, Execution exec) {
  return map_grid<AffineMap>(times, [&](std::size_t, double t) { return map.at(t); }, exec);
}

MeasureResult make_result(MeasureKind kind, std::span<const double> times, double value) {
  MeasureResult r;
  r.kind = kind;
  r.value = value;
  r.points = times.size();
  if (!times.empty()) {
    r.t0 = times.front();
    r.t1 = times.back();
  }
  return r;
}

}  // namespace

WitnessTrace distance_trace(const DynamicalMap& map, DistanceKind kind, const BlochVec& direction,
                            std::span<const double> times, Execution exec) {
  const CMat plus = density_from_bloch(direction).mat();
  const CMat minus = density_from_bloch(negate(direction)).mat();
  WitnessTrace trace;
  trace.kind = kind == DistanceKind::trace ? WitnessKind::td : WitnessKind::qjsd;
  trace.times.assign(times.begin(), times.end());
  trace.values = map_grid<double>(
      times,
      [&](std::size_t, double t) {
        const AffineMap f = map.at(t);
        return distance(kind, f.apply(plus), f.apply(minus));
      },
      exec);
  return trace;
}

MeasureResult blp_measure(const DynamicalMap& map, DistanceKind kind, std::span<const double> times,
                          std::size_t n_pairs, Execution exec) {
  const auto maps = maps_on_grid(map, times, exec);
  const auto dirs = fibonacci_sphere(n_pairs);
  std::vector<double> times_vec(times.begin(), times.end());
  // parallel over directions, each direction walks the whole grid
  std::vector<double> dir_index(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) dir_index[i] = static_cast<double>(i);
  const auto per_dir = map_grid<double>(
      dir_index,
      [&](std::size_t i, double) {
        const CMat plus = density_from_bloch(dirs[i]).mat();
        const CMat minus = density_from_bloch(negate(dirs[i])).mat();
        std::vector<double> d(maps.size());
        for (std::size_t k = 0; k < maps.size(); ++k) d[k] = distance(kind, maps[k].apply(plus), maps[k].apply(minus));
        return positive_slope_integral(times_vec, d);
      },
      exec);

  std::size_t best = 0;
  for (std::size_t i = 1; i < per_dir.size(); ++i)
    if (per_dir[i] > per_dir[best]) best = i;
  MeasureResult r = make_result(kind == DistanceKind::trace ? MeasureKind::blp_td : MeasureKind::blp_qjsd, times,
                                per_dir.empty() ? 0.0 : per_dir[best]);
  r.metadata = {{"pairs_probed", static_cast<double>(dirs.size())},
                {"best_x1", dirs.empty() ? 0.0 : dirs[best].x1},
                {"best_x2", dirs.empty() ? 0.0 : dirs[best].x2},
                {"best_x3", dirs.empty() ? 0.0 : dirs[best].x3}};
  return r;
}

CMat pdm_seed(const CMat& rho) {
  const CMat a = kron(rho, maximally_mixed());
  const CMat& s = swap_operator();
  return a * s + s * a;
}

PseudoDensityMatrix pdm(const CMat& rho, const DynamicalMap& map, double t) {
  return {HermMat(apply_to_second(map.at(t), pdm_seed(rho)), 1e-9), HermMat(rho, 1e-9),
          {PdmSource::Kind::full_map, 0.0, t}};
}

PseudoDensityMatrix pdm(const CMat& rho, const IntermediateMap& v) {
  return {HermMat(apply_to_second(v.affine, pdm_seed(rho)), 1e-9), HermMat(rho, 1e-9),
          {PdmSource::Kind::intermediate, v.from_t, v.to_t}};
}

double lcm(const CMat& rho, const DynamicalMap& map, double t) {
  return std::log2(trace_norm(pdm(rho, map, t).r.mat()));
}

WitnessTrace lcm_trace(const CMat& rho, const DynamicalMap& map, std::span<const double> times, Execution exec) {
  const CMat seed = pdm_seed(rho);
  WitnessTrace trace;
  trace.kind = WitnessKind::lcm;
  trace.times.assign(times.begin(), times.end());
  trace.values = map_grid<double>(
      times, [&](std::size_t, double t) { return std::log2(trace_norm(apply_to_second(map.at(t), seed))); }, exec);
  return trace;
}

MeasureResult lcm_measure(const WitnessTrace& trace) {
  trace.validate();
  return make_result(MeasureKind::n_lcm, trace.times, positive_slope_integral(trace.times, trace.values));
}

MeasureResult lcm_measure(const CMat& rho, const DynamicalMap& map, std::span<const double> times, Execution exec) {
  return lcm_measure(lcm_trace(rho, map, times, exec));
}

namespace {

CcmPoint mu_at(const DynamicalMap& map, const AffineMap& f_t, double t, double eps, double baseline, const CMat& seed) {
  const IntermediateMap v = intermediate_from(f_t, map.at(t + eps), t, t + eps);
  return {(trace_norm(apply_to_second(v.affine, seed)) - baseline) / eps, v.pseudo_inverse_used};
}

}  // namespace

CcmPoint ccm_point(const DynamicalMap& map, double t, const CcmOptions& opts, const CMat& rho) {
  if (!(opts.epsilon > 0.0)) throw DomainError("ccm: epsilon must be positive");
  const CMat seed = pdm_seed(rho);
  const double baseline = opts.baseline == CcmBaseline::identity ? trace_norm(seed) : 1.0;
  const AffineMap f_t = map.at(t);
  const CcmPoint coarse = mu_at(map, f_t, t, opts.epsilon, baseline, seed);
  if (!opts.richardson) return coarse;
  const CcmPoint fine = mu_at(map, f_t, t, 0.5 * opts.epsilon, baseline, seed);
  return {2.0 * fine.mu - coarse.mu, coarse.pseudo_inverse_used || fine.pseudo_inverse_used};
}

double ccm_mu(const DynamicalMap& map, double t, const CcmOptions& opts, const CMat& rho) {
  return ccm_point(map, t, opts, rho).mu;
}

WitnessTrace ccm_trace(const DynamicalMap& map, std::span<const double> times, const CcmOptions& opts,
                       const CMat& rho, Execution exec) {
  const auto points = map_grid<CcmPoint>(times, [&](std::size_t, double t) { return ccm_point(map, t, opts, rho); }, exec);
  WitnessTrace trace;
  trace.kind = WitnessKind::ccm_mu;
  trace.times.assign(times.begin(), times.end());
  trace.values.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    trace.values.push_back(points[i].mu);
    if (points[i].pseudo_inverse_used) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "pseudo-inverse used at t=" << times[i];
      trace.warnings.push_back(msg.str());
    }
  }
  return trace;
}

CcmMeasure ccm_measure(const WitnessTrace& mu_trace) {
  mu_trace.validate();
  const auto& t = mu_trace.times;
  std::vector<double> clipped(t.size()), squashed(t.size()), support(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double mu = mu_trace.values[i];
    clipped[i] = std::max(mu, 0.0);
    squashed[i] = mu > 0.0 ? std::tanh(mu) : 0.0;
    support[i] = squashed[i] > 0.0 ? 1.0 : 0.0;
  }
  const double num = trapezoid(t, squashed);
  const double den = trapezoid(t, support);
  CcmMeasure m;
  m.normalized = make_result(MeasureKind::n_ccm, t, den > 0.0 ? num / den : 0.0);
  m.raw = make_result(MeasureKind::n_ccm_raw, t, trapezoid(t, clipped));
  m.normalized.metadata = {{"support_length", den}};
  return m;
}

}  // namespace nmw
