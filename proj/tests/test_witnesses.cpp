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

#include <cmath>

#include "doctest.h"
#include "nmwit/families.hpp"
#include "nmwit/grid.hpp"
#include "nmwit/witnesses.hpp"
#include "oracles.hpp"

using namespace nmw;
using doctest::Approx;

namespace {

const CMat kHalf = CMat::identity(2) * cplx(0.5);

CMat ket0() { return density_from_bloch({0, 0, 1}).mat(); }
CMat ket1() { return density_from_bloch({0, 0, -1}).mat(); }

DynamicalMap constant_map(const AffineMap& f) {
  return DynamicalMap::from_affine("constant", [f](double t) { return t == 0.0 ? AffineMap::identity() : f; }, 0.0,
                                   10.0);
}

std::vector<ChannelParams> cp_families() {
  CounterexampleParams ce;
  ce.a_kappa = 0.48;
  return {DephasingParams{0.0}, GadParams{}, ExponentialPhaseCovParams{1.0, 0.7, 0.3, 0.5}, ce, EnmParams{}};
}

}  // namespace

TEST_CASE("trace distance examples") {
  oracle::Rng rng(31);
  const CMat r = rng.state();
  CHECK(trace_distance(r, r) == 0.0);
  CHECK(trace_distance(ket0(), ket1()) == Approx(1.0));
  const DynamicalMap gad = family_gad(GadParams{}, 3.0);
  for (double t : {0.0, 0.3, 1.4, 3.0}) {
    const AffineMap f = gad.at(t);
    const double d = trace_distance(f.apply(density_from_bloch({1, 0, 0}).mat()),
                                    f.apply(density_from_bloch({-1, 0, 0}).mat()));
    CHECK(std::abs(d - std::sqrt(1 - gad_nu(t))) <= 1e-12);
  }
}

TEST_CASE("trace distance is a metric on random states") {
  oracle::Rng rng(32);
  for (int i = 0; i < 300; ++i) {
    const CMat a = rng.state(), b = rng.state(), c = rng.state();
    CHECK(trace_distance(a, b) == Approx(trace_distance(b, a)).epsilon(1e-14));
    CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12);
    CHECK(trace_distance(a, b) <= 1.0 + 1e-12);
  }
}

TEST_CASE("qjsd examples") {
  oracle::Rng rng(33);
  const CMat r = rng.state();
  CHECK(qjsd_distance(r, r) <= 1e-7);
  CHECK(qjsd_distance(ket0(), ket1()) == Approx(1.0).epsilon(1e-12));
  // m = diag(3/4, 1/4): QJSD = S(m) - S(I/2)/2 - S(|0><0|)/2
  const double ref = std::sqrt(oracle::binary_entropy(0.75) - 0.5);
  CHECK(qjsd_distance(kHalf, ket0()) == Approx(ref).epsilon(1e-12));
}

TEST_CASE("qjsd matches the Bloch closed form for random states") {
  oracle::Rng rng(34);
  for (int i = 0; i < 100; ++i) {
    const BlochVec a = rng.bloch_in_ball(), b = rng.bloch_in_ball();
    const BlochVec m{(a.x1 + b.x1) / 2, (a.x2 + b.x2) / 2, (a.x3 + b.x3) / 2};
    const double js = oracle::entropy_of_bloch_norm(m.norm()) -
                      0.5 * (oracle::entropy_of_bloch_norm(a.norm()) + oracle::entropy_of_bloch_norm(b.norm()));
    CHECK(qjsd_distance(density_from_bloch(a).mat(), density_from_bloch(b).mat()) ==
          Approx(std::sqrt(std::max(js, 0.0))).epsilon(1e-9));
  }
}

TEST_CASE("qjsd distance is symmetric and satisfies the triangle inequality") {
  oracle::Rng rng(35);
  for (int i = 0; i < 1000; ++i) {
    const CMat a = rng.state(), b = rng.state(), c = rng.state();
    const double ab = qjsd_distance(a, b), ba = qjsd_distance(b, a);
    CHECK(std::abs(ab - ba) <= 1e-9);
    CHECK(qjsd_distance(a, c) <= ab + qjsd_distance(b, c) + 1e-9);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0 + 1e-9);
  }
}

TEST_CASE("entropies") {
  CHECK(von_neumann_entropy(HermMat(kHalf)) == Approx(1.0));
  CHECK(std::abs(von_neumann_entropy(HermMat(ket0()))) <= 1e-14);
  CHECK(std::abs(relative_entropy(HermMat(kHalf), HermMat(kHalf))) <= 1e-12);
  // S(|0><0| || I/2) = 1 bit
  CHECK(relative_entropy(HermMat(ket0()), HermMat(kHalf)) == Approx(1.0));
}

TEST_CASE("BLP examples") {
  const auto times = TimeGrid{0.0, 3.0, 300}.points();
  const DynamicalMap semi = family_dephasing(DephasingParams{0.0}, 3.1);
  CHECK(blp_measure(semi, DistanceKind::trace, times).value == 0.0);
  CHECK(blp_measure(semi, DistanceKind::qjsd, times).value == 0.0);
  const DynamicalMap gad = family_gad(GadParams{}, 3.1);
  const MeasureResult td = blp_measure(gad, DistanceKind::trace, times);
  CHECK(td.value <= 1e-12);
  CHECK(td.kind == MeasureKind::blp_td);
  const MeasureResult qj = blp_measure(gad, DistanceKind::qjsd, times);
  CHECK(qj.value > 1e-3);
  CHECK(qj.kind == MeasureKind::blp_qjsd);
  CHECK(qj.points == times.size());
}

TEST_CASE("BLP with TD vanishes on CP-divisible instances") {
  const auto times = TimeGrid{0.0, 3.0, 200}.points();
  for (const ChannelParams& p : {ChannelParams{DephasingParams{0.0}}, ChannelParams{ExponentialPhaseCovParams{1.0, 0.7, 0.3, 0.5}}}) {
    const DynamicalMap map = make_channel(p, 3.1);
    CHECK(blp_measure(map, DistanceKind::trace, times).value <= 1e-12);
  }
}

TEST_CASE("PDM examples") {
  const PseudoDensityMatrix id = pdm(kHalf, constant_map(AffineMap::identity()), 1.0);
  CHECK((id.r.mat() - oracle::swap4() * cplx(0.5)).max_abs() <= 1e-15);
  CHECK(trace_norm(id.r.mat()) == Approx(2.0));
  const PseudoDensityMatrix dep = pdm(kHalf, constant_map(oracle::pauli_channel(0, 0, 0)), 1.0);
  CHECK((dep.r.mat() - CMat::identity(4) * cplx(0.25)).max_abs() <= 1e-15);
  CHECK(trace_norm(dep.r.mat()) == Approx(1.0));
  oracle::Rng rng(36);
  for (int i = 0; i < 50; ++i) {
    const PseudoDensityMatrix r = pdm(rng.state(), constant_map(oracle::random_channel(rng)), 1.0);
    CHECK(r.r.trace() == Approx(1.0).epsilon(1e-12));
    CHECK(trace_norm(r.r.mat()) >= 1.0 - 1e-12);
  }
}

TEST_CASE("PDM at I/2 is the Choi matrix transposed on the first factor, over two") {
  for (const auto& p : cp_families()) {
    CAPTURE(family_name(p));
    const DynamicalMap map = make_channel(p, 3.0);
    for (double t : TimeGrid{0.0, 3.0, 31}.points()) {
      const PseudoDensityMatrix r = pdm(kHalf, map, t);
      const CMat ref = oracle::pt_first(map.choi(t).mat()) * cplx(0.5);
      CHECK((r.r.mat() - ref).max_abs() <= 1e-9);
      CHECK(std::abs(r.r.trace() - 1.0) <= 1e-9);
      CHECK((r.r.mat() - r.r.mat().adjoint()).max_abs() == 0.0);
    }
  }
}

TEST_CASE("LCM examples") {
  CHECK(lcm(kHalf, constant_map(AffineMap::identity()), 1.0) == Approx(1.0).epsilon(1e-14));
  const auto times = TimeGrid{0.0, 3.0, 300}.points();
  const DynamicalMap semi = family_dephasing(DephasingParams{0.0}, 3.1);
  const WitnessTrace f = lcm_trace(kHalf, semi, times);
  for (double v : f.values) CHECK(v >= -1e-14);
  CHECK(lcm_measure(f).value == 0.0);
  CHECK(lcm_measure(kHalf, semi, times).value == 0.0);
}

TEST_CASE("LCM measure integrates the positive slope") {
  WitnessTrace tr;
  tr.kind = WitnessKind::lcm;
  tr.times = {0.0, 1.0, 2.0, 3.0, 4.0};
  tr.values = {0.0, 1.0, 0.0, 0.0, 2.0};
  // central differences {1, 0, -0.5, 1, 2}, clipped and integrated
  CHECK(lcm_measure(tr).value == Approx(0.5 + 0.0 + 0.5 + 1.5));
}

TEST_CASE("CCM on pure dephasing is minus twice the rate") {
  const DynamicalMap semi = family_dephasing(DephasingParams{0.0}, 3.1);
  for (double t : {0.0, 0.5, 2.0}) CHECK(ccm_mu(semi, t, CcmOptions{1e-5}, kHalf) == Approx(-1.0).epsilon(1e-4));
  const DynamicalMap d = family_dephasing(DephasingParams{5.0}, 3.1).with_cp_policy(CpPolicy::allow);
  for (double t : {0.05, 0.15, 0.3, 0.8, 2.0, 2.9}) {
    const double mu = ccm_mu(d, t, CcmOptions{1e-6}, kHalf);
    CHECK(mu == Approx(-2.0 * oracle::dephasing_gamma(5.0, t)).epsilon(1e-3));
  }
}

TEST_CASE("CCM vanishes on a CP-divisible semigroup") {
  const auto times = TimeGrid{0.0, 3.0, 300}.points();
  const DynamicalMap semi = family_dephasing(DephasingParams{0.0}, 3.1);
  const WitnessTrace mu = ccm_trace(semi, times, CcmOptions{3e-4}, kHalf);
  for (double v : mu.values) CHECK(v <= 0.0);
  const CcmMeasure m = ccm_measure(mu);
  CHECK(m.normalized.value == 0.0);
  CHECK(m.raw.value == 0.0);
  CHECK(m.normalized.kind == MeasureKind::n_ccm);
}

TEST_CASE("CCM at epsilon and epsilon/2 agree on smooth regions") {
  const DynamicalMap gad = family_gad(GadParams{}, 3.1);
  const DynamicalMap enm = family_enm(EnmParams{}, 3.1);
  for (const DynamicalMap* map : {&gad, &enm})
    for (double t : {0.4, 1.3, 2.6}) {
      const double a = ccm_mu(*map, t, CcmOptions{3e-4}, kHalf);
      const double b = ccm_mu(*map, t, CcmOptions{1.5e-4}, kHalf);
      CHECK(std::abs(a - b) <= 0.05 * std::abs(b) + 1e-9);
    }
}

TEST_CASE("CCM baselines and Richardson extrapolation") {
  const DynamicalMap semi = family_dephasing(DephasingParams{0.0}, 3.1);
  const double eps = 1e-3;
  const double mu = ccm_mu(semi, 1.0, CcmOptions{eps}, kHalf);
  const double lit = ccm_mu(semi, 1.0, CcmOptions{eps, CcmBaseline::literal}, kHalf);
  // the identity baseline at I/2 is 2, the literal one is 1
  CHECK(lit - mu == Approx(1.0 / eps).epsilon(1e-9));
  const double rich = ccm_mu(semi, 1.0, CcmOptions{eps, CcmBaseline::identity, true}, kHalf);
  const double half = ccm_mu(semi, 1.0, CcmOptions{eps / 2}, kHalf);
  CHECK(rich == Approx(2.0 * half - mu).epsilon(1e-12));
  CHECK(std::abs(rich + 1.0) < std::abs(mu + 1.0));
}

TEST_CASE("CCM measure uses the 0/0 = 0 convention and the tanh normalization") {
  WitnessTrace tr;
  tr.kind = WitnessKind::ccm_mu;
  tr.times = {0.0, 1.0, 2.0};
  tr.values = {-1.0, -2.0, -0.5};
  CHECK(ccm_measure(tr).normalized.value == 0.0);
  tr.values = {1.0, 1.0, 1.0};
  const CcmMeasure m = ccm_measure(tr);
  CHECK(m.normalized.value == Approx(std::tanh(1.0)));
  CHECK(m.raw.value == Approx(2.0));
  CHECK(m.normalized.value <= 1.0);
}

TEST_CASE("CCM flags the pseudo-inverse near a vanishing coherence") {
  const DynamicalMap d = family_dephasing(DephasingParams{5.0}, 3.1).with_cp_policy(CpPolicy::allow);
  const std::vector<double> times = {std::asinh(0.2)};
  const WitnessTrace mu = ccm_trace(d, times, CcmOptions{3e-4}, kHalf);
  CHECK_FALSE(mu.warnings.empty());
}

TEST_CASE("WitnessTrace validation") {
  WitnessTrace tr;
  tr.times = {0.0, 1.0, 1.0};
  tr.values = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(tr.validate(), ValidationError);
  tr.times = {0.0, 1.0};
  CHECK_THROWS_AS(tr.validate(), ValidationError);
}
