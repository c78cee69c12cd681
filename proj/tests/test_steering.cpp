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
#include <string>

#include "doctest.h"
#include "nmwit/families.hpp"
#include "nmwit/steering.hpp"
#include "oracles.hpp"

using namespace nmw;
using doctest::Approx;

namespace {

const CMat kHalf = CMat::identity(2) * cplx(0.5);

std::vector<ChannelParams> cp_families() {
  CounterexampleParams ce;
  ce.a_kappa = 0.48;
  return {DephasingParams{0.0}, GadParams{}, ExponentialPhaseCovParams{1.0, 0.7, 0.3, 0.5}, ce, EnmParams{}};
}

}  // namespace

TEST_CASE("measurement sets are validated") {
  const CMat id = CMat::identity(2);
  const HermMat p0((id + pauli(3)) * cplx(0.5));
  CHECK_THROWS_AS(MeasurementSet({{p0, p0}}), ValidationError);
  const HermMat half(id * cplx(0.5));
  CHECK_THROWS_AS(MeasurementSet({{half, half}}), ValidationError);
  CHECK(MeasurementSet::pauli().size() == 3);
}

TEST_CASE("deterministic strategies are normalized") {
  const DeterministicStrategies s(3);
  CHECK(s.size() == 8);
  for (std::size_t l = 0; l < s.size(); ++l)
    for (std::size_t x = 0; x < 3; ++x) CHECK(s.q(l, 0, x) + s.q(l, 1, x) == 1);
}

TEST_CASE("make_assemblage examples") {
  const MeasurementSet m = MeasurementSet::pauli();
  const Assemblage id = make_assemblage(kHalf, m, AffineMap::identity(), 0.0);
  REQUIRE(id.settings() == 3);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t a = 0; a < 2; ++a)
      CHECK((id.member(a, x).mat() - m.projector(a, x).mat() * cplx(0.5)).max_abs() <= 1e-15);

  const Assemblage dep = make_assemblage(kHalf, m, oracle::pauli_channel(0, 0, 0), 1.0);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t a = 0; a < 2; ++a) CHECK((dep.member(a, x).mat() - kHalf * cplx(0.5)).max_abs() <= 1e-15);

  const DynamicalMap gad = family_gad(GadParams{}, 3.0);
  for (double t : {0.4, 1.9}) {
    const Assemblage g = make_assemblage(kHalf, m, gad, t);
    const double tau3 = oracle::gad(5.0, t).kappa[2];
    const CMat ref = (CMat::identity(2) + pauli(3) * cplx(tau3)) * cplx(0.5);
    for (std::size_t x = 0; x < 3; ++x) CHECK((g.marginal(x) - ref).max_abs() <= 1e-12);
  }
}

TEST_CASE("zero-probability outcomes give zero members") {
  const Assemblage a = make_assemblage(density_from_bloch({0, 0, 1}).mat(), MeasurementSet::pauli(),
                                       AffineMap::identity(), 0.0);
  CHECK(a.member(1, 2).mat().max_abs() <= 1e-15);
}

TEST_CASE("no signaling in time") {
  oracle::Rng rng(51);
  const MeasurementSet m = MeasurementSet::pauli();
  for (const auto& p : cp_families()) {
    const DynamicalMap map = make_channel(p, 3.0);
    for (int i = 0; i < 10; ++i) {
      const double t = rng.uniform(0.0, 3.0);
      const Assemblage a = make_assemblage(kHalf, m, map, t);
      const CMat out = map.at(t).apply(kHalf);
      for (std::size_t x = 0; x < a.settings(); ++x) CHECK(trace_norm(a.marginal(x) - out) <= 1e-8);
      CHECK_NOTHROW(a.validate());
    }
  }
}

TEST_CASE("marginals of other inputs are the measured, dephased state") {
  oracle::Rng rng(56);
  const MeasurementSet m = MeasurementSet::pauli();
  const DynamicalMap gad = family_gad(GadParams{}, 3.0);
  for (int i = 0; i < 10; ++i) {
    const CMat rho = rng.state();
    const double t = rng.uniform(0.0, 3.0);
    const Assemblage a = make_assemblage(rho, m, gad, t);
    for (std::size_t x = 0; x < 3; ++x) {
      CMat dephased(2, 2);
      for (std::size_t o = 0; o < 2; ++o) dephased += m.projector(o, x).mat() * rho * m.projector(o, x).mat();
      CHECK(trace_norm(a.marginal(x) - gad.at(t).apply(dephased)) <= 1e-12);
    }
  }
}

TEST_CASE("assemblage validation and JSON round trip") {
  oracle::Rng rng(52);
  const Assemblage a = oracle::random_assemblage(rng);
  const Assemblage b = Assemblage::from_json(a.to_json());
  REQUIRE(b.settings() == a.settings());
  for (std::size_t x = 0; x < a.settings(); ++x)
    for (std::size_t o = 0; o < 2; ++o) CHECK(a.member(o, x).mat() == b.member(o, x).mat());
  Assemblage bad = a;
  bad.members[0][0] = HermMat(bad.members[0][0].mat() + CMat::identity(2) * cplx(0.01));
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("unsteerable assemblages have zero weight") {
  oracle::Rng rng(53);
  const DeterministicStrategies s(3);
  for (int i = 0; i < 100; ++i) {
    const TswResult r = tsw(oracle::lhs_assemblage(rng), s);
    CHECK(std::abs(r.w) <= 1e-6);
    CHECK(r.solution.gap <= 1e-7);
  }
  const Assemblage dep = make_assemblage(kHalf, MeasurementSet::pauli(), oracle::pauli_channel(0, 0, 0), 1.0);
  CHECK(std::abs(tsw(dep, s).w) <= 1e-6);
}

TEST_CASE("identity channel at I/2 is fully steerable and matches the oracle") {
  TswOptions o;
  o.verify = true;
  const TswResult r =
      tsw(make_assemblage(kHalf, MeasurementSet::pauli(), AffineMap::identity(), 0.0), DeterministicStrategies(3), o);
  REQUIRE(r.oracle_w);
  CHECK(std::abs(r.w - *r.oracle_w) <= 1e-5);
  CHECK(r.w == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("steerable weight lies in [0, 1] with a certified gap") {
  oracle::Rng rng(54);
  const DeterministicStrategies s(3);
  for (int i = 0; i < 30; ++i) {
    const TswResult r = tsw(oracle::random_assemblage(rng, rng.uniform(0.0, 0.9)), s);
    CHECK(r.w >= 0.0);
    CHECK(r.w <= 1.0);
    CHECK(r.solution.gap <= 1e-7);
  }
}

TEST_CASE("constant-rate dephasing: W(t) = e^{-t}") {
  const DynamicalMap d = family_dephasing(DephasingParams{0.0}, 3.0);
  const std::vector<double> times = {0.0, 0.25, 0.5, 1.0, 2.0, 3.0};
  const WitnessTrace w = tsw_trace(kHalf, MeasurementSet::pauli(), d, times);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(std::abs(w.values[i] - oracle::dephasing_tsw(times[i])) <= 1e-6);
}

TEST_CASE("steerable weight is monotone under semigroups") {
  const auto times = TimeGrid{0.0, 3.0, 60}.points();
  for (const ChannelParams& p : {ChannelParams{DephasingParams{0.0}}, ChannelParams{ExponentialPhaseCovParams{1.0, 0.7, 0.3, 0.5}}}) {
    const WitnessTrace w = tsw_trace(kHalf, MeasurementSet::pauli(), make_channel(p, 3.0), times);
    for (std::size_t i = 1; i < w.values.size(); ++i) CHECK(w.values[i] <= w.values[i - 1] + 1e-5);
    CHECK(tsw_measure(w).raw.value <= 1e-5);
  }
}

TEST_CASE("TSW measure examples") {
  const auto times = TimeGrid{0.0, 3.0, 200}.points();
  const MeasurementSet m = MeasurementSet::pauli();
  const TswMeasure semi = tsw_measure(tsw_trace(kHalf, m, family_dephasing(DephasingParams{0.0}, 3.0), times));
  CHECK(semi.raw.value == 0.0);
  const TswMeasure enm = tsw_measure(tsw_trace(kHalf, m, family_enm(EnmParams{}, 3.0), times));
  CHECK(enm.raw.value <= 1e-4);
  const TswMeasure gad = tsw_measure(tsw_trace(kHalf, m, family_gad(GadParams{}, 3.0), times));
  CHECK(gad.raw.value > 1e-3);
  CHECK(gad.normalized.value == Approx(gad.raw.value / (1.0 + gad.raw.value)));
  CHECK(gad.normalized.value < 1.0);
}

TEST_CASE("TSW measure is exactly zero for non-increasing traces") {
  WitnessTrace w;
  w.kind = WitnessKind::tsw;
  w.times = {0.0, 0.1, 0.2, 0.3, 0.4};
  w.values = {1.0, 0.7, 0.7, 0.31, 0.1};
  CHECK(tsw_measure(w).raw.value == 0.0);
  w.values = {1.0, 0.5, 0.8, 0.2, 0.1};
  // |increments| = 0.5 + 0.3 + 0.6 + 0.1, net change -0.9
  CHECK(tsw_measure(w).raw.value == Approx(0.6));
}

TEST_CASE("solver failure names the time") {
  TswOptions o;
  o.admm.max_iter = 3;
  oracle::Rng rng(55);
  Assemblage a = oracle::random_assemblage(rng);
  a.t = 1.25;
  try {
    tsw(a, DeterministicStrategies(3), o);
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("t=1.25") != std::string::npos);
  }
}
