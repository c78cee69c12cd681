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
#include <variant>

#include "doctest.h"
#include "nmwit/channels.hpp"
#include "nmwit/families.hpp"
#include "nmwit/grid.hpp"
#include "oracles.hpp"

using namespace nmw;
using doctest::Approx;

namespace {

double max_diff(const CMat& a, const CMat& b) { return (a - b).max_abs(); }
double max_diff(const RMat& a, const RMat& b) { return (a - b).max_abs(); }

bool same_map(const AffineMap& a, const AffineMap& b, double tol) {
  if (max_diff(a.m, b.m) > tol) return false;
  for (int i = 0; i < 3; ++i)
    if (std::abs(a.kappa[i] - b.kappa[i]) > tol) return false;
  return true;
}

const BlochVec kPauliEigenstates[] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

std::vector<ChannelParams> all_families() {
  CounterexampleParams ce;
  ce.a_kappa = 0.48;
  return {DephasingParams{0.0}, GadParams{}, ExponentialPhaseCovParams{1.0, 0.7, 0.3, 0.5}, ce, EnmParams{},
          EnmParams{3.0, EnmRoute::kraus}};
}

}  // namespace

TEST_CASE("affine_from_kraus examples") {
  CHECK(same_map(affine_from_kraus(KrausSet({CMat::identity(2)})), AffineMap::identity(), 1e-15));
  const double q = 0.3;
  const KrausSet deph({CMat::identity(2) * cplx(std::sqrt(1 - q)), pauli(3) * cplx(std::sqrt(q))});
  CHECK(same_map(affine_from_kraus(deph), oracle::pauli_channel(1 - 2 * q, 1 - 2 * q, 1), 1e-14));
  const DynamicalMap gad = family_gad(GadParams{}, 3.0);
  for (double t : {0.0, 0.1, 0.77, 1.5, 3.0}) CHECK(same_map(gad.at(t), oracle::gad(5.0, t), 1e-12));
}

TEST_CASE("KrausSet checks completeness") {
  CHECK_THROWS_AS(KrausSet({CMat::identity(2) * cplx(0.9)}), ValidationError);
}

TEST_CASE("affine/kraus round trip agrees on the Pauli eigenstates") {
  oracle::Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const AffineMap f = oracle::random_channel(rng, 1 + trial % 4);
    const auto k = kraus_from_affine(f);
    REQUIRE(std::holds_alternative<KrausSet>(k));
    const KrausSet& ks = std::get<KrausSet>(k);
    CHECK(ks.completeness_defect() <= 1e-9);
    for (const BlochVec& x : kPauliEigenstates) {
      const CMat rho = density_from_bloch(x).mat();
      CHECK(max_diff(ks.apply(rho), f.apply(rho)) <= 1e-8);
    }
    CHECK(same_map(affine_from_kraus(ks), f, 1e-9));
  }
}

TEST_CASE("kraus_from_affine reports Choi negativity on non-CP maps") {
  const auto k = kraus_from_affine(oracle::pauli_channel(1, 1, -1));
  REQUIRE(std::holds_alternative<ChoiNegativity>(k));
  CHECK(std::get<ChoiNegativity>(k).min_choi_eig == Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("Choi matrix examples") {
  CMat omega(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) omega(3 * i, 3 * j) = 1.0;
  const HermMat id = choi_matrix(AffineMap::identity());
  CHECK(max_diff(id.mat(), omega) <= 1e-15);
  CHECK(id.trace() == Approx(2.0));

  AffineMap dep;
  dep.m = RMat(3, 3);
  CHECK(max_diff(choi_matrix(dep).mat(), CMat::identity(4) * cplx(0.5)) <= 1e-15);

  const auto v = herm_eigvals(choi_matrix(oracle::pauli_channel(0, 0, 1)).mat());
  CHECK(std::abs(v[0]) < 1e-14);
  CHECK(std::abs(v[1]) < 1e-14);
  CHECK(v[2] == Approx(1.0));
  CHECK(v[3] == Approx(1.0));
}

TEST_CASE("is_cptp examples") {
  const CptpReport id = cptp_report(AffineMap::identity());
  CHECK(id.cp);
  CHECK(std::abs(id.min_choi_eig) <= 1e-14);
  CHECK(id.tp_defect <= 1e-15);
  const CptpReport flip = cptp_report(oracle::pauli_channel(1, 1, -1));
  CHECK_FALSE(flip.cp);
  CHECK(flip.min_choi_eig == Approx(-1.0));
  const DynamicalMap enm = family_enm(EnmParams{}, 5.0);
  for (double t = 0.0; t <= 5.0; t += 0.25) CHECK(enm.is_cptp(t).cp);
}

TEST_CASE("propagate_generator matches closed forms") {
  GeneratorSpec deph;
  const double gamma = 0.35;
  deph.terms.push_back({pauli(3), [gamma](double) { return gamma; }});
  for (double t : {0.0, 0.5, 2.0}) {
    const AffineMap f = propagate_generator(deph, t, 1e-3);
    CHECK(f.m(0, 0) == Approx(std::exp(-2 * gamma * t)).epsilon(1e-10));
    CHECK(f.m(1, 1) == Approx(std::exp(-2 * gamma * t)).epsilon(1e-10));
    CHECK(f.m(2, 2) == Approx(1.0).epsilon(1e-12));
  }
  for (double c : {1.0, 3.0}) {
    const GeneratorSpec g = enm_generator(c);
    for (double t : {0.1, 0.8, 2.0, 3.0}) {
      const AffineMap f = propagate_generator(g, t, 1e-4);
      const auto ref = oracle::enm_lambdas(c, t);
      CHECK(std::abs(f.m(0, 0) - ref[0]) <= 1e-6);
      CHECK(std::abs(f.m(1, 1) - ref[0]) <= 1e-6);
      CHECK(std::abs(f.m(2, 2) - ref[1]) <= 1e-6);
    }
  }
  CHECK(same_map(propagate_generator(GeneratorSpec{}, 2.0, 0.1), AffineMap::identity(), 1e-15));
  CHECK(same_map(propagate_generator(enm_generator(3.0), 0.0, 1e-4), AffineMap::identity(), 1e-15));
}

TEST_CASE("propagate_generator reports a rate singularity") {
  // gamma_z diverges at asinh(1/5)
  const double pole = std::asinh(0.2);
  for (double dt : {1e-2, 1e-3, 1e-4}) {
    try {
      propagate_generator(dephasing_generator(5.0), 0.5, dt);
      FAIL("expected a singular-rate error");
    } catch (const SingularRateError& e) {
      CHECK(std::abs(e.time() - pole) <= 1e-9);
    }
  }
  // a smooth sign change is not a singularity
  GeneratorSpec g;
  g.terms.push_back({pauli(3), [](double t) { return 0.3 * std::cos(3.0 * t); }});
  CHECK_NOTHROW(propagate_generator(g, 3.0, 1e-2));
}

TEST_CASE("family examples") {
  for (double t : {0.0, 0.4, 2.5}) CHECK(dephasing_rate(0.0, t) == Approx(0.5));
  const DynamicalMap d0 = family_dephasing(DephasingParams{0.0}, 3.0);
  for (double t : {0.3, 1.7}) CHECK(d0.at(t).m(0, 0) == Approx(std::exp(-t)).epsilon(1e-12));

  // pure dephasing: eta_par = 1, kappa = 0
  PhaseCovariantParams pd;
  pd.eta_par = [](double) { return 1.0; };
  pd.eta_perp = [](double t) { return std::exp(-0.4 * t); };
  pd.kappa = [](double) { return 0.0; };
  const DynamicalMap pdm = family_phase_covariant(pd, 3.0);
  for (double t : {0.5, 2.0}) CHECK(same_map(pdm.at(t), oracle::pauli_channel(std::exp(-0.4 * t), std::exp(-0.4 * t), 1), 1e-12));

  // amplitude damping: eta_par = 1 - kappa, eta_perp = sqrt(1 - kappa)
  PhaseCovariantParams ad;
  ad.kappa = [](double t) { return 1.0 - std::exp(-t); };
  ad.eta_par = [](double t) { return std::exp(-t); };
  ad.eta_perp = [](double t) { return std::exp(-t / 2); };
  const DynamicalMap adm = family_phase_covariant(ad, 3.0);
  for (double t : {0.5, 2.0}) {
    const double g = 1.0 - std::exp(-t);
    const KrausSet amp({CMat(2, 2, {1.0, 0.0, 0.0, std::sqrt(1 - g)}), CMat(2, 2, {0.0, std::sqrt(g), 0.0, 0.0})});
    CHECK(same_map(adm.at(t), affine_from_kraus(amp), 1e-12));
  }
}

TEST_CASE("every family starts at the identity and stays CPTP on its grid") {
  const auto times = TimeGrid{0.0, 3.0, 301}.points();
  for (const auto& p : all_families()) {
    CAPTURE(family_name(p));
    const DynamicalMap map = make_channel(p, 3.0);
    CHECK(same_map(map.at(0.0), AffineMap::identity(), 1e-9));
    for (double t : times) {
      const CptpReport r = map.is_cptp(t);
      CHECK(r.cp);
      CHECK(r.tp_defect <= 1e-8);
    }
  }
}

TEST_CASE("CP violation raises under the default policy") {
  // beyond ln(5/3) the alpha = 5 coherence factor exceeds 1
  const DynamicalMap d = family_dephasing(DephasingParams{5.0}, 3.0);
  CHECK_NOTHROW(d.at(0.1));
  CHECK_THROWS_AS(d.at(1.0), CpViolation);
  try {
    d.at(1.0);
  } catch (const CpViolation& e) {
    CHECK(e.min_choi_eig() < 0.0);
    CHECK(e.time() == 1.0);
  }
  CHECK_NOTHROW(d.with_cp_policy(CpPolicy::allow).at(1.0));
}

TEST_CASE("phase-covariant rates") {
  PhaseCovariantParams p;
  p.eta_par = [](double t) { return std::exp(-t); };
  p.eta_perp = [](double t) { return std::exp(-t); };
  p.kappa = [](double) { return 0.0; };
  for (double t : {0.2, 1.0}) {
    const PhaseCovRates r = phase_cov_rates(p, t);
    CHECK(r.gamma_z == Approx(0.25).epsilon(1e-8));
    CHECK(r.gamma_plus == Approx(r.gamma_minus).epsilon(1e-12));
    CHECK(std::abs(r.h) <= 1e-12);
  }
  PhaseCovariantParams c;
  c.eta_par = [](double) { return 0.6; };
  c.eta_perp = [](double) { return 0.7; };
  c.kappa = [](double) { return 0.1; };
  CHECK(std::abs(phase_cov_rates(c, 0.5).gamma_z) <= 1e-12);
  PhaseCovariantParams z = p;
  z.eta_par = [](double) { return 0.0; };
  CHECK_THROWS_AS(phase_cov_rates(z, 0.5), SingularRateError);
}

TEST_CASE("purity examples") {
  CHECK(purity(CMat::identity(2) * cplx(0.5)) == Approx(0.5));
  CHECK(purity(density_from_bloch({0, 0, 1}).mat()) == Approx(1.0));
  const DynamicalMap gad = family_gad(GadParams{}, 3.0);
  for (double t : {0.3, 1.1, 2.9}) {
    const double tau3 = oracle::gad(5.0, t).kappa[2];
    CHECK(purity(gad.at(t).apply(CMat::identity(2) * cplx(0.5))) == Approx(0.5 * (1 + tau3 * tau3)).epsilon(1e-12));
  }
}

TEST_CASE("unital maps never increase purity") {
  oracle::Rng rng(22);
  std::vector<CMat> states;
  for (int i = 0; i < 100; ++i) states.push_back(rng.state());
  const std::vector<DynamicalMap> unital = {family_dephasing(DephasingParams{0.0}, 3.0), family_enm(EnmParams{}, 3.0),
                                            family_enm(EnmParams{3.0, EnmRoute::kraus}, 3.0)};
  for (const auto& map : unital)
    for (double t : TimeGrid{0.0, 3.0, 31}.points()) {
      const AffineMap f = map.at(t);
      REQUIRE(f.unital(1e-12));
      for (const CMat& rho : states) CHECK(purity(f.apply(rho)) <= purity(rho) + 1e-9);
    }
}

TEST_CASE("GAD composition relations") {
  const DynamicalMap gad = family_gad(GadParams{}, 3.0);
  for (double s : {0.2, 0.9})
    for (double t : {1.0, 2.4}) {
      const AffineMap fs = gad.at(s), ft = gad.at(t);
      // M(t, s) = M(t) M(s)^{-1}, kappa(t, s) = kappa(t) - M(t, s) kappa(s)
      const RMat mts = ft.m * inverse(fs.m);
      AffineMap v;
      v.m = mts;
      for (int i = 0; i < 3; ++i) {
        double mk = 0.0;
        for (int j = 0; j < 3; ++j) mk += mts(i, j) * fs.kappa[j];
        v.kappa[i] = ft.kappa[i] - mk;
      }
      CHECK(same_map(compose(v, fs), ft, 1e-8));
    }
}

TEST_CASE("ENM Kraus route has the corrected Pauli-mixture eigenvalues") {
  const double c = 2.0;
  const DynamicalMap k = family_enm(EnmParams{c, EnmRoute::kraus}, 3.0);
  const DynamicalMap g = family_enm(EnmParams{1.0, EnmRoute::generator}, 3.0);
  for (double t : {0.3, 1.2, 2.7}) {
    const double e = std::exp(-c * t);
    CHECK(same_map(k.at(t), oracle::pauli_channel((1 + e) / 2, (1 + e) / 2, e), 1e-12));
    // the generator at unit rate is the same channel when the Kraus c is 2
    CHECK(same_map(k.at(t), g.at(t), 1e-6));
  }
}
