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
#include "nmwit/sdp.hpp"
#include "nmwit/steering.hpp"
#include "oracles.hpp"

using namespace nmw;
using doctest::Approx;

namespace {

CMat diag2(double a, double b) { return CMat(2, 2, {a, 0.0, 0.0, b}); }

/// max Tr Y s.t. Y >= 0, C - Y >= 0.
SdpProblem capped(const CMat& c) {
  SdpProblem p;
  p.blocks = {{"Y", 2}};
  p.objective = {CMat::identity(2)};
  p.constraints = {{c, {{0, -1.0}}}};
  return p;
}

SdpProblem infeasible_toy() {
  SdpProblem p;
  p.blocks = {{"Y", 2}};
  p.objective = {CMat::identity(2)};
  p.constraints = {{CMat::identity(2) * cplx(-1.0), {{0, -1.0}}}};
  return p;
}

SdpProblem zero_objective() {
  SdpProblem p = capped(diag2(1, 2));
  p.objective = {CMat(2, 2)};
  return p;
}

SdpProblem unsteerable_tsw() {
  oracle::Rng rng(41);
  return tsw_problem(oracle::lhs_assemblage(rng), DeterministicStrategies(3));
}

void check_certificate(const SdpProblem& p, const SdpSolution& s, double tol) {
  CHECK(s.status == SdpStatus::optimal);
  CHECK(s.gap <= tol);
  CHECK(s.primal_residual <= tol);
  CHECK(s.objective <= s.dual_objective + tol);
  CHECK(min_constraint_eigenvalue(p, s.blocks) >= -tol);
}

}  // namespace

TEST_CASE("ADMM examples") {
  const SdpProblem cap = capped(diag2(1, 2));
  const SdpSolution s = solve_admm(cap);
  check_certificate(cap, s, 1e-7);
  CHECK(s.objective == Approx(3.0).epsilon(1e-7));
  CHECK((s.blocks[0].mat() - diag2(1, 2)).max_abs() <= 1e-6);

  const SdpProblem tsw = unsteerable_tsw();
  const SdpSolution u = solve_admm(tsw);
  check_certificate(tsw, u, 1e-7);
  CHECK(u.objective == Approx(1.0).epsilon(1e-7));

  const SdpSolution z = solve_admm(zero_objective());
  CHECK(z.status == SdpStatus::optimal);
  CHECK(std::abs(z.objective) <= 1e-8);
}

TEST_CASE("oracle examples") {
  const SdpSolution s = solve_oracle(capped(diag2(1, 2)));
  CHECK(s.status == SdpStatus::optimal);
  CHECK(std::abs(s.objective - 3.0) <= 2e-5);
  const SdpSolution u = solve_oracle(unsteerable_tsw());
  CHECK(u.status == SdpStatus::optimal);
  CHECK(std::abs(u.objective - 1.0) <= 2e-5);
  const SdpSolution z = solve_oracle(zero_objective());
  CHECK(std::abs(z.objective) <= 2e-5);
  CHECK(solve_oracle(infeasible_toy()).status == SdpStatus::infeasible);
}

TEST_CASE("ADMM does not report the infeasible toy as optimal") {
  AdmmOptions o;
  o.max_iter = 2000;
  const SdpSolution s = solve_admm(infeasible_toy(), o);
  CHECK(s.status != SdpStatus::optimal);
}

TEST_CASE("ADMM with a complex off-diagonal cap") {
  CMat c(2, 2, {1.0, cplx(0.3, -0.4), cplx(0.3, 0.4), 2.0});
  const SdpProblem p = capped(c);
  const SdpSolution s = solve_admm(p);
  check_certificate(p, s, 1e-7);
  CHECK(s.objective == Approx(3.0).epsilon(1e-7));
}

TEST_CASE("ADMM and oracle agree on random assemblages") {
  oracle::Rng rng(42);
  const DeterministicStrategies strat(3);
  for (int i = 0; i < 50; ++i) {
    const Assemblage a = oracle::random_assemblage(rng, i % 3 == 0 ? 0.0 : rng.uniform(0.0, 0.8));
    const SdpProblem p = tsw_problem(a, strat);
    const SdpSolution s = solve_admm(p);
    const SdpSolution o = solve_oracle(p);
    CAPTURE(i);
    check_certificate(p, s, 1e-7);
    CHECK(o.status == SdpStatus::optimal);
    CHECK(std::abs(s.objective - o.objective) <= 1e-5);
  }
}

TEST_CASE("ADMM is deterministic") {
  oracle::Rng rng(43);
  const SdpProblem p = tsw_problem(oracle::random_assemblage(rng), DeterministicStrategies(3));
  const SdpSolution a = solve_admm(p);
  const SdpSolution b = solve_admm(p);
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
  for (std::size_t k = 0; k < a.blocks.size(); ++k) CHECK(a.blocks[k].mat() == b.blocks[k].mat());
}

TEST_CASE("ADMM without preconditioning still solves well-conditioned problems") {
  AdmmOptions o;
  o.precondition = false;
  const SdpSolution s = solve_admm(capped(diag2(1, 2)), o);
  CHECK(s.status == SdpStatus::optimal);
  CHECK(s.objective == Approx(3.0).epsilon(1e-7));
}

TEST_CASE("ADMM reports max_iter with residuals when capped") {
  oracle::Rng rng(44);
  AdmmOptions o;
  o.max_iter = 3;
  const SdpSolution s = solve_admm(tsw_problem(oracle::random_assemblage(rng), DeterministicStrategies(3)), o);
  CHECK(s.status == SdpStatus::max_iter);
  CHECK(s.iterations <= 10);
  CHECK(s.primal_residual >= 0.0);
}

TEST_CASE("problem validation and JSON dump") {
  SdpProblem p = capped(diag2(1, 2));
  CHECK_NOTHROW(p.validate());
  const auto j = p.to_json();
  CHECK(j.at("blocks").size() == 1);
  CHECK(j.at("constraints").size() == 1);
  SdpProblem bad = p;
  bad.constraints[0].offset = CMat(2, 2, {0.0, 1.0, 0.0, 0.0});
  CHECK_THROWS(bad.validate());
  bad = p;
  bad.blocks[0].dim = 0;
  CHECK_THROWS(bad.validate());
  bad = p;
  bad.constraints[0].terms[0].block = 3;
  CHECK_THROWS(bad.validate());
  CHECK(to_string(SdpStatus::optimal) == "optimal");
}
