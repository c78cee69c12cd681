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

#include <string>
#include <vector>

#include "json.hpp"
#include "nmwit/numcore.hpp"

namespace nmw {

struct SdpBlock {
  std::string name;
  std::size_t dim = 1;
};

struct SdpTerm {
  std::size_t block = 0;
  double coeff = 0.0;
};

/// offset + sum_terms coeff * Y_block must be PSD.
struct SdpConstraint {
  CMat offset;
  std::vector<SdpTerm> terms;
};

/// maximize sum_b Tr(objective[b] Y_b) over Y_b >= 0 subject to the
/// constraint expressions being PSD.
struct SdpProblem {
  std::vector<SdpBlock> blocks;
  std::vector<CMat> objective;
  std::vector<SdpConstraint> constraints;

  void validate() const;
  nlohmann::json to_json() const;
};

enum class SdpStatus { optimal, max_iter, infeasible, unbounded };

std::string to_string(SdpStatus s);

struct SdpSolution {
  std::vector<HermMat> blocks;
  double objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  SdpStatus status = SdpStatus::max_iter;
};

struct AdmmOptions {
  double tol = 1e-8;
  int max_iter = 50000;
  double rho = 1.0;
  double relaxation = 1.6;
  int check_every = 10;
  bool adaptive_rho = true;
  /// Rescale every PSD block by a congruence built from the constraint
  /// offsets that bound it. Keeps thin feasible sets (nearly singular
  /// offsets) well conditioned; the cone itself is unchanged.
  bool precondition = true;
  double precondition_floor = 1e-6;
};

/// Operator splitting between the affine constraint set and the PSD cone.
SdpSolution solve_admm(const SdpProblem& p, const AdmmOptions& opts = {});

/// Log-det barrier on the dual problem. Shares no linear algebra with
/// solve_admm and is meant for cross-checks only.
SdpSolution solve_oracle(const SdpProblem& p, double tol = 1e-8);

/// Smallest eigenvalue over every constraint expression at the given blocks.
double min_constraint_eigenvalue(const SdpProblem& p, const std::vector<HermMat>& blocks);

}  // namespace nmw
