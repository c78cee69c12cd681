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

#include "nmwit/sdp.hpp"

#include <algorithm>

#include "nmwit/errors.hpp"
#include "nmwit/json_io.hpp"

namespace nmw {

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::max_iter: return "max_iter";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::unbounded: return "unbounded";
  }
  return "?";
}

namespace {

void check_hermitian(const CMat& a, std::size_t dim, const std::string& what) {
  if (a.rows() != dim || a.cols() != dim) throw DimensionError("SdpProblem: " + what + " has wrong dimension");
  if ((a - a.adjoint()).max_abs() > kHermTol) throw ValidationError("SdpProblem: " + what + " is not Hermitian");
}

}  // namespace

void SdpProblem::validate() const {
  if (blocks.empty()) throw ValidationError("SdpProblem: no variable blocks");
  if (objective.size() != blocks.size()) throw DimensionError("SdpProblem: one objective matrix per block");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].dim < 1) throw DimensionError("SdpProblem: block dimension must be >= 1");
    check_hermitian(objective[b], blocks[b].dim, "objective of " + blocks[b].name);
  }
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const auto& c = constraints[k];
    const std::size_t dim = c.offset.rows();
    check_hermitian(c.offset, dim, "constraint offset " + std::to_string(k));
    for (const auto& term : c.terms) {
      if (term.block >= blocks.size()) throw DimensionError("SdpProblem: constraint term names unknown block");
      if (blocks[term.block].dim != dim) throw DimensionError("SdpProblem: constraint/block dimension mismatch");
    }
  }
}

nlohmann::json SdpProblem::to_json() const {
  nlohmann::json j;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    j["blocks"].push_back({{"name", blocks[b].name}, {"dim", blocks[b].dim}, {"objective", matrix_to_json(objective[b])}});
  j["constraints"] = nlohmann::json::array();
  for (const auto& c : constraints) {
    nlohmann::json jc;
    jc["offset"] = matrix_to_json(c.offset);
    jc["terms"] = nlohmann::json::array();
    for (const auto& t : c.terms) jc["terms"].push_back({{"block", t.block}, {"coeff", t.coeff}});
    j["constraints"].push_back(jc);
  }
  return j;
}

double min_constraint_eigenvalue(const SdpProblem& p, const std::vector<HermMat>& blocks) {
  double worst = 0.0;
  bool first = true;
  for (const auto& c : p.constraints) {
    CMat expr = c.offset;
    for (const auto& t : c.terms) expr += blocks.at(t.block).mat() * cplx(t.coeff);
    const double m = min_eigenvalue(expr, 1e-8);
    worst = first ? m : std::min(worst, m);
    first = false;
  }
  for (const auto& y : blocks) {
    const double m = min_eigenvalue(y.mat(), 1e-8);
    worst = first ? m : std::min(worst, m);
    first = false;
  }
  return worst;
}

}  // namespace nmw
