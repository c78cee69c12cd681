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

#include <cstddef>
#include <vector>

#include "nmwit/channels.hpp"

namespace nmw {

inline constexpr double kPinvConditionThreshold = 1e12;

/// V(t, s) = F(t) F(s)^{-1}; the Moore-Penrose pseudo-inverse replaces the
/// inverse when cond(F(s)) exceeds kPinvConditionThreshold.
struct IntermediateMap {
  double from_t = 0.0;
  double to_t = 0.0;
  AffineMap affine;
  HermMat choi;
  double min_choi_eig = 0.0;
  bool pseudo_inverse_used = false;
};

IntermediateMap intermediate(const DynamicalMap& map, double s, double t);
IntermediateMap intermediate_from(const AffineMap& at_s, const AffineMap& at_t, double s, double t);

/// True when the step maps n_probe boundary states of the Bloch sphere into
/// the Bloch ball (tolerance 1e-9). Requires n_probe >= 100.
bool is_p_divisible_step(const IntermediateMap& v, int n_probe = 200);

std::vector<BlochVec> fibonacci_sphere(std::size_t n);

/// Canonical decay rates at t. Pauli-diagonal unital maps return
/// {gamma_1, gamma_2, gamma_3} from the H-matrix solve; phase-covariant maps
/// return {h, gamma_plus, gamma_minus, gamma_z}.
std::vector<double> canonical_rates(const DynamicalMap& map, double t, double dt);

}  // namespace nmw
