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

#include "json.hpp"
#include "nmwit/errors.hpp"
#include "nmwit/numcore.hpp"

namespace nmw {

/// Complex matrix as rows of [re, im] pairs.
inline nlohmann::json matrix_to_json(const CMat& a) {
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back({a(i, j).real(), a(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMat matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix json: expected a non-empty array of rows");
  const std::size_t n = j.size();
  const std::size_t m = j.front().size();
  CMat a(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    if (j[i].size() != m) throw ValidationError("matrix json: ragged rows");
    for (std::size_t k = 0; k < m; ++k) {
      const auto& e = j[i][k];
      if (!e.is_array() || e.size() != 2) throw ValidationError("matrix json: entries must be [re, im]");
      a(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return a;
}

}  // namespace nmw
