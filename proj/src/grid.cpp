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

#include "nmwit/grid.hpp"

#include <algorithm>

#include "nmwit/errors.hpp"

namespace nmw {

std::vector<double> TimeGrid::points() const {
  if (steps < 2) throw ConfigError("time grid needs at least 2 points");
  if (!(t0 < t1)) throw ConfigError("time grid needs t0 < t1");
  std::vector<double> t(steps);
  const double h = (t1 - t0) / static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) t[i] = t0 + h * static_cast<double>(i);
  t.back() = t1;
  return t;
}

void set_worker_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int worker_threads() { return omp_get_max_threads(); }

std::vector<double> derivative(std::span<const double> t, std::span<const double> v) {
  if (t.size() != v.size() || t.size() < 2) throw DimensionError("derivative: need matching sizes >= 2");
  const std::size_t n = t.size();
  std::vector<double> d(n);
  d[0] = (v[1] - v[0]) / (t[1] - t[0]);
  d[n - 1] = (v[n - 1] - v[n - 2]) / (t[n - 1] - t[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (t[i + 1] - t[i - 1]);
  return d;
}

double trapezoid(std::span<const double> t, std::span<const double> v) {
  if (t.size() != v.size()) throw DimensionError("trapezoid: size mismatch");
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (v[i] + v[i - 1]) * (t[i] - t[i - 1]);
  return s;
}

double positive_slope_integral(std::span<const double> t, std::span<const double> v) {
  auto d = derivative(t, v);
  for (auto& x : d) x = std::max(x, 0.0);
  return trapezoid(t, d);
}

}  // namespace nmw
