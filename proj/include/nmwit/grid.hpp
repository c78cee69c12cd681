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

// Time-grid evaluation kernels. Every witness trace is an embarrassingly
// parallel map over grid points; the serial path is the reference the OpenMP
// path is tested against (results must match bit for bit).

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#include <omp.h>

namespace nmw {

enum class Execution { serial, parallel };

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 1.0;
  std::size_t steps = 2000;  // number of points, >= 2

  std::vector<double> points() const;
};

/// Number of OpenMP workers for parallel kernels; 0 keeps the runtime default.
void set_worker_threads(int n);
int worker_threads();

template <class R, class Fn>
std::vector<R> map_grid(std::span<const double> times, Fn&& fn, Execution exec) {
  const auto n = static_cast<std::ptrdiff_t>(times.size());
  std::vector<R> out(times.size());
  if (exec == Execution::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = fn(static_cast<std::size_t>(i), times[i]);
    return out;
  }
  // Exceptions cannot cross the parallel region; keep the one with the lowest
  // index so the reported failure matches the serial path.
  std::exception_ptr first_error;
  std::ptrdiff_t first_index = n;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = fn(static_cast<std::size_t>(i), times[i]);
    } catch (...) {
#pragma omp critical(nmw_map_grid_error)
      {
        if (i < first_index) {
          first_index = i;
          first_error = std::current_exception();
        }
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

/// Central differences in the interior, one-sided at the ends.
std::vector<double> derivative(std::span<const double> t, std::span<const double> v);
double trapezoid(std::span<const double> t, std::span<const double> v);
/// Integral of the positive part of dv/dt (trapezoid on clipped derivative).
double positive_slope_integral(std::span<const double> t, std::span<const double> v);

}  // namespace nmw
