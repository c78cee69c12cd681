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

// Serial reference vs OpenMP kernels on the GAD scenario. Prints wall time,
// speedup and whether both paths produced bit-identical traces.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nmwit/families.hpp"
#include "nmwit/grid.hpp"
#include "nmwit/steering.hpp"
#include "nmwit/witnesses.hpp"

namespace {

using namespace nmw;

struct Kernel {
  std::string name;
  std::function<std::vector<double>(Execution)> run;
};

double seconds(const std::function<void()>& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel witness kernels"};
  std::size_t steps = 500;
  int reps = 3;
  int threads = 0;
  app.add_option("--steps", steps, "grid points");
  app.add_option("--reps", reps, "repetitions (best time is reported)");
  app.add_option("--threads", threads, "worker threads (default: logical cores)");
  CLI11_PARSE(app, argc, argv);
  set_worker_threads(threads);

  const DynamicalMap map = family_gad(GadParams{}, 3.1);
  const std::vector<double> times = TimeGrid{0.0, 3.0, steps}.points();
  const CMat rho = maximally_mixed();
  const CcmOptions ccm{3e-4};

  const std::vector<Kernel> kernels = {
      {"blp_td_64",
       [&](Execution e) { return std::vector<double>{blp_measure(map, DistanceKind::trace, times, 64, e).value}; }},
      {"blp_qjsd_64",
       [&](Execution e) { return std::vector<double>{blp_measure(map, DistanceKind::qjsd, times, 64, e).value}; }},
      {"lcm_trace", [&](Execution e) { return lcm_trace(rho, map, times, e).values; }},
      {"ccm_trace", [&](Execution e) { return ccm_trace(map, times, ccm, rho, e).values; }},
      {"tsw_trace", [&](Execution e) { return tsw_trace(rho, MeasurementSet::pauli(), map, times, {}, e).values; }},
  };

  std::printf("threads %d, grid %zu points, best of %d\n", worker_threads(), steps, reps);
  std::printf("%-12s %12s %12s %8s %s\n", "kernel", "serial [s]", "parallel [s]", "speedup", "identical");
  for (const auto& k : kernels) {
    std::vector<double> s, p;
    const double ts = seconds([&] { s = k.run(Execution::serial); }, reps);
    const double tp = seconds([&] { p = k.run(Execution::parallel); }, reps);
    std::printf("%-12s %12.4f %12.4f %8.2f %s\n", k.name.c_str(), ts, tp, ts / tp, s == p ? "yes" : "NO");
  }
  return 0;
}
