// Copyright 2026-present the qwlsh authors
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

// Serial vs OpenMP kernels on synthetic inputs. Prints the best of several
// repetitions for each variant and checks that outputs agree bit for bit.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <vector>

#include "qwlsh/kernels.hpp"

namespace {

using namespace qwlsh::kernels;

double best_ms(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

std::vector<double> random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(rows * cols);
  for (auto& x : v) x = g(rng);
  return v;
}

void report(const char* name, double s, double p, bool same) {
  std::printf("%-24s serial %9.2f ms  omp %9.2f ms  speedup %5.2fx  %s\n", name, s, p, s / p,
              same ? "identical" : "MISMATCH");
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main() {
  const int reps = 5;
  std::printf("threads: %d\n", omp_get_max_threads());
  bool ok = true;

  {
    const std::size_t n = 200000, d = 128;
    const auto x = random_matrix(n, d, 1);
    const auto q = random_matrix(1, d, 2);
    MatrixView xv{x, n, d};
    std::vector<double> a(n), b(n);
    const double s = best_ms(reps, [&] { serial::squared_distances(xv, q, a); });
    const double p = best_ms(reps, [&] { omp::squared_distances(xv, q, b); });
    report("squared_distances", s, p, same_bits(a, b));
    ok = ok && same_bits(a, b);
  }
  {
    const std::size_t n = 50000, d = 256, m = 37;
    const auto x = random_matrix(n, d, 3);
    const auto dirs = random_matrix(m, d, 4);
    std::vector<double> offsets(m, 0.5);
    MatrixView xv{x, n, d}, dv{dirs, m, d};
    std::vector<double> a(n * m), b(n * m);
    const double s = best_ms(reps, [&] { serial::project(xv, dv, offsets, 2.719, a); });
    const double p = best_ms(reps, [&] { omp::project(xv, dv, offsets, 2.719, b); });
    report("project", s, p, same_bits(a, b));
    ok = ok && same_bits(a, b);
  }
  {
    const std::size_t n = 1000, d = 256;
    const auto x = random_matrix(n, d, 5);
    MatrixView xv{x, n, d};
    std::vector<double> a(n), b(n);
    const double s = best_ms(reps, [&] { serial::kth_neighbor_distance(xv, 10, a); });
    const double p = best_ms(reps, [&] { omp::kth_neighbor_distance(xv, 10, b); });
    report("kth_neighbor_distance", s, p, same_bits(a, b));
    ok = ok && same_bits(a, b);
  }
  return ok ? 0 : 1;
}
