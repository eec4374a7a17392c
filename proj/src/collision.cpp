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

#include "qwlsh/lsh.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qwlsh/error.hpp"
#include "qwlsh/kernels.hpp"

namespace qwlsh {

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(F& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double collision_probability(double r, double width) {
  if (!(r > 0.0) || !(width > 0.0)) {
    throw Error("collision_probability needs r > 0 and width > 0");
  }
  const double scale = 2.0 / (r * std::sqrt(2.0 * std::numbers::pi));
  auto f = [&](double t) {
    return scale * std::exp(-t * t / (2.0 * r * r)) * (1.0 - t / width);
  };
  const double fa = f(0.0);
  const double fb = f(width);
  const double fm = f(0.5 * width);
  const double whole = simpson(0.0, width, fa, fm, fb);
  return adaptive_simpson(f, 0.0, width, fa, fm, fb, whole, 1e-7, 50);
}

LshParams derive_params(double c, double width, double delta, std::size_t n,
                        std::size_t k_max) {
  if (!(c > 1.0)) throw Error("approximation ratio c must exceed 1");
  if (!(delta > 0.0 && delta < 1.0)) throw Error("delta must lie in (0, 1)");
  if (!(width > 0.0)) throw Error("bucket width must be positive");
  if (n == 0) throw Error("derive_params: empty dataset");
  LshParams p;
  p.c = c;
  p.width = width;
  p.delta = delta;
  p.p1 = collision_probability(1.0, width);
  p.p2 = collision_probability(c, width);
  if (!(p.p1 > p.p2)) throw Error("hash family is not sensitive: p1 <= p2");
  p.alpha = 0.5 * (p.p1 + p.p2);
  const double gap = p.p1 - p.alpha;
  p.m = static_cast<std::size_t>(std::ceil(std::log(1.0 / delta) / (2.0 * gap * gap)));
  p.threshold = static_cast<std::size_t>(std::ceil(p.alpha * static_cast<double>(p.m)));
  p.false_positives = kDefaultFalsePositives;
  p.max_candidates = k_max + p.false_positives;
  return p;
}

LshParams with_projections(const LshParams& params, std::size_t m) {
  if (m == 0) throw Error("projection count must be positive");
  LshParams p = params;
  p.m = m;
  p.threshold = static_cast<std::size_t>(std::ceil(p.alpha * static_cast<double>(m)));
  return p;
}

double project(const HashFunction& h, std::span<const double> p) {
  if (p.size() != h.a.size()) throw Error("project: dimension mismatch");
  return (kernels::dot(h.a, p) + h.b) / h.width;
}

std::vector<HashFunction> sample_hash_functions(std::size_t m, std::size_t d,
                                                double width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> offset(0.0, width);
  std::vector<HashFunction> out(m);
  for (auto& h : out) {
    h.a.resize(d);
    for (auto& x : h.a) x = normal(rng);
    h.b = offset(rng);
    if (h.b >= width) h.b = 0.0;
    h.width = width;
  }
  return out;
}

}  // namespace qwlsh
