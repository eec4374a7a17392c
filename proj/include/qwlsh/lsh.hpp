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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qwlsh {

inline constexpr std::size_t kDefaultFalsePositives = 100;
inline constexpr double kDefaultRatio = 2.0;
inline constexpr double kDefaultWidth = 2.719;
inline constexpr double kDefaultDelta = 0.36787944117144233;  // 1/e

// Probability that two points at distance r share a bucket of width w under
// the Gaussian-projection hash, integrated by adaptive Simpson to within
// 1e-6 absolute.
double collision_probability(double r, double width);

struct LshParams {
  double c = kDefaultRatio;
  double width = kDefaultWidth;
  double delta = kDefaultDelta;
  double p1 = 0.0;  // P(1)
  double p2 = 0.0;  // P(c)
  double alpha = 0.0;  // collision-rate threshold, midway between p1 and p2
  std::size_t m = 0;
  std::size_t threshold = 0;  // collisions needed to become a candidate
  std::size_t false_positives = kDefaultFalsePositives;
  std::size_t max_candidates = 0;  // k_max + false_positives

  friend bool operator==(const LshParams&, const LshParams&) = default;
};

// m = ceil(ln(1/delta) / (2 (p1 - alpha)^2)), threshold = ceil(alpha m).
LshParams derive_params(double c, double width, double delta, std::size_t n,
                        std::size_t k_max = 100);

// Same parameters with an explicit projection count; the threshold is
// recomputed as ceil(alpha m).
LshParams with_projections(const LshParams& params, std::size_t m);

struct HashFunction {
  std::vector<double> a;  // i.i.d. N(0, 1)
  double b = 0.0;         // uniform in [0, width)
  double width = kDefaultWidth;
};

// (a . p + b) / width, unfloored.
double project(const HashFunction& h, std::span<const double> p);

// m functions in d dimensions, drawn from one mt19937_64 stream in order.
std::vector<HashFunction> sample_hash_functions(std::size_t m, std::size_t d,
                                                double width, std::uint64_t seed);

}  // namespace qwlsh
