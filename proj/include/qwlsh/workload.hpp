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
#include <filesystem>
#include <vector>

#include "qwlsh/dataset.hpp"

namespace qwlsh {

inline constexpr std::size_t kMaxK = 100;

struct QueryWorkload {
  std::vector<Point> queries;
  std::size_t k = 0;
};

// Dense-region sampling parameters. Defaults are the documented estimator:
// 1000-point sample, 10th-neighbour distance score, lowest quartile.
struct DensityOptions {
  std::size_t sample_size = 1000;
  std::size_t score_rank = 10;
};

// Draws q_count queries (with replacement) from the densest quartile of a
// density-ranked sample of ds. Pure function of its arguments.
QueryWorkload generate_workload(const Dataset& ds, std::size_t q_count,
                                std::size_t k, std::uint64_t seed,
                                const DensityOptions& opts = {});

// Workload files hold one point id per line.
void save_workload(const QueryWorkload& wl, const std::filesystem::path& path);
QueryWorkload load_workload(const Dataset& ds, const std::filesystem::path& path,
                            std::size_t k);

// Exact k nearest neighbours, sorted by (dist, id).
std::vector<Neighbor> brute_force_knn(const Dataset& ds,
                                      std::span<const double> q,
                                      std::size_t k);

}  // namespace qwlsh
