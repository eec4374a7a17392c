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

#include "qwlsh/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "qwlsh/error.hpp"
#include "qwlsh/kernels.hpp"

namespace qwlsh {

QueryWorkload generate_workload(const Dataset& ds, std::size_t q_count,
                                std::size_t k, std::uint64_t seed,
                                const DensityOptions& opts) {
  if (q_count == 0) throw Error("generate_workload: q_count must be >= 1");
  if (k == 0 || k > kMaxK) throw Error("generate_workload: k must be in [1, 100]");
  if (opts.sample_size == 0 || opts.score_rank == 0) {
    throw Error("generate_workload: empty density sample");
  }

  std::mt19937_64 rng(seed);

  // Partial Fisher-Yates: the first s slots become a uniform sample without
  // replacement.
  const std::size_t s = std::min(opts.sample_size, ds.n());
  std::vector<PointId> ids(ds.n());
  std::iota(ids.begin(), ids.end(), PointId{0});
  for (std::size_t i = 0; i < s; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, ds.n() - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  ids.resize(s);
  std::sort(ids.begin(), ids.end());

  std::vector<double> sample(s * ds.d());
  for (std::size_t i = 0; i < s; ++i) {
    const auto r = ds.row(ids[i]);
    std::copy(r.begin(), r.end(), sample.begin() + static_cast<std::ptrdiff_t>(i * ds.d()));
  }
  std::vector<double> score(s);
  kernels::omp::kth_neighbor_distance({sample, s, ds.d()}, opts.score_rank, score);

  std::vector<std::size_t> order(s);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return score[a] < score[b] || (score[a] == score[b] && ids[a] < ids[b]);
  });
  const std::size_t dense = std::max<std::size_t>(1, (s + 3) / 4);

  QueryWorkload wl;
  wl.k = k;
  wl.queries.reserve(q_count);
  std::uniform_int_distribution<std::size_t> draw(0, dense - 1);
  for (std::size_t i = 0; i < q_count; ++i) {
    wl.queries.push_back(ds.point(ids[order[draw(rng)]]));
  }
  return wl;
}

void save_workload(const QueryWorkload& wl, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  for (const auto& q : wl.queries) f << q.id << '\n';
}

QueryWorkload load_workload(const Dataset& ds, const std::filesystem::path& path,
                            std::size_t k) {
  if (k == 0 || k > kMaxK) throw Error("load_workload: k must be in [1, 100]");
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path.string());
  QueryWorkload wl;
  wl.k = k;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    PointId id = 0;
    try {
      std::size_t used = 0;
      id = std::stoull(line, &used);
    } catch (const std::exception&) {
      throw Error("bad point id at line " + std::to_string(line_no));
    }
    if (id >= ds.n()) throw Error("point id out of range at line " + std::to_string(line_no));
    wl.queries.push_back(ds.point(id));
  }
  if (wl.queries.empty()) throw Error("workload file has no queries");
  return wl;
}

std::vector<Neighbor> brute_force_knn(const Dataset& ds,
                                      std::span<const double> q,
                                      std::size_t k) {
  if (k == 0 || k > ds.n()) throw Error("brute_force_knn: k must be in [1, n]");
  if (q.size() != ds.d()) throw Error("brute_force_knn: dimension mismatch");
  std::vector<double> sq(ds.n());
  kernels::omp::squared_distances({ds.coords(), ds.n(), ds.d()}, q, sq);
  std::vector<Neighbor> all(ds.n());
  for (PointId i = 0; i < ds.n(); ++i) all[i] = {i, std::sqrt(sq[i])};
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k),
                    all.end(), neighbor_less);
  all.resize(k);
  return all;
}

}  // namespace qwlsh
