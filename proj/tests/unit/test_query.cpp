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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qwlsh/btree.hpp"
#include "qwlsh/error.hpp"
#include "qwlsh/index.hpp"
#include "qwlsh/query.hpp"
#include "qwlsh/workload.hpp"
#include "test_util.hpp"

using namespace qwlsh;
using testutil::TempDir;

namespace {

LshParams params_with_m(std::size_t n, std::size_t m) {
  return with_projections(derive_params(kDefaultRatio, kDefaultWidth, kDefaultDelta, n), m);
}

// Index over 10 one-dimensional points whose first tree is replaced by one
// holding keys 1..10 for ids 0..9.
LshIndex keys_one_to_ten(const std::filesystem::path& dir) {
  std::vector<double> c(10);
  for (int i = 0; i < 10; ++i) c[i] = i;
  build_index(Dataset("ten", 10, 1, c), params_with_m(10, 2), 1, dir);
  std::vector<btree::Entry> e;
  for (int i = 0; i < 10; ++i) e.push_back({static_cast<double>(i + 1), static_cast<PointId>(i)});
  btree::write_tree(LshIndex::tree_path(dir, 0), e, kDefaultPageSize);
  return load_index(dir);
}

std::vector<PointId> sorted(std::vector<PointId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("range scan over keys 1..10 with resume") {
  TempDir tmp;
  const auto idx = keys_one_to_ten(tmp / "idx");
  BufferCache cache(CacheConfig{}, 2);
  const auto view = open_index(idx, cache);

  std::optional<ScanCursor> cur;
  // ids are key - 1
  CHECK(sorted(range_scan(view, 0, 3.5, 6.2, cur)) == std::vector<PointId>{3, 4, 5});
  CHECK(sorted(range_scan(view, 0, 2.5, 7.2, cur)) == std::vector<PointId>{2, 6});
  CHECK(range_scan(view, 0, 2.5, 7.2, cur).empty());
  CHECK(sorted(range_scan(view, 0, 0.0, 100.0, cur)) == std::vector<PointId>{0, 1, 7, 8, 9});
  CHECK(cur->exhausted());

  std::optional<ScanCursor> empty;
  CHECK(range_scan(view, 0, 20.0, 30.0, empty).empty());
  CHECK_THROWS_AS(range_scan(view, 0, 2.0, 1.0, empty), Error);
  CHECK_THROWS_AS(range_scan(view, 1, 0.0, 1.0, cur), Error);
}

TEST_CASE("staged widening equals one wide scan") {
  TempDir tmp;
  const auto ds = testutil::uniform_dataset(3000, 4, 8);
  const auto idx = build_index(ds, params_with_m(3000, 2), 3, tmp / "idx");
  BufferCache cache(CacheConfig{}, 2);
  const auto view = open_index(idx, cache);
  const double centre = project(idx.functions()[1], ds.row(17));

  std::optional<ScanCursor> staged;
  std::vector<PointId> got;
  double half = 0.01;
  for (int round = 0; round < 8; ++round, half *= 2) {
    const auto ids = range_scan(view, 1, centre - half, centre + half, staged);
    got.insert(got.end(), ids.begin(), ids.end());
  }
  half /= 2;
  std::optional<ScanCursor> once;
  const auto wide = range_scan(view, 1, centre - half, centre + half, once);

  // Oracle: keys computed directly from the hash function.
  std::vector<PointId> expect;
  for (PointId i = 0; i < ds.n(); ++i) {
    const double k = project(idx.functions()[1], ds.row(i));
    if (k >= centre - half && k <= centre + half) expect.push_back(i);
  }
  CHECK(sorted(got) == sorted(expect));
  CHECK(sorted(wide) == sorted(expect));
  CHECK(got.size() == sorted(got).size());
}

TEST_CASE("verify reads whole records through the data cache") {
  TempDir tmp;
  const auto ds = testutil::uniform_dataset(4, 3000, 9);
  const auto idx = build_index(ds, params_with_m(4, 2), 1, tmp / "idx");
  BufferCache cache(CacheConfig{}, 2);
  const auto view = open_index(idx, cache);

  const std::vector<PointId> self{0};
  const auto r = verify_candidates(view, ds.row(0), self);
  REQUIRE(r.size() == 1);
  CHECK(r[0].id == 0);
  CHECK(r[0].dist == 0.0);
  CHECK(cache.io_report().data_io_bytes == 6 * 4096);
  CHECK(cache.io_report().index_io_bytes == 0);

  const std::vector<PointId> all{3, 1, 2, 0};
  const auto v = verify_candidates(view, ds.row(2), all);
  const auto bf = brute_force_knn(ds, ds.row(2), 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(v[i].id == bf[i].id);
    CHECK(v[i].dist == doctest::Approx(bf[i].dist).epsilon(1e-12));
  }
}

TEST_CASE("knn on a hand-built 2-d set") {
  TempDir tmp;
  const Dataset ds("five", 5, 2, {0, 0, 1, 0, 0, 1, 5, 5, -3, 2});
  const auto idx = build_index(ds, derive_params(2.0, 2.719, kDefaultDelta, 5), 4, tmp / "idx");
  BufferCache cache(CacheConfig{}, idx.m());
  const auto view = open_index(idx, cache);
  const std::vector<double> q{0.9, 0.2};
  const auto res = knn_query(view, q, 1);
  const auto bf = brute_force_knn(ds, q, 1);
  REQUIRE(res.neighbors.size() == 1);
  CHECK(res.neighbors[0].dist <= 2.0 * bf[0].dist);

  // k larger than n returns every point.
  CHECK(knn_query(view, q, 10).neighbors.size() == 5);
  CHECK_THROWS_AS(knn_query(view, q, 0), Error);
  CHECK_THROWS_AS(knn_query(view, q, 101), Error);
}

TEST_CASE("duplicate queries find themselves; candidate bound holds") {
  TempDir tmp;
  MixtureSpec s;
  s.n = 5000;
  s.d = 32;
  const auto ds = make_gaussian_mixture(s);
  const auto idx = build_index(ds, derive_params(2.0, 2.719, kDefaultDelta, ds.n()), 2, tmp / "idx");
  BufferCache cache(CacheConfig{}, idx.m());
  const auto view = open_index(idx, cache);
  const auto wl = generate_workload(ds, 40, 20, 6);
  const auto run = run_queries(view, wl, true);
  REQUIRE(run.results.size() == 40);
  for (std::size_t i = 0; i < 40; ++i) {
    const auto& r = run.results[i];
    REQUIRE(r.size() == 20);
    CHECK(r[0].dist == 0.0);
    CHECK(std::is_sorted(r.begin(), r.end(), neighbor_less));
    CHECK(run.per_query[i].candidates_verified <= 20 + 100);
  }
  IoCounters sum;
  for (const auto& q : run.per_query) {
    sum.index_io_bytes += q.io.index_io_bytes;
    sum.data_io_bytes += q.io.data_io_bytes;
  }
  CHECK(sum.index_io_bytes == run.io.index_io_bytes);
  CHECK(sum.data_io_bytes == run.io.data_io_bytes);
}

TEST_CASE("query results are deterministic") {
  TempDir tmp;
  const auto ds = testutil::uniform_dataset(2000, 16, 12);
  const auto idx = build_index(ds, derive_params(2.0, 2.719, kDefaultDelta, ds.n()), 3, tmp / "idx");
  const auto wl = generate_workload(ds, 20, 10, 1);
  BufferCache a(CacheConfig{}, idx.m()), b(CacheConfig{}, idx.m());
  const auto ra = run_queries(open_index(idx, a), wl, true);
  const auto rb = run_queries(open_index(idx, b), wl, true);
  CHECK(ra.io == rb.io);
  CHECK(ra.results == rb.results);
}

TEST_CASE("radius cap falls back to exact verification") {
  TempDir tmp;
  // Points far beyond the largest scan window around the query.
  const Dataset ds("far", 4, 1, {0.0, 1e13, -2e13, 3e13});
  const auto idx = build_index(ds, derive_params(2.0, 2.719, kDefaultDelta, 4), 1, tmp / "idx");
  BufferCache cache(CacheConfig{}, idx.m());
  const auto view = open_index(idx, cache);
  const std::vector<double> q{4e12};
  const auto res = knn_query(view, q, 3);
  CHECK(res.stats.used_fallback);
  const auto bf = brute_force_knn(ds, q, 3);
  REQUIRE(res.neighbors.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(res.neighbors[i].id == bf[i].id);
    CHECK(res.neighbors[i].dist == doctest::Approx(bf[i].dist));
  }
}
