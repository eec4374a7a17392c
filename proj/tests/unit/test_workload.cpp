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

#include "qwlsh/error.hpp"
#include "qwlsh/workload.hpp"
#include "test_util.hpp"

using namespace qwlsh;

namespace {

// Full sort by (dist, id) over every point; the reference for brute_force_knn.
std::vector<Neighbor> full_sort(const Dataset& ds, std::span<const double> q) {
  std::vector<Neighbor> all;
  for (PointId i = 0; i < ds.n(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < ds.d(); ++j) s += (ds.row(i)[j] - q[j]) * (ds.row(i)[j] - q[j]);
    all.push_back({i, std::sqrt(s)});
  }
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.dist != b.dist ? a.dist < b.dist : a.id < b.id;
  });
  return all;
}

}  // namespace

TEST_CASE("brute force on a line") {
  const Dataset ds("line", 3, 1, {0.0, 1.0, 5.0});
  const std::vector<double> q{0.4};
  const auto r = brute_force_knn(ds, q, 2);
  REQUIRE(r.size() == 2);
  CHECK(r[0].id == 0);
  CHECK(r[1].id == 1);
  CHECK(r[0].dist == doctest::Approx(0.4));
  CHECK_THROWS_AS(brute_force_knn(ds, q, 4), Error);
  CHECK_THROWS_AS(brute_force_knn(ds, q, 0), Error);
}

TEST_CASE("brute force identity and reference agreement") {
  const auto ds = testutil::uniform_dataset(100, 8, 11);
  const auto self = brute_force_knn(ds, ds.row(7), 1);
  REQUIRE(self.size() == 1);
  CHECK(self[0].id == 7);
  CHECK(self[0].dist == 0.0);

  for (std::size_t k : {1u, 10u, 100u}) {
    const auto got = brute_force_knn(ds, ds.row(3), k);
    const auto ref = full_sort(ds, ds.row(3));
    REQUIRE(got.size() == k);
    for (std::size_t i = 0; i < k; ++i) {
      CHECK(got[i].id == ref[i].id);
      CHECK(got[i].dist == doctest::Approx(ref[i].dist).epsilon(1e-12));
    }
  }
}

TEST_CASE("brute force breaks ties by id") {
  const Dataset ds("ties", 4, 1, {1.0, -1.0, 1.0, -1.0});
  const std::vector<double> q{0.0};
  const auto r = brute_force_knn(ds, q, 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(r[i].id == i);
}

TEST_CASE("workload size, membership and determinism") {
  MixtureSpec s;
  s.n = 3000;
  s.d = 16;
  const auto ds = make_gaussian_mixture(s);
  const auto wl = generate_workload(ds, 250, 50, 42);
  CHECK(wl.queries.size() == 250);
  CHECK(wl.k == 50);
  for (const auto& q : wl.queries) {
    REQUIRE(q.id < ds.n());
    CHECK(std::equal(q.coords.begin(), q.coords.end(), ds.row(q.id).begin()));
  }
  const auto again = generate_workload(ds, 250, 50, 42);
  bool same = true;
  for (std::size_t i = 0; i < 250; ++i) same = same && again.queries[i].id == wl.queries[i].id;
  CHECK(same);
  CHECK_THROWS_AS(generate_workload(ds, 0, 50, 1), Error);
  CHECK_THROWS_AS(generate_workload(ds, 10, 101, 1), Error);
}

TEST_CASE("workload favours the dense cluster") {
  // Two equal-size 2-d Gaussian clusters; the first has 10x the point density
  // (standard deviation smaller by sqrt(10)).
  const std::size_t per = 1000;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<double> c;
  for (std::size_t i = 0; i < per; ++i) {
    c.push_back(g(rng));
    c.push_back(g(rng));
  }
  const double wide = std::sqrt(10.0);
  for (std::size_t i = 0; i < per; ++i) {
    c.push_back(100.0 + wide * g(rng));
    c.push_back(wide * g(rng));
  }
  const Dataset ds("two", 2 * per, 2, std::move(c));
  const auto wl = generate_workload(ds, 1000, 10, 3);
  const auto dense = std::count_if(wl.queries.begin(), wl.queries.end(),
                                   [&](const Point& p) { return p.id < per; });
  CHECK(dense >= 900);
}

TEST_CASE("workload file round trip") {
  testutil::TempDir tmp;
  const auto ds = testutil::uniform_dataset(200, 4, 1);
  const auto wl = generate_workload(ds, 30, 5, 8);
  save_workload(wl, tmp / "q.txt");
  const auto back = load_workload(ds, tmp / "q.txt", 5);
  REQUIRE(back.queries.size() == 30);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(back.queries[i].id == wl.queries[i].id);
    CHECK(back.queries[i].coords == wl.queries[i].coords);
  }
  testutil::write_text(tmp / "bad.txt", "1\n999\n");
  CHECK_THROWS_AS(load_workload(ds, tmp / "bad.txt", 5), Error);
}
