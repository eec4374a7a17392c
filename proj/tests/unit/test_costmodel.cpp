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

#include <cmath>
#include <fstream>

#include "qwlsh/costmodel.hpp"
#include "qwlsh/error.hpp"
#include "qwlsh/index.hpp"
#include "qwlsh/workload.hpp"
#include "test_util.hpp"

using namespace qwlsh;
using testutil::TempDir;

namespace {

CostModel toy_model() {
  CostModel m;
  m.cards = {10000, 40000};
  m.dims = {64, 256};
  m.entries = {{10000, 64, 0.6, 1000}, {10000, 256, 0.2, 2000},
               {40000, 64, 0.9, 3000}, {40000, 256, 0.5, 4000}};
  m.trained_cache_bytes = 16ull << 20;
  m.trained_q_count = 250;
  m.alpha_card = 12.5;
  m.alpha_dim = 3.25;
  return m;
}

bool in_sweep(double f) {
  for (double s : kSweepFractions)
    if (s == f) return true;
  return false;
}

}  // namespace

TEST_CASE("interpolation is exact on the lattice") {
  const auto m = toy_model();
  for (const auto& e : m.entries) {
    CHECK(interpolate_fraction(m, e.cardinality, e.dimensionality) == doctest::Approx(e.best_fraction));
    CHECK(lookup_fraction(m, e.cardinality, e.dimensionality) == doctest::Approx(e.best_fraction));
  }
}

TEST_CASE("interpolation is bilinear in log2 space and clamped") {
  const auto m = toy_model();
  // Geometric midpoint on both axes: plain average of the four corners.
  CHECK(interpolate_fraction(m, 20000, 128) == doctest::Approx((0.6 + 0.2 + 0.9 + 0.5) / 4));
  // Midpoint in card at d=64.
  CHECK(interpolate_fraction(m, 20000, 64) == doctest::Approx(0.75));
  // Outside the lattice clamps to the edge.
  CHECK(interpolate_fraction(m, 1000, 32) == doctest::Approx(0.6));
  CHECK(interpolate_fraction(m, 1000000, 100000) == doctest::Approx(0.5));
}

TEST_CASE("rounding to the sweep settings") {
  CHECK(round_to_setting(0.4541) == doctest::Approx(0.5));
  CHECK(round_to_setting(0.449) == doctest::Approx(0.4));
  CHECK(round_to_setting(0.45) == doctest::Approx(0.5));
  CHECK(round_to_setting(0.0) == doctest::Approx(0.01));
  CHECK(round_to_setting(0.05) == doctest::Approx(0.01));
  CHECK(round_to_setting(0.056) == doctest::Approx(0.10));
  CHECK(round_to_setting(0.96) == doctest::Approx(0.99));
  CHECK(round_to_setting(1.0) == doctest::Approx(0.99));
  for (double f = 0.0; f <= 1.0; f += 0.013) CHECK(in_sweep(round_to_setting(f)));
}

TEST_CASE("least-squares slope") {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{3, 5, 7, 9};
  CHECK(fit_slope(x, y) == doctest::Approx(2.0));
  const std::vector<double> flat{2, 2, 2, 2};
  CHECK(fit_slope(flat, y) == 0.0);
}

TEST_CASE("model file round trip and errors") {
  TempDir tmp;
  const auto m = toy_model();
  save_model(m, tmp / "m.txt");
  CHECK(load_model(tmp / "m.txt") == m);

  const auto text = testutil::read_bytes(tmp / "m.txt");
  testutil::write_text(tmp / "trunc.txt", text.substr(0, text.rfind('\n', text.size() - 2) + 1));
  CHECK_THROWS_AS(load_model(tmp / "trunc.txt"), Error);

  auto v2 = text;
  v2.replace(v2.find("v1"), 2, "v2");
  testutil::write_text(tmp / "v2.txt", v2);
  CHECK_THROWS_WITH_AS(load_model(tmp / "v2.txt"), doctest::Contains("version"), Error);

  testutil::write_text(tmp / "junk.txt", "hello\n");
  CHECK_THROWS_AS(load_model(tmp / "junk.txt"), Error);
}

TEST_CASE("validate rejects malformed lattices") {
  auto m = toy_model();
  CHECK_NOTHROW(m.validate());
  m.entries.pop_back();
  CHECK_THROWS_AS(m.validate(), Error);
  m = toy_model();
  m.dims = {256, 64};
  CHECK_THROWS_AS(m.validate(), Error);
  m = toy_model();
  m.entries[0].best_fraction = 1.5;
  CHECK_THROWS_AS(m.validate(), Error);
}

TEST_CASE("sweep picks the minimum and breaks ties low") {
  std::vector<SweepRow> rows;
  for (double f : kSweepFractions) {
    SweepRow r;
    r.fraction = f;
    r.io.index_io_bytes = static_cast<std::uint64_t>(std::abs(f - 0.35) * 1000) / 100 * 100;
    rows.push_back(r);
  }
  // 0.3 and 0.4 both round to 0 extra bytes; the smaller wins.
  CHECK(best_row(rows).fraction == doctest::Approx(0.3));
}

TEST_CASE("training a 2x2 lattice") {
  TempDir tmp;
  MixtureSpec s;
  s.n = 6000;
  s.d = 64;
  s.seed = 3;
  const auto base = make_gaussian_mixture(s);
  TrainOptions o;
  o.cache_bytes = 1ull << 20;
  o.q_count = 30;
  o.k = 10;
  o.work_dir = tmp / "work";
  const auto m = train(base, {3000, 6000}, {32, 64}, o);
  REQUIRE(m.entries.size() == 4);
  for (const auto& e : m.entries) {
    CHECK(in_sweep(e.best_fraction));
    CHECK(e.total_io_at_best > 0);
  }
  CHECK(m.at(1, 0).cardinality == 6000);
  CHECK(m.at(1, 0).dimensionality == 32);
  CHECK(m.trained_cache_bytes == (1ull << 20));
  CHECK(m.trained_q_count == 30);
  CHECK_NOTHROW(m.validate());
  CHECK_FALSE(std::filesystem::exists(tmp / "work" / "n3000_d32"));

  // Each entry is the argmin of an independent sweep on the same sub-dataset.
  o.keep_indexes = true;
  o.work_dir = tmp / "keep";
  const auto again = train(base, {3000}, {32}, o);
  const auto idx = load_index(tmp / "keep" / "n3000_d32");
  const auto sub = prefix(base, 3000, 32);
  const auto wl = generate_workload(sub, 30, 10, o.seed);
  const auto rows = sweep_fractions(idx, wl, o.cache_bytes);
  CHECK(again.at(0, 0).best_fraction == best_row(rows).fraction);
  CHECK(again.at(0, 0).best_fraction == m.at(0, 0).best_fraction);
}
