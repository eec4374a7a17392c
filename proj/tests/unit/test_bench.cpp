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

#include <sstream>

#include "qwlsh/bench.hpp"
#include "qwlsh/costmodel.hpp"
#include "qwlsh/error.hpp"
#include "qwlsh/index.hpp"
#include "qwlsh/query.hpp"
#include "qwlsh/workload.hpp"
#include "test_util.hpp"

using namespace qwlsh;
using testutil::TempDir;

namespace {

struct Fixture {
  TempDir tmp;
  Dataset ds;
  LshIndex idx;
  QueryWorkload wl;
  Fixture() {
    MixtureSpec s;
    s.n = 4000;
    s.d = 48;
    s.seed = 21;
    ds = make_gaussian_mixture(s);
    idx = build_index(ds, derive_params(2.0, 2.719, kDefaultDelta, ds.n()), 4, tmp / "idx");
    wl = generate_workload(ds, 40, 10, 2);
  }
};

CostModel single_point_model(double fraction) {
  CostModel m;
  m.cards = {1000};
  m.dims = {10};
  m.entries = {{1000, 10, fraction, 1}};
  return m;
}

}  // namespace

TEST_CASE("alternative names and fixed fractions") {
  for (auto a : all_alternatives()) CHECK(parse_alternative(to_string(a)) == a);
  CHECK_THROWS_AS(parse_alternative("best"), Error);
  CHECK(fixed_fraction(Alternative::kCi) == 0.99);
  CHECK(fixed_fraction(Alternative::kCd) == 0.01);
  CHECK(fixed_fraction(Alternative::kCiCd) == 0.50);
  CHECK_FALSE(fixed_fraction(Alternative::kNaive));
  CHECK_FALSE(fixed_fraction(Alternative::kOpt));
}

TEST_CASE("run_workload identity and determinism") {
  Fixture f;
  CacheConfig cfg;
  cfg.total_bytes = 1ull << 20;
  const auto a = run_workload(f.idx, cfg, f.wl);
  const auto b = run_workload(f.idx, cfg, f.wl);
  CHECK(a.total_io() == a.index_io() + a.data_io());
  CHECK(a.total_io() > 0);
  CHECK(a.io == b.io);
  CHECK(a.q_count == 40);
  CHECK(a.k == 10);
  CHECK(a.max_candidates_verified <= 110);
}

TEST_CASE("warm cache holding every file incurs no further misses") {
  Fixture f;
  CacheConfig cfg;
  cfg.strategy = Strategy::kUnified;
  cfg.total_bytes = 4 * (f.idx.index_bytes() + f.idx.data_bytes());
  BufferCache cache(cfg, f.idx.m());
  const auto view = open_index(f.idx, cache);
  const auto cold = run_queries(view, f.wl);
  CHECK(cold.io.total_io_bytes() > 0);
  const auto warm = run_queries(view, f.wl);
  CHECK(warm.io.index_misses == 0);
  CHECK(warm.io.data_misses == 0);
  CHECK(warm.io.total_io_bytes() == 0);
}

TEST_CASE("opt dominates every fixed split and the model") {
  Fixture f;
  const auto model = single_point_model(0.7);
  const auto cmp = compare_alternatives(f.idx, f.wl, 1ull << 20, &model);
  CHECK(cmp.reports.size() == 6);
  CHECK(cmp.opt_sweep.size() == kSweepFractions.size());
  const auto opt = cmp.get(Alternative::kOpt).total_io();
  for (auto a : {Alternative::kCi, Alternative::kCd, Alternative::kCiCd, Alternative::kQwLsh})
    CHECK(opt <= cmp.get(a).total_io());
  for (const auto& r : cmp.opt_sweep) CHECK(opt <= r.total_io());
  CHECK(cmp.get(Alternative::kQwLsh).fraction == 0.7);
  CHECK(cmp.get(Alternative::kCd).fraction == 0.01);
  CHECK_FALSE(cmp.get(Alternative::kNaive).fraction.has_value());
  CHECK(cmp.get(Alternative::kNaive).strategy == Strategy::kUnified);

  // Fixed splits agree with running that fraction directly.
  CacheConfig cfg;
  cfg.total_bytes = 1ull << 20;
  cfg.index_fraction = 0.5;
  CHECK(run_workload(f.idx, cfg, f.wl).io == cmp.get(Alternative::kCiCd).io);

  CompareOptions par;
  par.parallel = true;
  par.repeats = 2;
  const auto cmp2 = compare_alternatives(f.idx, f.wl, 1ull << 20, &model, all_alternatives(), par);
  CHECK(cmp2.reports.size() == 12);
  for (auto a : all_alternatives()) {
    CHECK(cmp2.get(a, 0).io == cmp.get(a).io);
    CHECK(cmp2.get(a, 1).io == cmp.get(a).io);
  }
  CHECK_THROWS_AS(compare_alternatives(f.idx, f.wl, 1ull << 20, nullptr), Error);
}

TEST_CASE("sweep columns trend with the fraction") {
  Fixture f;
  const auto rows = sweep_report(f.idx, f.wl, 1ull << 20);
  REQUIRE(rows.size() == 11);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].fraction == kSweepFractions[i]);
    CHECK(rows[i].total_io() == rows[i].index_io() + rows[i].data_io());
    if (i > 0) {
      CHECK(static_cast<double>(rows[i].index_io()) <= 1.02 * static_cast<double>(rows[i - 1].index_io()));
      CHECK(static_cast<double>(rows[i].data_io()) >= 0.98 * static_cast<double>(rows[i - 1].data_io()));
    }
  }
}

TEST_CASE("csv schema") {
  WorkloadReport r;
  r.alt = "cicd";
  r.dataset = "toy";
  r.n = 10;
  r.d = 3;
  r.cache_bytes = 4096;
  r.fraction = 0.5;
  r.q_count = 2;
  r.k = 1;
  r.io.index_io_bytes = 100;
  r.io.data_io_bytes = 23;
  r.wall_ms = 1.5;
  r.repeat = 1;
  std::ostringstream out;
  write_csv(out, {r});
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "alt,dataset,n,d,cache_bytes,fraction,strategy,q_count,k,index_io,data_io,total_io,wall_ms,repeat");
  CHECK(row.rfind("cicd,toy,10,3,4096,0.5,1,2,1,100,23,123,", 0) == 0);
  CHECK(row.substr(row.rfind(',')) == ",1");

  r.fraction.reset();
  r.strategy = Strategy::kUnified;
  std::ostringstream u;
  write_csv_row(u, r);
  CHECK(u.str().find(",4096,,unified,") != std::string::npos);
}
