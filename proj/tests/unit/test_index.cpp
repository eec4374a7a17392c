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
#include <fstream>
#include <limits>

#include "qwlsh/error.hpp"
#include "qwlsh/index.hpp"
#include "qwlsh/query.hpp"
#include "test_util.hpp"

using namespace qwlsh;
using testutil::TempDir;

namespace {

LshParams params_with_m(std::size_t n, std::size_t m) {
  return with_projections(derive_params(kDefaultRatio, kDefaultWidth, kDefaultDelta, n), m);
}

}  // namespace

TEST_CASE("build writes one full tree per projection") {
  TempDir tmp;
  const auto ds = testutil::uniform_dataset(1000, 12, 1);
  const auto idx = build_index(ds, params_with_m(1000, 10), 7, tmp / "idx");
  CHECK(idx.m() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(std::filesystem::exists(LshIndex::tree_path(idx.dir(), i)));
    CHECK(idx.tree_header(i).entry_count == 1000);
  }
  CHECK(idx.data_bytes() == 1000 * 12 * 8);

  const auto back = read_index_dataset(idx);
  CHECK(std::equal(ds.coords().begin(), ds.coords().end(), back.coords().begin(), back.coords().end()));
}

TEST_CASE("tree keys are the projections of the points") {
  TempDir tmp;
  const auto ds = testutil::uniform_dataset(300, 5, 2);
  const auto idx = build_index(ds, params_with_m(300, 3), 11, tmp / "idx");
  const auto fs = sample_hash_functions(3, 5, kDefaultWidth, 11);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(fs[i].a == idx.functions()[i].a);
    // Walk the leaf chain straight from disk.
    const auto& src = *idx.tree_source(i);
    std::vector<std::byte> buf(src.page_size());
    const auto h = btree::read_header(src);
    std::size_t seen = 0;
    bool keys_match = true;
    for (std::uint64_t p = h.leaf_head; p != btree::kNoPage;) {
      src.read(p, buf);
      btree::LeafView leaf(buf);
      for (std::size_t s = 0; s < leaf.count(); ++s, ++seen) {
        const auto e = leaf.entry(s);
        keys_match = keys_match && e.key == project(fs[i], ds.row(e.id));
      }
      p = leaf.next();
    }
    CHECK(keys_match);
    CHECK(seen == 300);
  }
}

TEST_CASE("rebuild with the same seed is byte identical") {
  TempDir tmp;
  const auto ds = testutil::uniform_dataset(800, 9, 3);
  build_index(ds, params_with_m(800, 4), 5, tmp / "a");
  build_index(ds, params_with_m(800, 4), 5, tmp / "b");
  for (const auto& e : std::filesystem::directory_iterator(tmp / "a")) {
    const auto name = e.path().filename();
    CHECK(testutil::read_bytes(e.path()) == testutil::read_bytes(tmp.path() / "b" / name));
  }
  build_index(ds, params_with_m(800, 4), 6, tmp / "c");
  CHECK(testutil::read_bytes(tmp.path() / "a" / "proj_0.tree") !=
        testutil::read_bytes(tmp.path() / "c" / "proj_0.tree"));
}

TEST_CASE("load round trip and corruption") {
  TempDir tmp;
  const auto ds = testutil::uniform_dataset(500, 6, 4);
  const auto built = build_index(ds, derive_params(2.0, 2.719, kDefaultDelta, 500), 9, tmp / "idx");
  const auto loaded = load_index(tmp / "idx");
  CHECK(loaded.params() == built.params());
  CHECK(loaded.seed() == 9);
  CHECK(loaded.meta().n == 500);
  CHECK(loaded.meta().d == 6);
  CHECK(loaded.m() == built.m());

  {
    std::fstream f(tmp / "idx" / "header", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXX", 4);
  }
  CHECK_THROWS_AS(load_index(tmp / "idx"), Error);
  CHECK_THROWS_AS(load_index(tmp / "missing"), Error);
}

TEST_CASE("opening registers every file with the cache") {
  TempDir tmp;
  const auto ds = testutil::uniform_dataset(400, 6, 5);
  const auto idx = build_index(ds, params_with_m(400, 5), 1, tmp / "idx");
  BufferCache cache(CacheConfig{}, 5);
  const auto view = open_index(idx, cache);
  for (std::size_t i = 0; i < 5; ++i) CHECK(cache.kind_of(view.tree_file(i)) == FileKind::kIndex);
  CHECK(cache.kind_of(view.data_file()) == FileKind::kData);
  CHECK(cache.page_count(view.data_file()) == (400 * 6 * 8 + 4095) / 4096);

  BufferCache wrong(CacheConfig{}, 4);
  CHECK_THROWS_AS(open_index(idx, wrong), Error);
  CacheConfig other;
  other.page_size = 1024;
  BufferCache wrong_page(other, 5);
  CHECK_THROWS_AS(open_index(idx, wrong_page), Error);
}

TEST_CASE("full range scan yields every id once") {
  TempDir tmp;
  const auto ds = testutil::uniform_dataset(1000, 8, 6);
  const auto idx = build_index(ds, params_with_m(1000, 3), 2, tmp / "idx");
  BufferCache cache(CacheConfig{}, 3);
  const auto view = open_index(idx, cache);
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 3; ++i) {
    std::optional<ScanCursor> cur;
    auto ids = range_scan(view, i, -inf, inf, cur);
    REQUIRE(ids.size() == 1000);
    std::sort(ids.begin(), ids.end());
    bool dense = true;
    for (std::size_t j = 0; j < 1000; ++j) dense = dense && ids[j] == j;
    CHECK(dense);
  }
}
