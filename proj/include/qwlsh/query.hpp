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
#include <optional>
#include <span>
#include <vector>

#include "qwlsh/buffer_cache.hpp"
#include "qwlsh/dataset.hpp"
#include "qwlsh/index.hpp"
#include "qwlsh/workload.hpp"

namespace qwlsh {

inline constexpr int kMaxRadiusExponent = 30;

// Resumable scan over one projection's leaf chain, anchored at a key. The
// right side walks keys >= anchor upward, the left side keys < anchor
// downward. Each side pins a private copy of its current leaf, so resuming
// a scan never re-reads a page; only crossing into a new leaf goes through
// the cache.
class ScanCursor {
 public:
  // Descends from the root to the first key >= anchor.
  ScanCursor(const CachedIndex& view, std::size_t projection, double anchor);

  std::size_t projection() const { return projection_; }
  FileId file() const { return file_; }
  double anchor() const { return anchor_; }
  bool exhausted() const { return left_.done && right_.done; }

  // Next not-yet-yielded id whose key lies in [lo, hi], closest to the
  // anchor first; nullopt once neither side has an in-range entry.
  std::optional<PointId> next(const CachedIndex& view, double lo, double hi);

 private:
  struct Side {
    std::uint64_t page = btree::kNoPage;
    std::size_t slot = 0;
    std::vector<std::byte> leaf;
    bool done = false;
  };

  void load(const CachedIndex& view, Side& side, std::uint64_t page);
  std::optional<double> peek_right(const CachedIndex& view);
  std::optional<double> peek_left(const CachedIndex& view);

  std::size_t projection_;
  FileId file_;
  double anchor_;
  Side left_;
  Side right_;
};

// Ids with key in [lo, hi] not yielded by earlier scans through `cursor`.
// A missing cursor is created anchored at lo. Throws on a cursor that
// belongs to another tree.
std::vector<PointId> range_scan(const CachedIndex& view, std::size_t projection,
                                double lo, double hi,
                                std::optional<ScanCursor>& cursor);

// Fetches each record through the data partition and returns exact
// distances sorted by (dist, id).
std::vector<Neighbor> verify_candidates(const CachedIndex& view,
                                        std::span<const double> q,
                                        std::span<const PointId> ids);

struct QueryStats {
  std::size_t candidates_verified = 0;
  double final_radius = 1.0;
  std::size_t rounds = 0;
  bool hit_candidate_bound = false;
  bool used_fallback = false;
  IoCounters io;
};

struct QueryResult {
  std::vector<Neighbor> neighbors;
  QueryStats stats;
};

// c-k-ANN search by collision counting with virtual rehashing.
QueryResult knn_query(const CachedIndex& view, std::span<const double> q,
                      std::size_t k);

struct WorkloadRun {
  IoCounters io;
  std::vector<QueryStats> per_query;
  std::vector<std::vector<Neighbor>> results;
};

// Executes the queries in order against the cache as it currently is (no
// reset). Counter deltas cover exactly this run.
WorkloadRun run_queries(const CachedIndex& view, const QueryWorkload& wl,
                        bool keep_results = false);

}  // namespace qwlsh
