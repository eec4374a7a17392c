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

#include "qwlsh/query.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "qwlsh/bytes.hpp"
#include "qwlsh/error.hpp"
#include "qwlsh/kernels.hpp"

namespace qwlsh {

ScanCursor::ScanCursor(const CachedIndex& view, std::size_t projection, double anchor)
    : projection_(projection), file_(view.tree_file(projection)), anchor_(anchor) {
  const auto& header = view.index().tree_header(projection);
  std::uint64_t page = header.root;
  for (std::uint32_t level = 1; level < header.height; ++level) {
    const auto pv = view.cache().read_page({file_, page});
    page = btree::InternalView(pv.bytes).route(anchor);
  }
  load(view, right_, page);
  right_.slot = btree::LeafView(right_.leaf).lower_bound(anchor);
  left_.page = right_.page;
  left_.leaf = right_.leaf;
  left_.slot = right_.slot;
}

void ScanCursor::load(const CachedIndex& view, Side& side, std::uint64_t page) {
  const auto pv = view.cache().read_page({file_, page});
  side.leaf.assign(pv.bytes.begin(), pv.bytes.end());
  side.page = page;
}

std::optional<double> ScanCursor::peek_right(const CachedIndex& view) {
  while (!right_.done) {
    btree::LeafView leaf(right_.leaf);
    if (right_.slot < leaf.count()) return leaf.key(right_.slot);
    if (leaf.next() == btree::kNoPage) {
      right_.done = true;
      break;
    }
    load(view, right_, leaf.next());
    right_.slot = 0;
  }
  return std::nullopt;
}

std::optional<double> ScanCursor::peek_left(const CachedIndex& view) {
  while (!left_.done) {
    btree::LeafView leaf(left_.leaf);
    if (left_.slot > 0) return leaf.key(left_.slot - 1);
    if (leaf.prev() == btree::kNoPage) {
      left_.done = true;
      break;
    }
    load(view, left_, leaf.prev());
    left_.slot = btree::LeafView(left_.leaf).count();
  }
  return std::nullopt;
}

std::optional<PointId> ScanCursor::next(const CachedIndex& view, double lo, double hi) {
  auto rk = peek_right(view);
  if (rk && *rk > hi) rk.reset();
  auto lk = peek_left(view);
  if (lk && *lk < lo) lk.reset();
  if (!rk && !lk) return std::nullopt;
  const bool take_right = rk && (!lk || (*rk - anchor_) <= (anchor_ - *lk));
  if (take_right) {
    return btree::LeafView(right_.leaf).entry(right_.slot++).id;
  }
  return btree::LeafView(left_.leaf).entry(--left_.slot).id;
}

std::vector<PointId> range_scan(const CachedIndex& view, std::size_t projection,
                                double lo, double hi,
                                std::optional<ScanCursor>& cursor) {
  if (!(lo <= hi)) throw Error("range_scan: lo must not exceed hi");
  if (projection >= view.index().m()) throw Error("range_scan: no such projection");
  if (!cursor) {
    cursor.emplace(view, projection, lo);
  } else if (cursor->projection() != projection ||
             cursor->file() != view.tree_file(projection)) {
    throw Error("range_scan: cursor belongs to a different tree");
  }
  std::vector<PointId> out;
  while (auto id = cursor->next(view, lo, hi)) out.push_back(*id);
  return out;
}

namespace {

// Reads one record through the data partition.
void fetch_record(const CachedIndex& view, PointId id, std::vector<std::byte>& raw,
                  std::vector<double>& coords) {
  const std::size_t d = view.index().meta().d;
  const std::size_t page_size = view.index().page_size();
  const std::uint64_t begin = id * d * sizeof(double);
  const std::uint64_t end = begin + d * sizeof(double);
  raw.resize(d * sizeof(double));
  std::uint64_t pos = begin;
  while (pos < end) {
    const std::uint64_t page = pos / page_size;
    const std::uint64_t in_page = pos % page_size;
    const std::uint64_t take = std::min<std::uint64_t>(page_size - in_page, end - pos);
    const auto pv = view.cache().read_page({view.data_file(), page});
    std::memcpy(raw.data() + (pos - begin), pv.bytes.data() + in_page, take);
    pos += take;
  }
  coords.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    coords[j] = load_le<double>(raw.data() + j * sizeof(double));
  }
}

class Verifier {
 public:
  Verifier(const CachedIndex& view, std::span<const double> q) : view_(view), q_(q) {}

  Neighbor operator()(PointId id) {
    if (id >= view_.index().meta().n) throw Error("verify: invalid point id");
    fetch_record(view_, id, raw_, coords_);
    return {id, std::sqrt(kernels::squared_l2(coords_, q_))};
  }

 private:
  const CachedIndex& view_;
  std::span<const double> q_;
  std::vector<std::byte> raw_;
  std::vector<double> coords_;
};

}  // namespace

std::vector<Neighbor> verify_candidates(const CachedIndex& view,
                                        std::span<const double> q,
                                        std::span<const PointId> ids) {
  if (q.size() != view.index().meta().d) throw Error("verify: dimension mismatch");
  Verifier verify(view, q);
  std::vector<Neighbor> out;
  out.reserve(ids.size());
  for (PointId id : ids) out.push_back(verify(id));
  std::sort(out.begin(), out.end(), neighbor_less);
  return out;
}

QueryResult knn_query(const CachedIndex& view, std::span<const double> q,
                      std::size_t k) {
  const LshIndex& idx = view.index();
  const LshParams& params = idx.params();
  const std::size_t n = idx.meta().n;
  if (k == 0 || k > kMaxK) throw Error("knn_query: k must be in [1, 100]");
  if (q.size() != idx.meta().d) throw Error("knn_query: dimension mismatch");

  const IoCounters before = view.cache().io_report();
  const std::size_t m = idx.m();
  const std::size_t max_candidates = k + params.false_positives;
  const std::size_t want = std::min(k, n);

  std::vector<std::uint16_t> counts(n, 0);
  std::vector<std::uint8_t> verified_flag(n, 0);
  std::vector<Neighbor> verified;
  verified.reserve(max_candidates);
  Verifier verify(view, q);

  auto accept = [&](PointId id) {
    verified_flag[id] = 1;
    verified.push_back(verify(id));
  };

  std::vector<double> anchors(m);
  std::vector<ScanCursor> cursors;
  cursors.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    anchors[i] = project(idx.functions()[i], q);
    cursors.emplace_back(view, i, anchors[i]);
  }

  QueryStats stats;
  bool done = false;
  double radius = 1.0;
  for (int round = 0; round <= kMaxRadiusExponent && !done; ++round) {
    radius = std::pow(params.c, round);
    stats.final_radius = radius;
    ++stats.rounds;
    const double half = 0.5 * radius;
    for (std::size_t i = 0; i < m && !done; ++i) {
      while (auto id = cursors[i].next(view, anchors[i] - half, anchors[i] + half)) {
        if (++counts[*id] == params.threshold) {
          accept(*id);
          if (verified.size() >= max_candidates) {
            stats.hit_candidate_bound = true;
            done = true;
            break;
          }
        }
      }
    }
    if (done) break;
    const double limit = params.c * radius;
    const auto close = std::count_if(verified.begin(), verified.end(),
                                     [&](const Neighbor& nb) { return nb.dist <= limit; });
    if (static_cast<std::size_t>(close) >= want) break;
    if (std::all_of(cursors.begin(), cursors.end(),
                    [](const ScanCursor& c) { return c.exhausted(); })) {
      break;
    }
    if (round == kMaxRadiusExponent) {
      // Radius cap reached: verify the highest-count points; if that still
      // leaves fewer than k, verify everything else and keep the nearest.
      stats.used_fallback = true;
      std::vector<PointId> rest;
      for (PointId id = 0; id < n; ++id) {
        if (!verified_flag[id] && counts[id] > 0) rest.push_back(id);
      }
      std::stable_sort(rest.begin(), rest.end(), [&](PointId a, PointId b) {
        return counts[a] > counts[b];
      });
      for (PointId id : rest) {
        if (verified.size() >= max_candidates) break;
        accept(id);
      }
      if (verified.size() < want) {
        for (PointId id = 0; id < n; ++id) {
          if (!verified_flag[id]) accept(id);
        }
      }
    }
  }

  std::sort(verified.begin(), verified.end(), neighbor_less);
  stats.candidates_verified = verified.size();
  verified.resize(std::min(verified.size(), want));
  stats.io = view.cache().io_report() - before;
  return {std::move(verified), stats};
}

WorkloadRun run_queries(const CachedIndex& view, const QueryWorkload& wl,
                        bool keep_results) {
  WorkloadRun run;
  const IoCounters before = view.cache().io_report();
  run.per_query.reserve(wl.queries.size());
  for (const auto& q : wl.queries) {
    auto r = knn_query(view, q.coords, wl.k);
    run.per_query.push_back(r.stats);
    if (keep_results) run.results.push_back(std::move(r.neighbors));
  }
  run.io = view.cache().io_report() - before;
  return run;
}

}  // namespace qwlsh
