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

#include "qwlsh/buffer_cache.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwlsh/error.hpp"

namespace qwlsh {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kStrategy1: return "1";
    case Strategy::kStrategy2: return "2";
    case Strategy::kUnified: return "unified";
  }
  return "?";
}

Strategy parse_strategy(std::string_view s) {
  if (s == "1") return Strategy::kStrategy1;
  if (s == "2") return Strategy::kStrategy2;
  if (s == "unified") return Strategy::kUnified;
  throw Error("unknown cache strategy '" + std::string(s) + "'");
}

IoCounters operator-(const IoCounters& a, const IoCounters& b) {
  return {a.index_io_bytes - b.index_io_bytes, a.data_io_bytes - b.data_io_bytes,
          a.index_hits - b.index_hits,         a.data_hits - b.data_hits,
          a.index_misses - b.index_misses,     a.data_misses - b.data_misses};
}

BufferCache::BufferCache(const CacheConfig& cfg, std::size_t projections)
    : cfg_(cfg), projections_(projections) {
  if (cfg_.page_size == 0) throw Error("page size must be positive");
  if (projections_ == 0) throw Error("cache needs at least one projection");
  if (!(cfg_.index_fraction >= 0.01 && cfg_.index_fraction <= 0.99)) {
    throw Error("index fraction must lie in [0.01, 0.99]");
  }
  total_pages_ = static_cast<std::size_t>(cfg_.total_bytes / cfg_.page_size);

  if (cfg_.strategy == Strategy::kUnified) {
    if (total_pages_ < 2) throw Error("cache too small: need at least 2 pages");
    partitions_.emplace_back(total_pages_, cfg_.page_size);
    data_partition_ = 0;
    return;
  }

  const std::size_t min_index =
      cfg_.strategy == Strategy::kStrategy1 ? projections_ : 1;
  if (total_pages_ < min_index + 1) {
    throw Error("cache too small: " + std::to_string(total_pages_) +
                " pages cannot hold " + std::to_string(min_index) +
                " index partition(s) plus a data partition");
  }
  // Floor goes to the index partition, the remainder to the data partition.
  auto floor_pages = static_cast<std::size_t>(
      std::floor(static_cast<double>(total_pages_) * cfg_.index_fraction));
  index_pages_ = std::clamp(floor_pages, min_index, total_pages_ - 1);
  data_pages_ = total_pages_ - index_pages_;

  if (cfg_.strategy == Strategy::kStrategy1) {
    const std::size_t base = index_pages_ / projections_;
    const std::size_t extra = index_pages_ % projections_;
    for (std::size_t i = 0; i < projections_; ++i) {
      partitions_.emplace_back(base + (i < extra ? 1 : 0), cfg_.page_size);
    }
  } else {
    partitions_.emplace_back(index_pages_, cfg_.page_size);
  }
  data_partition_ = partitions_.size();
  partitions_.emplace_back(data_pages_, cfg_.page_size);
}

std::vector<std::size_t> BufferCache::partition_capacities() const {
  std::vector<std::size_t> out;
  for (const auto& p : partitions_) out.push_back(p.capacity());
  return out;
}

FileId BufferCache::register_index_file(std::size_t projection,
                                        std::shared_ptr<const PageSource> source) {
  if (projection >= projections_) {
    throw Error("projection " + std::to_string(projection) +
                " outside the cache's configured " + std::to_string(projections_));
  }
  if (!source || source->page_size() != cfg_.page_size) {
    throw Error("index file page size does not match the cache");
  }
  std::size_t partition = 0;
  if (cfg_.strategy == Strategy::kStrategy1) partition = projection;
  files_.push_back(File{std::move(source), FileKind::kIndex, partition});
  return static_cast<FileId>(files_.size() - 1);
}

FileId BufferCache::register_data_file(std::shared_ptr<const PageSource> source) {
  if (!source || source->page_size() != cfg_.page_size) {
    throw Error("data file page size does not match the cache");
  }
  files_.push_back(File{std::move(source), FileKind::kData, data_partition_});
  return static_cast<FileId>(files_.size() - 1);
}

FileKind BufferCache::kind_of(FileId file) const {
  if (file >= files_.size()) throw Error("unregistered file");
  return files_[file].kind;
}

std::uint64_t BufferCache::page_count(FileId file) const {
  if (file >= files_.size()) throw Error("unregistered file");
  return files_[file].source->page_count();
}

PageView BufferCache::read_page(PageId pid) {
  if (pid.file >= files_.size()) {
    throw Error("read of unregistered file " + std::to_string(pid.file));
  }
  const File& f = files_[pid.file];
  if (pid.page_no >= f.source->page_count()) {
    throw Error("page " + std::to_string(pid.page_no) + " out of range");
  }
  MruCache& part = partitions_[f.partition];
  const bool is_index = f.kind == FileKind::kIndex;
  if (std::byte* buf = part.find(pid)) {
    ++(is_index ? counters_.index_hits : counters_.data_hits);
    return {{buf, cfg_.page_size}, true};
  }
  std::byte* buf = part.insert(pid);
  f.source->read(pid.page_no, {buf, cfg_.page_size});
  if (is_index) {
    ++counters_.index_misses;
    counters_.index_io_bytes += cfg_.page_size;
  } else {
    ++counters_.data_misses;
    counters_.data_io_bytes += cfg_.page_size;
  }
  return {{buf, cfg_.page_size}, false};
}

void BufferCache::reset() {
  for (auto& p : partitions_) p.clear();
  counters_ = {};
}

}  // namespace qwlsh
