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
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "qwlsh/mru_cache.hpp"
#include "qwlsh/page_source.hpp"

namespace qwlsh {

// Strategy1: the index partition is split evenly into one MRU sub-cache per
// projection. Strategy2: one MRU cache shared by all projections. Unified:
// no index/data split at all (the naive cache).
enum class Strategy { kStrategy1, kStrategy2, kUnified };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view s);

struct CacheConfig {
  std::uint64_t total_bytes = 16ull << 20;
  double index_fraction = 0.5;
  Strategy strategy = Strategy::kStrategy1;
  std::size_t page_size = kDefaultPageSize;
};

enum class FileKind { kIndex, kData };

struct IoCounters {
  std::uint64_t index_io_bytes = 0;
  std::uint64_t data_io_bytes = 0;
  std::uint64_t index_hits = 0;
  std::uint64_t data_hits = 0;
  std::uint64_t index_misses = 0;
  std::uint64_t data_misses = 0;

  std::uint64_t total_io_bytes() const { return index_io_bytes + data_io_bytes; }

  friend bool operator==(const IoCounters&, const IoCounters&) = default;
  friend IoCounters operator-(const IoCounters& a, const IoCounters& b);
};

struct PageView {
  std::span<const std::byte> bytes;
  bool hit = false;
};

// Partitioned buffer pool over the files of one index. Single-owner mutable
// state: reads through one instance must be serialized. Independent instances
// can share the same PageSources.
class BufferCache {
 public:
  BufferCache(const CacheConfig& cfg, std::size_t projections);

  const CacheConfig& config() const { return cfg_; }
  std::size_t projections() const { return projections_; }
  std::size_t total_pages() const { return total_pages_; }
  std::size_t index_pages() const { return index_pages_; }
  std::size_t data_pages() const { return data_pages_; }
  // Capacity of each partition in routing order (index sub-caches first).
  std::vector<std::size_t> partition_capacities() const;

  FileId register_index_file(std::size_t projection,
                             std::shared_ptr<const PageSource> source);
  FileId register_data_file(std::shared_ptr<const PageSource> source);
  FileKind kind_of(FileId file) const;
  std::uint64_t page_count(FileId file) const;

  // The returned bytes stay valid until the next read_page or reset.
  PageView read_page(PageId pid);

  IoCounters io_report() const { return counters_; }
  // Drops every resident page and zeroes the counters; keeps configuration
  // and registered files.
  void reset();

 private:
  struct File {
    std::shared_ptr<const PageSource> source;
    FileKind kind;
    std::size_t partition;
  };

  CacheConfig cfg_;
  std::size_t projections_;
  std::size_t total_pages_ = 0;
  std::size_t index_pages_ = 0;
  std::size_t data_pages_ = 0;
  std::size_t data_partition_ = 0;
  std::vector<MruCache> partitions_;
  std::vector<File> files_;
  IoCounters counters_;
};

inline BufferCache configure(const CacheConfig& cfg, std::size_t projections) {
  return BufferCache(cfg, projections);
}

}  // namespace qwlsh
