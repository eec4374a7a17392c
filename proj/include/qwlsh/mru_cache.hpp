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
#include <functional>
#include <list>
#include <memory>
#include <unordered_map>
#include <vector>

namespace qwlsh {

using FileId = std::uint32_t;

struct PageId {
  FileId file = 0;
  std::uint64_t page_no = 0;

  friend bool operator==(const PageId&, const PageId&) = default;
};

struct PageIdHash {
  std::size_t operator()(const PageId& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.page_no * 0x9E3779B97F4A7C15ULL ^ p.file);
  }
};

// Fixed-capacity page cache with most-recently-used eviction: a hit moves
// the page to the front of the recency list, and inserting into a full
// cache first evicts the page at the front. Page buffers are allocated on
// first use and recycled on eviction.
class MruCache {
 public:
  MruCache(std::size_t capacity_pages, std::size_t page_size);

  MruCache(MruCache&&) noexcept = default;
  MruCache& operator=(MruCache&&) noexcept = default;

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return order_.size(); }
  std::size_t page_size() const { return page_size_; }

  // Buffer of a resident page after promoting it, or nullptr on a miss.
  std::byte* find(const PageId& pid);
  // Makes pid resident as most recent and returns its (unfilled) buffer.
  // pid must not already be resident.
  std::byte* insert(const PageId& pid);

  bool contains(const PageId& pid) const { return index_.contains(pid); }
  // Resident pages, most recent first.
  std::vector<PageId> resident() const;
  void clear();

 private:
  struct Entry {
    PageId pid;
    std::size_t slot;
  };

  std::size_t capacity_;
  std::size_t page_size_;
  std::list<Entry> order_;
  std::unordered_map<PageId, std::list<Entry>::iterator, PageIdHash> index_;
  std::vector<std::unique_ptr<std::byte[]>> slots_;
  std::vector<std::size_t> free_slots_;
};

}  // namespace qwlsh
