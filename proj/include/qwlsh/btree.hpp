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
#include <filesystem>
#include <limits>
#include <span>
#include <vector>

#include "qwlsh/dataset.hpp"
#include "qwlsh/page_source.hpp"

// Static, bulk-loaded B+-tree stored one node per page.
//
//   page 0    header: "QWBT" u32 version u32 page_size u32 height
//             u64 entry_count u64 root u64 leaf_head u64 leaf_tail u64 leaf_count
//   leaf      u8 type=1, 3 pad, u32 count, u64 prev, u64 next,
//             count x (f64 key, u64 id) sorted by (key, id)
//   internal  u8 type=2, 3 pad, u32 count,
//             count x (f64 min_key, u64 min_id, u64 child)
//
// Leaves occupy pages 1..leaf_count in key order and are chained both ways.
// All integers and reals are little-endian.
namespace qwlsh::btree {

inline constexpr std::uint64_t kNoPage = std::numeric_limits<std::uint64_t>::max();
inline constexpr std::uint8_t kLeafType = 1;
inline constexpr std::uint8_t kInternalType = 2;
inline constexpr std::size_t kLeafHeaderBytes = 24;
inline constexpr std::size_t kInternalHeaderBytes = 8;
inline constexpr std::size_t kLeafEntryBytes = 16;
inline constexpr std::size_t kInternalEntryBytes = 24;

struct Entry {
  double key = 0.0;
  PointId id = 0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

inline bool entry_less(const Entry& a, const Entry& b) {
  return a.key < b.key || (a.key == b.key && a.id < b.id);
}

struct Header {
  std::uint32_t page_size = 0;
  std::uint32_t height = 0;  // 1 when the root is a leaf
  std::uint64_t entry_count = 0;
  std::uint64_t root = kNoPage;
  std::uint64_t leaf_head = kNoPage;
  std::uint64_t leaf_tail = kNoPage;
  std::uint64_t leaf_count = 0;
};

constexpr std::size_t leaf_capacity(std::size_t page_size) {
  return (page_size - kLeafHeaderBytes) / kLeafEntryBytes;
}
constexpr std::size_t internal_capacity(std::size_t page_size) {
  return (page_size - kInternalHeaderBytes) / kInternalEntryBytes;
}

// Serializes the tree for `entries` (sorted by entry_less) into whole pages.
std::vector<std::byte> bulk_load(std::span<const Entry> entries,
                                 std::size_t page_size);
void write_tree(const std::filesystem::path& path, std::span<const Entry> entries,
                std::size_t page_size);

Header parse_header(std::span<const std::byte> page0);
Header read_header(const PageSource& source);

// Read-only views over one node page.
class LeafView {
 public:
  explicit LeafView(std::span<const std::byte> page);
  std::size_t count() const { return count_; }
  std::uint64_t prev() const;
  std::uint64_t next() const;
  Entry entry(std::size_t i) const;
  double key(std::size_t i) const;
  // First slot whose key is >= key (count() if none).
  std::size_t lower_bound(double key) const;

 private:
  std::span<const std::byte> page_;
  std::size_t count_;
};

class InternalView {
 public:
  explicit InternalView(std::span<const std::byte> page);
  std::size_t count() const { return count_; }
  double min_key(std::size_t i) const;
  std::uint64_t child(std::size_t i) const;
  // Child to descend into when looking for the first key >= key.
  std::uint64_t route(double key) const;

 private:
  std::span<const std::byte> page_;
  std::size_t count_;
};

std::uint8_t node_type(std::span<const std::byte> page);

}  // namespace qwlsh::btree
