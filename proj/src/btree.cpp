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

#include "qwlsh/btree.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "qwlsh/bytes.hpp"
#include "qwlsh/error.hpp"

namespace qwlsh::btree {

namespace {

constexpr char kMagic[4] = {'Q', 'W', 'B', 'T'};
constexpr std::uint32_t kVersion = 1;

struct NodeRef {
  std::uint64_t page;
  Entry min;
};

}  // namespace

std::vector<std::byte> bulk_load(std::span<const Entry> entries,
                                 std::size_t page_size) {
  if (entries.empty()) throw Error("cannot build a tree with no entries");
  if (!std::is_sorted(entries.begin(), entries.end(), entry_less)) {
    throw Error("tree entries must be sorted by (key, id)");
  }
  const std::size_t leaf_cap = leaf_capacity(page_size);
  const std::size_t fanout = internal_capacity(page_size);
  if (leaf_cap < 2 || fanout < 2) throw Error("page size too small for a tree node");

  const std::size_t leaf_count = (entries.size() + leaf_cap - 1) / leaf_cap;
  std::vector<std::byte> pages((1 + leaf_count) * page_size);
  std::vector<NodeRef> level;
  level.reserve(leaf_count);

  for (std::size_t l = 0; l < leaf_count; ++l) {
    const std::uint64_t page_no = 1 + l;
    std::byte* p = pages.data() + page_no * page_size;
    const std::size_t begin = l * leaf_cap;
    const std::size_t count = std::min(leaf_cap, entries.size() - begin);
    p[0] = std::byte{kLeafType};
    store_le(p + 4, static_cast<std::uint32_t>(count));
    store_le(p + 8, l == 0 ? kNoPage : page_no - 1);
    store_le(p + 16, l + 1 == leaf_count ? kNoPage : page_no + 1);
    for (std::size_t i = 0; i < count; ++i) {
      std::byte* e = p + kLeafHeaderBytes + i * kLeafEntryBytes;
      store_le(e, entries[begin + i].key);
      store_le(e + 8, entries[begin + i].id);
    }
    level.push_back({page_no, entries[begin]});
  }

  std::uint32_t height = 1;
  while (level.size() > 1) {
    std::vector<NodeRef> parents;
    for (std::size_t begin = 0; begin < level.size(); begin += fanout) {
      const std::size_t count = std::min(fanout, level.size() - begin);
      const std::uint64_t page_no = pages.size() / page_size;
      pages.resize(pages.size() + page_size);
      std::byte* p = pages.data() + page_no * page_size;
      p[0] = std::byte{kInternalType};
      store_le(p + 4, static_cast<std::uint32_t>(count));
      for (std::size_t i = 0; i < count; ++i) {
        std::byte* e = p + kInternalHeaderBytes + i * kInternalEntryBytes;
        store_le(e, level[begin + i].min.key);
        store_le(e + 8, level[begin + i].min.id);
        store_le(e + 16, level[begin + i].page);
      }
      parents.push_back({page_no, level[begin].min});
    }
    level = std::move(parents);
    ++height;
  }

  std::byte* h = pages.data();
  std::memcpy(h, kMagic, 4);
  store_le(h + 4, kVersion);
  store_le(h + 8, static_cast<std::uint32_t>(page_size));
  store_le(h + 12, height);
  store_le(h + 16, static_cast<std::uint64_t>(entries.size()));
  store_le(h + 24, level.front().page);
  store_le(h + 32, std::uint64_t{1});
  store_le(h + 40, static_cast<std::uint64_t>(leaf_count));
  store_le(h + 48, static_cast<std::uint64_t>(leaf_count));
  return pages;
}

void write_tree(const std::filesystem::path& path, std::span<const Entry> entries,
                std::size_t page_size) {
  const auto pages = bulk_load(entries, page_size);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(pages.data()),
          static_cast<std::streamsize>(pages.size()));
  if (!f) throw Error("short write to " + path.string());
}

Header parse_header(std::span<const std::byte> page0) {
  if (page0.size() < 56 || std::memcmp(page0.data(), kMagic, 4) != 0) {
    throw Error("not a tree file (bad magic)");
  }
  if (load_le<std::uint32_t>(page0.data() + 4) != kVersion) {
    throw Error("unsupported tree version");
  }
  Header h;
  h.page_size = load_le<std::uint32_t>(page0.data() + 8);
  h.height = load_le<std::uint32_t>(page0.data() + 12);
  h.entry_count = load_le<std::uint64_t>(page0.data() + 16);
  h.root = load_le<std::uint64_t>(page0.data() + 24);
  h.leaf_head = load_le<std::uint64_t>(page0.data() + 32);
  h.leaf_tail = load_le<std::uint64_t>(page0.data() + 40);
  h.leaf_count = load_le<std::uint64_t>(page0.data() + 48);
  return h;
}

Header read_header(const PageSource& source) {
  if (source.page_count() == 0) throw Error("empty tree file");
  std::vector<std::byte> page(source.page_size());
  source.read(0, page);
  Header h = parse_header(page);
  if (h.page_size != source.page_size()) throw Error("tree page size mismatch");
  if (h.root >= source.page_count() || h.leaf_tail >= source.page_count()) {
    throw Error("corrupt tree header");
  }
  return h;
}

std::uint8_t node_type(std::span<const std::byte> page) {
  return static_cast<std::uint8_t>(page[0]);
}

LeafView::LeafView(std::span<const std::byte> page) : page_(page) {
  if (node_type(page) != kLeafType) throw Error("expected a leaf page");
  count_ = load_le<std::uint32_t>(page.data() + 4);
  if (count_ > leaf_capacity(page.size())) throw Error("corrupt leaf page");
}

std::uint64_t LeafView::prev() const { return load_le<std::uint64_t>(page_.data() + 8); }
std::uint64_t LeafView::next() const { return load_le<std::uint64_t>(page_.data() + 16); }

double LeafView::key(std::size_t i) const {
  return load_le<double>(page_.data() + kLeafHeaderBytes + i * kLeafEntryBytes);
}

Entry LeafView::entry(std::size_t i) const {
  const std::byte* e = page_.data() + kLeafHeaderBytes + i * kLeafEntryBytes;
  return {load_le<double>(e), load_le<std::uint64_t>(e + 8)};
}

std::size_t LeafView::lower_bound(double k) const {
  std::size_t lo = 0;
  std::size_t hi = count_;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (key(mid) < k) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

InternalView::InternalView(std::span<const std::byte> page) : page_(page) {
  if (node_type(page) != kInternalType) throw Error("expected an internal page");
  count_ = load_le<std::uint32_t>(page.data() + 4);
  if (count_ == 0 || count_ > internal_capacity(page.size())) {
    throw Error("corrupt internal page");
  }
}

double InternalView::min_key(std::size_t i) const {
  return load_le<double>(page_.data() + kInternalHeaderBytes + i * kInternalEntryBytes);
}

std::uint64_t InternalView::child(std::size_t i) const {
  return load_le<std::uint64_t>(page_.data() + kInternalHeaderBytes +
                                i * kInternalEntryBytes + 16);
}

std::uint64_t InternalView::route(double k) const {
  // Last child whose minimum is strictly below k; equal keys may continue
  // at the tail of the previous child.
  std::size_t lo = 0;
  std::size_t hi = count_;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (min_key(mid) < k) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return child(lo == 0 ? 0 : lo - 1);
}

}  // namespace qwlsh::btree
