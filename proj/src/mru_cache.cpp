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

#include "qwlsh/mru_cache.hpp"

#include "qwlsh/error.hpp"

namespace qwlsh {

MruCache::MruCache(std::size_t capacity_pages, std::size_t page_size)
    : capacity_(capacity_pages), page_size_(page_size) {
  if (capacity_ == 0) throw Error("MRU cache needs at least one page");
  index_.reserve(capacity_);
}

std::byte* MruCache::find(const PageId& pid) {
  auto it = index_.find(pid);
  if (it == index_.end()) return nullptr;
  order_.splice(order_.begin(), order_, it->second);
  return slots_[it->second->slot].get();
}

std::byte* MruCache::insert(const PageId& pid) {
  std::size_t slot;
  if (order_.size() == capacity_) {
    // The front is the most recently used page.
    const Entry victim = order_.front();
    index_.erase(victim.pid);
    order_.pop_front();
    slot = victim.slot;
  } else if (!free_slots_.empty()) {
    slot = free_slots_.back();
    free_slots_.pop_back();
  } else {
    slot = slots_.size();
    slots_.push_back(std::make_unique<std::byte[]>(page_size_));
  }
  order_.push_front(Entry{pid, slot});
  index_.emplace(pid, order_.begin());
  return slots_[slot].get();
}

std::vector<PageId> MruCache::resident() const {
  std::vector<PageId> out;
  out.reserve(order_.size());
  for (const auto& e : order_) out.push_back(e.pid);
  return out;
}

void MruCache::clear() {
  for (const auto& e : order_) free_slots_.push_back(e.slot);
  order_.clear();
  index_.clear();
}

}  // namespace qwlsh
