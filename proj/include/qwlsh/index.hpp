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
#include <memory>
#include <string>
#include <vector>

#include "qwlsh/btree.hpp"
#include "qwlsh/buffer_cache.hpp"
#include "qwlsh/dataset.hpp"
#include "qwlsh/lsh.hpp"

// On-disk layout of an index directory:
//
//   header        "QWL1" u64 n, u64 d, u64 m, f64 c, f64 width, f64 delta,
//                 u64 seed, then u32 page_size, u32 name_len, name bytes
//   proj_<i>.tree one B+-tree per projection (see btree.hpp)
//   data.bin      n consecutive records of d little-endian f64
namespace qwlsh {

struct DatasetMeta {
  std::size_t n = 0;
  std::size_t d = 0;
  std::string name;
};

// Immutable handle on a built index. Page reads never happen through this
// type directly: attach it to a BufferCache with open_index.
class LshIndex {
 public:
  const LshParams& params() const { return params_; }
  const std::vector<HashFunction>& functions() const { return functions_; }
  const DatasetMeta& meta() const { return meta_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t page_size() const { return page_size_; }
  const std::filesystem::path& dir() const { return dir_; }
  std::size_t m() const { return functions_.size(); }

  const btree::Header& tree_header(std::size_t i) const { return tree_headers_.at(i); }
  std::shared_ptr<const PageSource> tree_source(std::size_t i) const { return trees_.at(i); }
  std::shared_ptr<const PageSource> data_source() const { return data_; }

  // Bytes of every index (tree) file and of the data file.
  std::uint64_t index_bytes() const;
  std::uint64_t data_bytes() const;

  static std::filesystem::path tree_path(const std::filesystem::path& dir, std::size_t i);

 private:
  friend LshIndex load_index(const std::filesystem::path& dir);

  LshParams params_;
  std::vector<HashFunction> functions_;
  DatasetMeta meta_;
  std::uint64_t seed_ = 0;
  std::size_t page_size_ = kDefaultPageSize;
  std::filesystem::path dir_;
  std::vector<btree::Header> tree_headers_;
  std::vector<std::shared_ptr<const FilePageSource>> trees_;
  std::shared_ptr<const FilePageSource> data_;
};

// Samples params.m hash functions from seed, bulk-loads one tree per
// projection and writes the data and header files into dir. The trees are
// built in parallel; the build bypasses any cache.
LshIndex build_index(const Dataset& ds, const LshParams& params, std::uint64_t seed,
                     const std::filesystem::path& dir,
                     std::size_t page_size = kDefaultPageSize);

LshIndex load_index(const std::filesystem::path& dir);

// Reads data.bin straight from disk (no cache) back into a Dataset.
Dataset read_index_dataset(const LshIndex& index);

// An index bound to one cache: tree pages route to the index partition(s),
// data pages to the data partition. Holds references; both must outlive it.
class CachedIndex {
 public:
  CachedIndex(const LshIndex& index, BufferCache& cache);

  const LshIndex& index() const { return *index_; }
  BufferCache& cache() const { return *cache_; }
  FileId tree_file(std::size_t i) const { return tree_files_.at(i); }
  FileId data_file() const { return data_file_; }

 private:
  const LshIndex* index_;
  BufferCache* cache_;
  std::vector<FileId> tree_files_;
  FileId data_file_ = 0;
};

inline CachedIndex open_index(const LshIndex& index, BufferCache& cache) {
  return CachedIndex(index, cache);
}

}  // namespace qwlsh
