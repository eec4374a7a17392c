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

#include "qwlsh/index.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>

#include "qwlsh/bytes.hpp"
#include "qwlsh/error.hpp"
#include "qwlsh/kernels.hpp"

namespace qwlsh {

namespace {

constexpr char kMagic[4] = {'Q', 'W', 'L', '1'};
constexpr std::size_t kFixedHeaderBytes = 4 + 8 * 7 + 4 + 4;

void write_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("short write to " + path.string());
}

std::vector<std::byte> read_bytes(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(f)),
                        std::istreambuf_iterator<char>());
  std::vector<std::byte> out(raw.size());
  std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

std::vector<std::byte> encode_header(const DatasetMeta& meta, const LshParams& p,
                                     std::uint64_t seed, std::size_t page_size) {
  std::vector<std::byte> h(kFixedHeaderBytes + meta.name.size());
  std::byte* b = h.data();
  std::memcpy(b, kMagic, 4);
  store_le(b + 4, static_cast<std::uint64_t>(meta.n));
  store_le(b + 12, static_cast<std::uint64_t>(meta.d));
  store_le(b + 20, static_cast<std::uint64_t>(p.m));
  store_le(b + 28, p.c);
  store_le(b + 36, p.width);
  store_le(b + 44, p.delta);
  store_le(b + 52, seed);
  store_le(b + 60, static_cast<std::uint32_t>(page_size));
  store_le(b + 64, static_cast<std::uint32_t>(meta.name.size()));
  std::memcpy(b + kFixedHeaderBytes, meta.name.data(), meta.name.size());
  return h;
}

}  // namespace

std::filesystem::path LshIndex::tree_path(const std::filesystem::path& dir,
                                          std::size_t i) {
  return dir / ("proj_" + std::to_string(i) + ".tree");
}

std::uint64_t LshIndex::index_bytes() const {
  std::uint64_t total = 0;
  for (const auto& t : trees_) total += t->file_bytes();
  return total;
}

std::uint64_t LshIndex::data_bytes() const { return data_->file_bytes(); }

LshIndex build_index(const Dataset& ds, const LshParams& params, std::uint64_t seed,
                     const std::filesystem::path& dir, std::size_t page_size) {
  if (ds.n() == 0) throw Error("cannot index an empty dataset");
  if (params.m == 0 || params.threshold == 0 || params.threshold > params.m) {
    throw Error("invalid LSH parameters");
  }
  if (with_projections(params, params.m).threshold != params.threshold) {
    throw Error("collision threshold must equal ceil(alpha * m)");
  }
  std::filesystem::create_directories(dir);

  const auto functions = sample_hash_functions(params.m, ds.d(), params.width, seed);
  std::vector<double> directions(params.m * ds.d());
  std::vector<double> offsets(params.m);
  for (std::size_t j = 0; j < params.m; ++j) {
    std::copy(functions[j].a.begin(), functions[j].a.end(),
              directions.begin() + static_cast<std::ptrdiff_t>(j * ds.d()));
    offsets[j] = functions[j].b;
  }
  std::vector<double> keys(params.m * ds.n());
  kernels::omp::project({ds.coords(), ds.n(), ds.d()},
                        {directions, params.m, ds.d()}, offsets, params.width, keys);

  const auto m = static_cast<std::ptrdiff_t>(params.m);
  std::vector<std::string> failures(params.m);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < m; ++j) {
    try {
      std::vector<btree::Entry> entries(ds.n());
      for (PointId i = 0; i < ds.n(); ++i) {
        entries[i] = {keys[static_cast<std::size_t>(j) * ds.n() + i], i};
      }
      std::sort(entries.begin(), entries.end(), btree::entry_less);
      btree::write_tree(LshIndex::tree_path(dir, static_cast<std::size_t>(j)),
                        entries, page_size);
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(j)] = e.what();
    }
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw Error("tree build failed: " + f);
  }

  std::vector<std::byte> data(ds.n() * ds.record_bytes());
  std::byte* p = data.data();
  for (double v : ds.coords()) {
    store_le(p, v);
    p += sizeof(double);
  }
  write_bytes(dir / "data.bin", data);
  write_bytes(dir / "header",
              encode_header({ds.n(), ds.d(), ds.name()}, params, seed, page_size));
  return load_index(dir);
}

LshIndex load_index(const std::filesystem::path& dir) {
  const auto h = read_bytes(dir / "header");
  if (h.size() < kFixedHeaderBytes || std::memcmp(h.data(), kMagic, 4) != 0) {
    throw Error("corrupt index header (bad magic) in " + dir.string());
  }
  LshIndex idx;
  idx.dir_ = dir;
  idx.meta_.n = load_le<std::uint64_t>(h.data() + 4);
  idx.meta_.d = load_le<std::uint64_t>(h.data() + 12);
  const auto m = load_le<std::uint64_t>(h.data() + 20);
  const double c = load_le<double>(h.data() + 28);
  const double width = load_le<double>(h.data() + 36);
  const double delta = load_le<double>(h.data() + 44);
  idx.seed_ = load_le<std::uint64_t>(h.data() + 52);
  idx.page_size_ = load_le<std::uint32_t>(h.data() + 60);
  const auto name_len = load_le<std::uint32_t>(h.data() + 64);
  if (h.size() != kFixedHeaderBytes + name_len || idx.meta_.n == 0 ||
      idx.meta_.d == 0 || idx.page_size_ == 0) {
    throw Error("corrupt index header in " + dir.string());
  }
  idx.meta_.name.assign(reinterpret_cast<const char*>(h.data() + kFixedHeaderBytes),
                        name_len);

  if (m == 0) throw Error("corrupt index header: m = 0");
  idx.params_ = with_projections(derive_params(c, width, delta, idx.meta_.n), m);
  idx.functions_ = sample_hash_functions(m, idx.meta_.d, width, idx.seed_);

  for (std::size_t i = 0; i < m; ++i) {
    auto src = std::make_shared<const FilePageSource>(LshIndex::tree_path(dir, i),
                                                      idx.page_size_);
    auto th = btree::read_header(*src);
    if (th.entry_count != idx.meta_.n) {
      throw Error("tree " + std::to_string(i) + " holds " +
                  std::to_string(th.entry_count) + " entries, expected " +
                  std::to_string(idx.meta_.n));
    }
    idx.tree_headers_.push_back(th);
    idx.trees_.push_back(std::move(src));
  }
  idx.data_ = std::make_shared<const FilePageSource>(dir / "data.bin", idx.page_size_);
  if (idx.data_->file_bytes() != idx.meta_.n * idx.meta_.d * sizeof(double)) {
    throw Error("data.bin size does not match n*d records");
  }
  return idx;
}

Dataset read_index_dataset(const LshIndex& index) {
  const auto bytes = read_bytes(index.dir() / "data.bin");
  const auto& meta = index.meta();
  if (bytes.size() != meta.n * meta.d * sizeof(double)) {
    throw Error("data.bin size does not match n*d records");
  }
  std::vector<double> coords(meta.n * meta.d);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    coords[i] = load_le<double>(bytes.data() + i * sizeof(double));
  }
  return Dataset(meta.name, meta.n, meta.d, std::move(coords));
}

CachedIndex::CachedIndex(const LshIndex& index, BufferCache& cache)
    : index_(&index), cache_(&cache) {
  const auto& cfg = cache.config();
  if (cfg.page_size != index.page_size()) {
    throw Error("cache page size " + std::to_string(cfg.page_size) +
                " differs from index page size " + std::to_string(index.page_size()));
  }
  if (cfg.strategy == Strategy::kStrategy1 && cache.projections() != index.m()) {
    throw Error("cache configured for " + std::to_string(cache.projections()) +
                " projections but index has m=" + std::to_string(index.m()));
  }
  if (cache.projections() < index.m()) {
    throw Error("cache has fewer projection slots than the index");
  }
  for (std::size_t i = 0; i < index.m(); ++i) {
    tree_files_.push_back(cache.register_index_file(i, index.tree_source(i)));
  }
  data_file_ = cache.register_data_file(index.data_source());
}

}  // namespace qwlsh
