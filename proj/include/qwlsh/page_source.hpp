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
#include <span>
#include <vector>

namespace qwlsh {

inline constexpr std::size_t kDefaultPageSize = 4096;

// Read-only backing store addressed in fixed-size pages. Implementations are
// safe to read from several threads at once.
class PageSource {
 public:
  virtual ~PageSource() = default;
  virtual std::size_t page_size() const = 0;
  virtual std::uint64_t page_count() const = 0;
  // Fills `out` (page_size bytes) with page `page_no`; the tail of a short
  // final page is zero-filled.
  virtual void read(std::uint64_t page_no, std::span<std::byte> out) const = 0;
};

class FilePageSource final : public PageSource {
 public:
  FilePageSource(const std::filesystem::path& path, std::size_t page_size);
  ~FilePageSource() override;
  FilePageSource(const FilePageSource&) = delete;
  FilePageSource& operator=(const FilePageSource&) = delete;

  std::size_t page_size() const override { return page_size_; }
  std::uint64_t page_count() const override { return page_count_; }
  std::uint64_t file_bytes() const { return file_bytes_; }
  void read(std::uint64_t page_no, std::span<std::byte> out) const override;

 private:
  int fd_ = -1;
  std::filesystem::path path_;
  std::size_t page_size_;
  std::uint64_t file_bytes_ = 0;
  std::uint64_t page_count_ = 0;
};

// Test double: pages live in memory.
class MemoryPageSource final : public PageSource {
 public:
  MemoryPageSource(std::vector<std::byte> bytes, std::size_t page_size);
  // `pages` pages whose first 8 bytes hold the page number.
  static MemoryPageSource numbered(std::uint64_t pages, std::size_t page_size);

  std::size_t page_size() const override { return page_size_; }
  std::uint64_t page_count() const override;
  void read(std::uint64_t page_no, std::span<std::byte> out) const override;

 private:
  std::vector<std::byte> bytes_;
  std::size_t page_size_;
};

}  // namespace qwlsh
