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

#include "qwlsh/page_source.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "qwlsh/bytes.hpp"
#include "qwlsh/error.hpp"

namespace qwlsh {

FilePageSource::FilePageSource(const std::filesystem::path& path,
                               std::size_t page_size)
    : path_(path), page_size_(page_size) {
  if (page_size_ == 0) throw Error("page size must be positive");
  fd_ = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd_ < 0) {
    throw Error("cannot open " + path.string() + ": " + std::strerror(errno));
  }
  struct stat st {};
  if (::fstat(fd_, &st) != 0) {
    ::close(fd_);
    throw Error("cannot stat " + path.string());
  }
  file_bytes_ = static_cast<std::uint64_t>(st.st_size);
  page_count_ = (file_bytes_ + page_size_ - 1) / page_size_;
}

FilePageSource::~FilePageSource() {
  if (fd_ >= 0) ::close(fd_);
}

void FilePageSource::read(std::uint64_t page_no, std::span<std::byte> out) const {
  if (page_no >= page_count_) {
    throw Error("page " + std::to_string(page_no) + " out of range for " +
                path_.string());
  }
  if (out.size() < page_size_) throw Error("page buffer too small");
  std::size_t done = 0;
  const auto offset = static_cast<off_t>(page_no * page_size_);
  while (done < page_size_) {
    const ssize_t got = ::pread(fd_, out.data() + done, page_size_ - done,
                                offset + static_cast<off_t>(done));
    if (got < 0) {
      if (errno == EINTR) continue;
      throw Error("read failed on " + path_.string() + ": " + std::strerror(errno));
    }
    if (got == 0) break;
    done += static_cast<std::size_t>(got);
  }
  std::fill(out.begin() + static_cast<std::ptrdiff_t>(done),
            out.begin() + static_cast<std::ptrdiff_t>(page_size_), std::byte{0});
}

MemoryPageSource::MemoryPageSource(std::vector<std::byte> bytes,
                                   std::size_t page_size)
    : bytes_(std::move(bytes)), page_size_(page_size) {
  if (page_size_ == 0) throw Error("page size must be positive");
}

MemoryPageSource MemoryPageSource::numbered(std::uint64_t pages,
                                            std::size_t page_size) {
  std::vector<std::byte> bytes(pages * page_size);
  for (std::uint64_t p = 0; p < pages; ++p) {
    store_le(bytes.data() + p * page_size, p);
  }
  return MemoryPageSource(std::move(bytes), page_size);
}

std::uint64_t MemoryPageSource::page_count() const {
  return (bytes_.size() + page_size_ - 1) / page_size_;
}

void MemoryPageSource::read(std::uint64_t page_no, std::span<std::byte> out) const {
  if (page_no >= page_count()) throw Error("page out of range");
  const std::size_t begin = page_no * page_size_;
  const std::size_t n = std::min(page_size_, bytes_.size() - begin);
  std::memcpy(out.data(), bytes_.data() + begin, n);
  std::fill(out.begin() + static_cast<std::ptrdiff_t>(n),
            out.begin() + static_cast<std::ptrdiff_t>(page_size_), std::byte{0});
}

}  // namespace qwlsh
