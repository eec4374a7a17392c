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

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <type_traits>

namespace qwlsh {

// Little-endian encode/decode of trivially copyable scalars. Every on-disk
// structure in the index goes through these helpers.
template <typename T>
  requires std::is_trivially_copyable_v<T>
void store_le(std::byte* dst, T value) {
  auto raw = std::bit_cast<std::array<std::byte, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T); ++i) dst[i] = raw[sizeof(T) - 1 - i];
  } else {
    std::memcpy(dst, raw.data(), sizeof(T));
  }
}

template <typename T>
  requires std::is_trivially_copyable_v<T>
T load_le(const std::byte* src) {
  std::array<std::byte, sizeof(T)> raw;
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T); ++i) raw[i] = src[sizeof(T) - 1 - i];
  } else {
    std::memcpy(raw.data(), src, sizeof(T));
  }
  return std::bit_cast<T>(raw);
}

}  // namespace qwlsh
