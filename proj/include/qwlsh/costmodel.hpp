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
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "qwlsh/buffer_cache.hpp"
#include "qwlsh/dataset.hpp"
#include "qwlsh/index.hpp"
#include "qwlsh/lsh.hpp"
#include "qwlsh/workload.hpp"

namespace qwlsh {

// Index-cache fractions tried by the optimal-split sweep.
inline constexpr std::array<double, 11> kSweepFractions = {
    0.01, 0.10, 0.20, 0.30, 0.40, 0.50, 0.60, 0.70, 0.80, 0.90, 0.99};

struct SweepRow {
  double fraction = 0.0;
  IoCounters io;
  double wall_ms = 0.0;
};

// One cold-cache run of wl per sweep fraction. Each run owns a private
// BufferCache, so the runs execute in parallel.
std::vector<SweepRow> sweep_fractions(const LshIndex& index, const QueryWorkload& wl,
                                      std::uint64_t cache_bytes,
                                      Strategy strategy = Strategy::kStrategy1);

// Row with minimum TotalIO; ties go to the smaller fraction.
const SweepRow& best_row(const std::vector<SweepRow>& rows);

struct ModelEntry {
  std::size_t cardinality = 0;
  std::size_t dimensionality = 0;
  double best_fraction = 0.0;
  std::uint64_t total_io_at_best = 0;

  friend bool operator==(const ModelEntry&, const ModelEntry&) = default;
};

// Grid over (cardinality x dimensionality) of the IO-minimizing index-cache
// fraction. entries are stored card-major: entries[ci * dims.size() + di].
struct CostModel {
  std::vector<std::size_t> cards;
  std::vector<std::size_t> dims;
  std::vector<ModelEntry> entries;
  std::uint64_t trained_cache_bytes = 0;
  std::size_t trained_q_count = 0;
  double alpha_card = 0.0;  // IndexIO bytes per point, fitted
  double alpha_dim = 0.0;   // DataIO bytes per dimension, fitted

  const ModelEntry& at(std::size_t ci, std::size_t di) const {
    return entries.at(ci * dims.size() + di);
  }
  // Throws unless the lattice is complete with strictly increasing axes.
  void validate() const;

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

struct TrainOptions {
  std::uint64_t cache_bytes = 16ull << 20;
  std::size_t q_count = 250;
  std::size_t k = 50;
  std::uint64_t seed = 1;
  Strategy strategy = Strategy::kStrategy1;
  double c = kDefaultRatio;
  double width = kDefaultWidth;
  double delta = kDefaultDelta;
  std::size_t page_size = kDefaultPageSize;
  std::filesystem::path work_dir = "qwlsh_train";
  bool keep_indexes = false;
};

// For every (card, dim): index the prefix sub-dataset, generate a
// dense-region workload, sweep the 11 fractions on cold caches and keep the
// argmin of TotalIO.
CostModel train(const Dataset& base, const std::vector<std::size_t>& cards,
                const std::vector<std::size_t>& dims, const TrainOptions& opts);

// Least-squares slope of y on x (0 when x has no spread).
double fit_slope(std::span<const double> x, std::span<const double> y);

// Bilinear interpolation of best_fraction over log2(card) x log2(dim),
// clamped to the lattice. Not rounded.
double interpolate_fraction(const CostModel& model, std::size_t n, std::size_t d);

// Nearest sweep setting; exact midpoints go to the larger setting.
double round_to_setting(double fraction);

double lookup_fraction(const CostModel& model, std::size_t n, std::size_t d);

void save_model(const CostModel& model, const std::filesystem::path& path);
CostModel load_model(const std::filesystem::path& path);

}  // namespace qwlsh
