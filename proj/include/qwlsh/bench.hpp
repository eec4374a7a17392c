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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qwlsh/buffer_cache.hpp"
#include "qwlsh/costmodel.hpp"
#include "qwlsh/index.hpp"
#include "qwlsh/workload.hpp"

namespace qwlsh {

// Cache-split alternatives compared by the benchmark:
//   naive   one unified MRU cache over index and data pages
//   ci      99% of the cache to the index partition
//   cd      1% to the index partition (99% to data)
//   cicd    50/50
//   opt     best of the 11-setting sweep
//   qwlsh   fraction looked up in the trained cost model
enum class Alternative { kNaive, kCi, kCd, kCiCd, kOpt, kQwLsh };

std::string_view to_string(Alternative a);
Alternative parse_alternative(std::string_view s);
std::vector<Alternative> all_alternatives();
// Fixed index fraction for ci/cd/cicd.
std::optional<double> fixed_fraction(Alternative a);

struct WorkloadReport {
  std::string alt;
  std::string dataset;
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t cache_bytes = 0;
  std::optional<double> fraction;  // empty for the unified cache
  Strategy strategy = Strategy::kStrategy1;
  std::size_t q_count = 0;
  std::size_t k = 0;
  IoCounters io;
  double wall_ms = 0.0;
  std::size_t repeat = 0;
  std::size_t max_candidates_verified = 0;
  double mean_candidates_verified = 0.0;

  std::uint64_t index_io() const { return io.index_io_bytes; }
  std::uint64_t data_io() const { return io.data_io_bytes; }
  std::uint64_t total_io() const { return io.total_io_bytes(); }
};

// Cold cache built from cfg, queries in workload order, wall time includes
// cache bookkeeping.
WorkloadReport run_workload(const LshIndex& index, const CacheConfig& cfg,
                            const QueryWorkload& wl, std::string alt = "run");

struct CompareOptions {
  Strategy strategy = Strategy::kStrategy1;
  std::size_t repeats = 1;
  // Run alternatives concurrently; each owns its cache.
  bool parallel = false;
};

struct Comparison {
  // One report per (alternative, repeat).
  std::vector<WorkloadReport> reports;
  // The 11 runs behind each opt report.
  std::vector<WorkloadReport> opt_sweep;

  const WorkloadReport& get(Alternative a, std::size_t repeat = 0) const;
};

// model may be null when kQwLsh is not requested.
Comparison compare_alternatives(const LshIndex& index, const QueryWorkload& wl,
                                std::uint64_t cache_bytes, const CostModel* model,
                                const std::vector<Alternative>& alts = all_alternatives(),
                                const CompareOptions& opts = {});

// Per-fraction IndexIO/DataIO/TotalIO, one cold run each.
std::vector<WorkloadReport> sweep_report(const LshIndex& index, const QueryWorkload& wl,
                                         std::uint64_t cache_bytes,
                                         Strategy strategy = Strategy::kStrategy1);

// alt,dataset,n,d,cache_bytes,fraction,strategy,q_count,k,index_io,data_io,
// total_io,wall_ms,repeat
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const WorkloadReport& r);
void write_csv(std::ostream& out, const std::vector<WorkloadReport>& rows);

}  // namespace qwlsh
