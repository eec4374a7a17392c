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

#include "qwlsh/bench.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <ostream>

#include "qwlsh/error.hpp"
#include "qwlsh/query.hpp"

namespace qwlsh {

std::string_view to_string(Alternative a) {
  switch (a) {
    case Alternative::kNaive: return "naive";
    case Alternative::kCi: return "ci";
    case Alternative::kCd: return "cd";
    case Alternative::kCiCd: return "cicd";
    case Alternative::kOpt: return "opt";
    case Alternative::kQwLsh: return "qwlsh";
  }
  return "?";
}

Alternative parse_alternative(std::string_view s) {
  for (auto a : all_alternatives()) {
    if (to_string(a) == s) return a;
  }
  throw Error("unknown alternative '" + std::string(s) + "'");
}

std::vector<Alternative> all_alternatives() {
  return {Alternative::kNaive, Alternative::kCi,  Alternative::kCd,
          Alternative::kCiCd,  Alternative::kOpt, Alternative::kQwLsh};
}

std::optional<double> fixed_fraction(Alternative a) {
  switch (a) {
    case Alternative::kCi: return 0.99;
    case Alternative::kCd: return 0.01;
    case Alternative::kCiCd: return 0.50;
    default: return std::nullopt;
  }
}

WorkloadReport run_workload(const LshIndex& index, const CacheConfig& cfg,
                            const QueryWorkload& wl, std::string alt) {
  const auto start = std::chrono::steady_clock::now();
  BufferCache cache(cfg, index.m());
  CachedIndex view(index, cache);
  const auto run = run_queries(view, wl);
  const std::chrono::duration<double, std::milli> took =
      std::chrono::steady_clock::now() - start;

  WorkloadReport r;
  r.alt = std::move(alt);
  r.dataset = index.meta().name;
  r.n = index.meta().n;
  r.d = index.meta().d;
  r.cache_bytes = cfg.total_bytes;
  if (cfg.strategy != Strategy::kUnified) r.fraction = cfg.index_fraction;
  r.strategy = cfg.strategy;
  r.q_count = wl.queries.size();
  r.k = wl.k;
  r.io = run.io;
  r.wall_ms = took.count();
  double sum = 0.0;
  for (const auto& s : run.per_query) {
    r.max_candidates_verified = std::max(r.max_candidates_verified, s.candidates_verified);
    sum += static_cast<double>(s.candidates_verified);
  }
  if (!run.per_query.empty()) {
    r.mean_candidates_verified = sum / static_cast<double>(run.per_query.size());
  }
  return r;
}

const WorkloadReport& Comparison::get(Alternative a, std::size_t repeat) const {
  const auto tag = to_string(a);
  for (const auto& r : reports) {
    if (r.alt == tag && r.repeat == repeat) return r;
  }
  throw Error("no report for alternative " + std::string(tag));
}

namespace {

WorkloadReport to_report(const LshIndex& index, const QueryWorkload& wl,
                         std::uint64_t cache_bytes, Strategy strategy,
                         const SweepRow& row, std::string alt) {
  WorkloadReport r;
  r.alt = std::move(alt);
  r.dataset = index.meta().name;
  r.n = index.meta().n;
  r.d = index.meta().d;
  r.cache_bytes = cache_bytes;
  r.fraction = row.fraction;
  r.strategy = strategy;
  r.q_count = wl.queries.size();
  r.k = wl.k;
  r.io = row.io;
  r.wall_ms = row.wall_ms;
  return r;
}

}  // namespace

Comparison compare_alternatives(const LshIndex& index, const QueryWorkload& wl,
                                std::uint64_t cache_bytes, const CostModel* model,
                                const std::vector<Alternative>& alts,
                                const CompareOptions& opts) {
  if (opts.repeats == 0) throw Error("repeats must be >= 1");
  const bool wants_model =
      std::find(alts.begin(), alts.end(), Alternative::kQwLsh) != alts.end();
  if (wants_model && model == nullptr) throw Error("qwlsh alternative needs a cost model");

  Comparison out;
  for (std::size_t rep = 0; rep < opts.repeats; ++rep) {
    std::vector<WorkloadReport> round(alts.size());
    std::vector<std::vector<WorkloadReport>> sweeps(alts.size());
    std::vector<std::string> failures(alts.size());
    const auto count = static_cast<std::ptrdiff_t>(alts.size());
#pragma omp parallel for schedule(dynamic, 1) if (opts.parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto ai = static_cast<std::size_t>(i);
      const Alternative alt = alts[ai];
      const std::string tag(to_string(alt));
      try {
        if (alt == Alternative::kOpt) {
          const auto rows = sweep_fractions(index, wl, cache_bytes, opts.strategy);
          for (const auto& row : rows) {
            sweeps[ai].push_back(to_report(index, wl, cache_bytes, opts.strategy, row,
                                           "opt_sweep"));
            sweeps[ai].back().repeat = rep;
          }
          round[ai] = to_report(index, wl, cache_bytes, opts.strategy, best_row(rows), tag);
        } else if (alt == Alternative::kNaive) {
          round[ai] = run_workload(index, {cache_bytes, 0.5, Strategy::kUnified,
                                           index.page_size()}, wl, tag);
        } else {
          const double f = alt == Alternative::kQwLsh
                               ? lookup_fraction(*model, index.meta().n, index.meta().d)
                               : *fixed_fraction(alt);
          round[ai] = run_workload(index, {cache_bytes, f, opts.strategy, index.page_size()},
                                   wl, tag);
        }
        round[ai].repeat = rep;
      } catch (const std::exception& e) {
        failures[ai] = e.what();
      }
    }
    for (const auto& f : failures) {
      if (!f.empty()) throw Error(f);
    }
    for (auto& r : round) out.reports.push_back(std::move(r));
    for (auto& s : sweeps) {
      for (auto& r : s) out.opt_sweep.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<WorkloadReport> sweep_report(const LshIndex& index, const QueryWorkload& wl,
                                         std::uint64_t cache_bytes, Strategy strategy) {
  std::vector<WorkloadReport> out;
  for (const auto& row : sweep_fractions(index, wl, cache_bytes, strategy)) {
    out.push_back(to_report(index, wl, cache_bytes, strategy, row, "sweep"));
  }
  return out;
}

void write_csv_header(std::ostream& out) {
  out << "alt,dataset,n,d,cache_bytes,fraction,strategy,q_count,k,index_io,data_io,"
         "total_io,wall_ms,repeat\n";
}

void write_csv_row(std::ostream& out, const WorkloadReport& r) {
  out << r.alt << ',' << r.dataset << ',' << r.n << ',' << r.d << ',' << r.cache_bytes
      << ',';
  if (r.fraction) out << *r.fraction;
  out << ',' << to_string(r.strategy) << ',' << r.q_count << ',' << r.k << ','
      << r.index_io() << ',' << r.data_io() << ',' << r.total_io() << ','
      << std::fixed << std::setprecision(3) << r.wall_ms << std::defaultfloat
      << std::setprecision(6) << ',' << r.repeat << '\n';
}

void write_csv(std::ostream& out, const std::vector<WorkloadReport>& rows) {
  write_csv_header(out);
  for (const auto& r : rows) write_csv_row(out, r);
}

}  // namespace qwlsh
