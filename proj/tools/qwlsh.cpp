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

// qwlsh command line: build, train, run, sweep.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qwlsh/bench.hpp"
#include "qwlsh/costmodel.hpp"
#include "qwlsh/dataset.hpp"
#include "qwlsh/error.hpp"
#include "qwlsh/index.hpp"
#include "qwlsh/lsh.hpp"
#include "qwlsh/workload.hpp"

namespace {

using namespace qwlsh;

std::uint64_t mb_to_bytes(double mb) {
  if (!(mb > 0.0)) throw Error("cache size must be positive");
  return static_cast<std::uint64_t>(std::llround(mb * 1024.0 * 1024.0));
}

Strategy strategy_flag(const std::string& s) {
  if (s == "1") return Strategy::kStrategy1;
  if (s == "2") return Strategy::kStrategy2;
  throw Error("--strategy must be 1 or 2");
}

Dataset load_data(const std::string& path, const std::string& format, bool header) {
  Dataset ds = format == "fvecs" ? load_fvecs(path) : load_csv(path, header);
  return ds;
}

// Writes to path, or stdout for "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  fn(out);
  if (!out) throw Error("write failed: " + path);
}

struct QuerySource {
  std::string file;
  std::size_t gen = 250;
  std::size_t k = 50;
  std::uint64_t seed = 1;
};

QueryWorkload make_queries(const Dataset& ds, const QuerySource& src) {
  if (!src.file.empty()) return load_workload(ds, src.file, src.k);
  return generate_workload(ds, src.gen, src.k, src.seed);
}

struct BuildArgs {
  std::string data, format = "fvecs", out, name;
  bool header = false;
  double c = kDefaultRatio, width = kDefaultWidth, delta = kDefaultDelta;
  std::uint64_t seed = 1;
  std::size_t m = 0;
};

int cmd_build(const BuildArgs& a) {
  Dataset ds = load_data(a.data, a.format, a.header);
  if (!a.name.empty()) ds = Dataset(a.name, ds.n(), ds.d(), {ds.coords().begin(), ds.coords().end()});
  auto params = derive_params(a.c, a.width, a.delta, ds.n());
  if (a.m != 0) params = with_projections(params, a.m);
  const auto idx = build_index(ds, params, a.seed, a.out);
  std::cerr << "built " << a.out << ": n=" << ds.n() << " d=" << ds.d() << " m=" << idx.m()
            << " l=" << idx.params().threshold << " index=" << idx.index_bytes()
            << "B data=" << idx.data_bytes() << "B\n";
  return 0;
}

struct TrainArgs {
  std::vector<std::size_t> cards, dims;
  double cache_mb = 16.0;
  std::size_t queries = 250, k = 50;
  std::uint64_t seed = 1;
  std::string out, data, format = "fvecs", work_dir = "qwlsh_train", strategy = "1";
  bool header = false, keep = false;
};

int cmd_train(const TrainArgs& a) {
  auto cards = a.cards;
  auto dims = a.dims;
  std::sort(cards.begin(), cards.end());
  std::sort(dims.begin(), dims.end());
  Dataset base;
  if (!a.data.empty()) {
    base = load_data(a.data, a.format, a.header);
  } else {
    MixtureSpec spec;
    spec.n = cards.back();
    spec.d = dims.back();
    spec.seed = a.seed;
    spec.name = "synthetic";
    base = make_gaussian_mixture(spec);
  }
  TrainOptions opts;
  opts.cache_bytes = mb_to_bytes(a.cache_mb);
  opts.q_count = a.queries;
  opts.k = a.k;
  opts.seed = a.seed;
  opts.strategy = strategy_flag(a.strategy);
  opts.work_dir = a.work_dir;
  opts.keep_indexes = a.keep;
  const auto model = train(base, cards, dims, opts);
  save_model(model, a.out);
  for (const auto& e : model.entries) {
    std::cerr << "n=" << e.cardinality << " d=" << e.dimensionality
              << " best=" << e.best_fraction << " total_io=" << e.total_io_at_best << "\n";
  }
  return 0;
}

struct RunArgs {
  std::string index, model, out = "-", alt = "all", strategy = "1";
  double cache_mb = 16.0;
  QuerySource q;
  std::size_t repeat = 1;
  bool parallel = false;
};

int cmd_run(const RunArgs& a) {
  const auto idx = load_index(a.index);
  const auto ds = read_index_dataset(idx);
  const auto wl = make_queries(ds, a.q);

  std::vector<Alternative> alts;
  if (a.alt == "all") {
    alts = all_alternatives();
  } else {
    alts.push_back(parse_alternative(a.alt));
  }
  std::optional<CostModel> model;
  const bool needs_model = std::find(alts.begin(), alts.end(), Alternative::kQwLsh) != alts.end();
  if (needs_model) {
    if (a.model.empty()) throw Error("--model is required for the qwlsh alternative");
    model = load_model(a.model);
  }
  CompareOptions opts;
  opts.strategy = strategy_flag(a.strategy);
  opts.repeats = a.repeat;
  opts.parallel = a.parallel;
  const auto cmp = compare_alternatives(idx, wl, mb_to_bytes(a.cache_mb),
                                        model ? &*model : nullptr, alts, opts);
  with_output(a.out, [&](std::ostream& os) { write_csv(os, cmp.reports); });
  return 0;
}

struct SweepArgs {
  std::string index, out = "-", strategy = "1";
  double cache_mb = 16.0;
  QuerySource q;
};

int cmd_sweep(const SweepArgs& a) {
  const auto idx = load_index(a.index);
  const auto ds = read_index_dataset(idx);
  const auto wl = make_queries(ds, a.q);
  const auto rows = sweep_report(idx, wl, mb_to_bytes(a.cache_mb), strategy_flag(a.strategy));
  with_output(a.out, [&](std::ostream& os) { write_csv(os, rows); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qwlsh: external-memory LSH with a partitioned buffer cache"};
  app.require_subcommand(1);

  BuildArgs ba;
  auto* build = app.add_subcommand("build", "Build an index directory from a dataset");
  build->add_option("--data", ba.data, "Input dataset")->required()->check(CLI::ExistingFile);
  build->add_option("--format", ba.format)->check(CLI::IsMember({"fvecs", "csv"}))->capture_default_str();
  build->add_option("--out", ba.out, "Index directory")->required();
  build->add_option("--c", ba.c, "Approximation ratio")->capture_default_str();
  build->add_option("--width", ba.width, "Bucket width")->capture_default_str();
  build->add_option("--delta", ba.delta, "Error probability")->capture_default_str();
  build->add_option("--seed", ba.seed)->capture_default_str();
  build->add_option("--m", ba.m, "Override the derived projection count");
  build->add_option("--name", ba.name, "Dataset label stored in the index");
  build->add_flag("--csv-header", ba.header, "CSV input has a header row");

  TrainArgs ta;
  auto* trainc = app.add_subcommand("train", "Train the cache-split cost model");
  trainc->add_option("--cards", ta.cards, "Cardinalities of the lattice")->required()->delimiter(',');
  trainc->add_option("--dims", ta.dims, "Dimensionalities of the lattice")->required()->delimiter(',');
  trainc->add_option("--cache", ta.cache_mb, "Cache size in MB")->capture_default_str();
  trainc->add_option("--queries", ta.queries)->capture_default_str();
  trainc->add_option("--k", ta.k)->check(CLI::Range(1, 100))->capture_default_str();
  trainc->add_option("--seed", ta.seed)->capture_default_str();
  trainc->add_option("--out", ta.out, "Model file")->required();
  trainc->add_option("--data", ta.data, "Base dataset (default: synthetic mixture)")->check(CLI::ExistingFile);
  trainc->add_option("--format", ta.format)->check(CLI::IsMember({"fvecs", "csv"}))->capture_default_str();
  trainc->add_flag("--csv-header", ta.header);
  trainc->add_option("--work-dir", ta.work_dir, "Scratch directory for lattice indexes")->capture_default_str();
  trainc->add_flag("--keep-indexes", ta.keep);
  trainc->add_option("--strategy", ta.strategy)->check(CLI::IsMember({"1", "2"}))->capture_default_str();

  auto add_queries = [](CLI::App* sub, QuerySource& q) {
    auto* file = sub->add_option("--queries-file", q.file, "One point id per line")->check(CLI::ExistingFile);
    auto* gen = sub->add_option("--gen-queries", q.gen, "Generate N dense-region queries")->capture_default_str();
    file->excludes(gen);
    sub->add_option("--k", q.k)->check(CLI::Range(1, 100))->capture_default_str();
    sub->add_option("--seed", q.seed, "Workload seed")->capture_default_str();
  };

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Run a workload under one or all cache alternatives");
  run->add_option("--index", ra.index)->required()->check(CLI::ExistingDirectory);
  run->add_option("--model", ra.model)->check(CLI::ExistingFile);
  run->add_option("--cache-mb", ra.cache_mb)->capture_default_str();
  add_queries(run, ra.q);
  run->add_option("--alt", ra.alt)
      ->check(CLI::IsMember({"naive", "ci", "cd", "cicd", "opt", "qwlsh", "all"}))
      ->capture_default_str();
  run->add_option("--strategy", ra.strategy)->check(CLI::IsMember({"1", "2"}))->capture_default_str();
  run->add_option("--repeat", ra.repeat)->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--out", ra.out, "CSV file, - for stdout")->capture_default_str();
  run->add_flag("--parallel", ra.parallel, "Run alternatives concurrently");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "IO for each of the 11 index-cache fractions");
  sweep->add_option("--index", sa.index)->required()->check(CLI::ExistingDirectory);
  sweep->add_option("--cache-mb", sa.cache_mb)->capture_default_str();
  add_queries(sweep, sa.q);
  sweep->add_option("--strategy", sa.strategy)->check(CLI::IsMember({"1", "2"}))->capture_default_str();
  sweep->add_option("--out", sa.out, "CSV file, - for stdout")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) return cmd_build(ba);
    if (*trainc) return cmd_train(ta);
    if (*run) return cmd_run(ra);
    if (*sweep) return cmd_sweep(sa);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
