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

#include "qwlsh/costmodel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qwlsh/error.hpp"
#include "qwlsh/query.hpp"

namespace qwlsh {

std::vector<SweepRow> sweep_fractions(const LshIndex& index, const QueryWorkload& wl,
                                      std::uint64_t cache_bytes, Strategy strategy) {
  std::vector<SweepRow> rows(kSweepFractions.size());
  std::vector<std::string> failures(rows.size());
  const auto count = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto fi = static_cast<std::size_t>(i);
    try {
      BufferCache cache({cache_bytes, kSweepFractions[fi], strategy, index.page_size()},
                        index.m());
      CachedIndex view(index, cache);
      const auto start = std::chrono::steady_clock::now();
      const auto run = run_queries(view, wl);
      const std::chrono::duration<double, std::milli> took =
          std::chrono::steady_clock::now() - start;
      rows[fi] = {kSweepFractions[fi], run.io, took.count()};
    } catch (const std::exception& e) {
      failures[fi] = e.what();
    }
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw Error(f);
  }
  return rows;
}

const SweepRow& best_row(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw Error("empty sweep");
  const SweepRow* best = &rows.front();
  for (const auto& r : rows) {
    const auto t = r.io.total_io_bytes();
    const auto bt = best->io.total_io_bytes();
    if (t < bt || (t == bt && r.fraction < best->fraction)) best = &r;
  }
  return *best;
}

void CostModel::validate() const {
  if (cards.empty() || dims.empty()) throw Error("cost model has an empty axis");
  auto strictly_increasing = [](const std::vector<std::size_t>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>{}) == v.end();
  };
  if (!strictly_increasing(cards) || !strictly_increasing(dims)) {
    throw Error("cost model axes must be strictly increasing");
  }
  if (cards.front() == 0 || dims.front() == 0) throw Error("cost model axis value 0");
  if (entries.size() != cards.size() * dims.size()) {
    throw Error("cost model lattice is incomplete");
  }
  for (std::size_t ci = 0; ci < cards.size(); ++ci) {
    for (std::size_t di = 0; di < dims.size(); ++di) {
      const auto& e = at(ci, di);
      if (e.cardinality != cards[ci] || e.dimensionality != dims[di]) {
        throw Error("cost model lattice is incomplete");
      }
      if (!(e.best_fraction >= 0.01 && e.best_fraction <= 0.99)) {
        throw Error("cost model fraction out of range");
      }
    }
  }
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw Error("fit_slope: bad input");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

CostModel train(const Dataset& base, const std::vector<std::size_t>& cards,
                const std::vector<std::size_t>& dims, const TrainOptions& opts) {
  CostModel model;
  model.cards = cards;
  model.dims = dims;
  model.trained_cache_bytes = opts.cache_bytes;
  model.trained_q_count = opts.q_count;
  for (std::size_t c : cards) {
    if (c > base.n()) throw Error("requested cardinality " + std::to_string(c) +
                                  " exceeds source n=" + std::to_string(base.n()));
  }
  for (std::size_t d : dims) {
    if (d > base.d()) throw Error("requested dimensionality " + std::to_string(d) +
                                  " exceeds source d=" + std::to_string(base.d()));
  }

  std::vector<double> xs_card, ys_index, xs_dim, ys_data;
  for (std::size_t card : cards) {
    for (std::size_t dim : dims) {
      const Dataset sub = prefix(base, card, dim);
      const auto dir = opts.work_dir / ("n" + std::to_string(card) + "_d" + std::to_string(dim));
      const LshParams params = derive_params(opts.c, opts.width, opts.delta, card);
      const LshIndex index = build_index(sub, params, opts.seed, dir, opts.page_size);
      const auto wl = generate_workload(sub, opts.q_count, opts.k, opts.seed);
      const auto rows = sweep_fractions(index, wl, opts.cache_bytes, opts.strategy);
      const auto& best = best_row(rows);
      model.entries.push_back({card, dim, best.fraction, best.io.total_io_bytes()});
      xs_card.push_back(static_cast<double>(card));
      ys_index.push_back(static_cast<double>(best.io.index_io_bytes));
      xs_dim.push_back(static_cast<double>(dim));
      ys_data.push_back(static_cast<double>(best.io.data_io_bytes));
      if (!opts.keep_indexes) std::filesystem::remove_all(dir);
    }
  }
  model.alpha_card = fit_slope(xs_card, ys_index);
  model.alpha_dim = fit_slope(xs_dim, ys_data);
  model.validate();
  return model;
}

namespace {

// Bracketing lattice indices and weight of the upper one, in log2 space.
struct Bracket {
  std::size_t lo = 0;
  std::size_t hi = 0;
  double t = 0.0;
};

Bracket bracket(const std::vector<std::size_t>& axis, std::size_t value) {
  if (axis.size() == 1 || value <= axis.front()) return {0, 0, 0.0};
  if (value >= axis.back()) return {axis.size() - 1, axis.size() - 1, 0.0};
  std::size_t hi = 1;
  while (axis[hi] < value) ++hi;
  const double lv = std::log2(static_cast<double>(axis[hi - 1]));
  const double hv = std::log2(static_cast<double>(axis[hi]));
  return {hi - 1, hi, (std::log2(static_cast<double>(value)) - lv) / (hv - lv)};
}

}  // namespace

double interpolate_fraction(const CostModel& model, std::size_t n, std::size_t d) {
  if (model.entries.empty()) throw Error("lookup on an empty cost model");
  const Bracket bc = bracket(model.cards, n);
  const Bracket bd = bracket(model.dims, d);
  const double f00 = model.at(bc.lo, bd.lo).best_fraction;
  const double f01 = model.at(bc.lo, bd.hi).best_fraction;
  const double f10 = model.at(bc.hi, bd.lo).best_fraction;
  const double f11 = model.at(bc.hi, bd.hi).best_fraction;
  const double low_card = f00 + (f01 - f00) * bd.t;
  const double high_card = f10 + (f11 - f10) * bd.t;
  return low_card + (high_card - low_card) * bc.t;
}

double round_to_setting(double fraction) {
  double best = kSweepFractions.front();
  double best_gap = std::abs(fraction - best);
  for (double s : kSweepFractions) {
    const double gap = std::abs(fraction - s);
    // Settings ascend, so <= sends exact midpoints upward. The epsilon
    // absorbs representation error in values like 0.45.
    if (gap <= best_gap + 1e-12) {
      best = s;
      best_gap = gap;
    }
  }
  return best;
}

double lookup_fraction(const CostModel& model, std::size_t n, std::size_t d) {
  return round_to_setting(interpolate_fraction(model, n, d));
}

namespace {
constexpr const char* kModelMagic = "qwlsh-model";
constexpr const char* kModelVersion = "v1";
}  // namespace

void save_model(const CostModel& model, const std::filesystem::path& path) {
  model.validate();
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f << kModelMagic << ' ' << kModelVersion << " cache=" << model.trained_cache_bytes
    << " q=" << model.trained_q_count << '\n';
  f << std::setprecision(17);
  for (const auto& e : model.entries) {
    f << e.cardinality << ' ' << e.dimensionality << ' ' << e.best_fraction << ' '
      << e.total_io_at_best << ' ' << model.alpha_card << ' ' << model.alpha_dim << '\n';
  }
  if (!f) throw Error("short write to " + path.string());
}

CostModel load_model(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line)) throw Error("empty model file");
  CostModel model;
  {
    std::istringstream hs(line);
    std::string magic, version, cache, q;
    hs >> magic >> version >> cache >> q;
    if (magic != kModelMagic) throw Error("not a model file");
    if (version != kModelVersion) throw Error("unsupported model version '" + version + "'");
    if (cache.rfind("cache=", 0) != 0 || q.rfind("q=", 0) != 0) {
      throw Error("malformed model header");
    }
    try {
      model.trained_cache_bytes = std::stoull(cache.substr(6));
      model.trained_q_count = std::stoull(q.substr(2));
    } catch (const std::exception&) {
      throw Error("malformed model header");
    }
  }
  std::size_t line_no = 1;
  bool first = true;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    ModelEntry e;
    double ac = 0.0;
    double ad = 0.0;
    if (!(ls >> e.cardinality >> e.dimensionality >> e.best_fraction >>
          e.total_io_at_best >> ac >> ad)) {
      throw Error("malformed model entry at line " + std::to_string(line_no));
    }
    std::string trailing;
    if (ls >> trailing) throw Error("trailing data at line " + std::to_string(line_no));
    if (first) {
      model.alpha_card = ac;
      model.alpha_dim = ad;
      first = false;
    }
    if (model.cards.empty() || model.cards.back() != e.cardinality) {
      if (std::find(model.cards.begin(), model.cards.end(), e.cardinality) == model.cards.end()) {
        model.cards.push_back(e.cardinality);
      }
    }
    if (model.cards.size() == 1) model.dims.push_back(e.dimensionality);
    model.entries.push_back(e);
  }
  model.validate();
  return model;
}

}  // namespace qwlsh
