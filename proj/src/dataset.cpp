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

#include "qwlsh/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "qwlsh/bytes.hpp"
#include "qwlsh/error.hpp"

namespace qwlsh {

Dataset::Dataset(std::string name, std::size_t n, std::size_t d,
                 std::vector<double> coords)
    : name_(std::move(name)), n_(n), d_(d), coords_(std::move(coords)) {
  if (n_ == 0 || d_ == 0) throw Error("dataset must have n >= 1 and d >= 1");
  if (coords_.size() != n_ * d_) throw Error("dataset coordinate count != n*d");
}

Point Dataset::point(PointId id) const {
  if (id >= n_) throw Error("point id out of range");
  auto r = row(id);
  return Point{id, std::vector<double>(r.begin(), r.end())};
}

namespace {

std::vector<std::byte> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  return bytes;
}

std::string stem_name(const std::filesystem::path& path) {
  return path.stem().string();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

Dataset load_fvecs(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  std::size_t pos = 0;
  std::size_t d = 0;
  std::size_t n = 0;
  std::vector<double> coords;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 4) throw Error("truncated fvecs header");
    const auto dim = load_le<std::int32_t>(bytes.data() + pos);
    pos += 4;
    if (dim <= 0) throw Error("fvecs record with non-positive dimension");
    if (n == 0) {
      d = static_cast<std::size_t>(dim);
    } else if (static_cast<std::size_t>(dim) != d) {
      throw Error("inconsistent dimension at record " + std::to_string(n));
    }
    if (bytes.size() - pos < d * 4) throw Error("truncated fvecs record");
    for (std::size_t j = 0; j < d; ++j) {
      coords.push_back(load_le<float>(bytes.data() + pos));
      pos += 4;
    }
    ++n;
  }
  if (n == 0) throw Error("empty fvecs file");
  return Dataset(stem_name(path), n, d, std::move(coords));
}

void save_fvecs(const Dataset& ds, const std::filesystem::path& path) {
  std::vector<std::byte> out((4 + ds.d() * 4) * ds.n());
  std::byte* p = out.data();
  for (PointId i = 0; i < ds.n(); ++i) {
    store_le(p, static_cast<std::int32_t>(ds.d()));
    p += 4;
    for (double v : ds.row(i)) {
      store_le(p, static_cast<float>(v));
      p += 4;
    }
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
}

Dataset load_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  std::size_t d = 0;
  std::size_t n = 0;
  std::vector<double> coords;
  while (std::getline(in, line)) {
    ++line_no;
    if (has_header && line_no == 1) continue;
    std::string_view rest = trim(line);
    if (rest.empty()) continue;
    std::size_t cols = 0;
    while (true) {
      const auto comma = rest.find(',');
      const auto cell = trim(rest.substr(0, comma));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw Error("non-numeric cell at line " + std::to_string(line_no));
      }
      coords.push_back(v);
      ++cols;
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (n == 0) {
      d = cols;
    } else if (cols != d) {
      throw Error("ragged row at line " + std::to_string(line_no));
    }
    ++n;
  }
  if (n == 0) throw Error("empty csv file");
  return Dataset(stem_name(path), n, d, std::move(coords));
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f.precision(17);
  for (PointId i = 0; i < ds.n(); ++i) {
    const auto r = ds.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) f << ',';
      f << r[j];
    }
    f << '\n';
  }
}

Dataset truncate_dims(const Dataset& ds, std::size_t d_new) {
  if (d_new == 0 || d_new > ds.d()) {
    throw Error("truncate_dims: d_new must be in [1, " + std::to_string(ds.d()) + "]");
  }
  return prefix(ds, ds.n(), d_new);
}

Dataset prefix(const Dataset& ds, std::size_t n_new, std::size_t d_new) {
  if (n_new == 0 || n_new > ds.n() || d_new == 0 || d_new > ds.d()) {
    throw Error("prefix: requested " + std::to_string(n_new) + "x" +
                std::to_string(d_new) + " exceeds source " +
                std::to_string(ds.n()) + "x" + std::to_string(ds.d()));
  }
  std::vector<double> coords;
  coords.reserve(n_new * d_new);
  for (PointId i = 0; i < n_new; ++i) {
    const auto r = ds.row(i);
    coords.insert(coords.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(d_new));
  }
  return Dataset(ds.name(), n_new, d_new, std::move(coords));
}

Dataset make_gaussian_mixture(const MixtureSpec& spec) {
  if (spec.n == 0 || spec.d == 0 || spec.clusters == 0) {
    throw Error("mixture needs n, d, clusters >= 1");
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> centers(spec.clusters * spec.d);
  std::vector<double> sigmas(spec.clusters);
  const double log_lo = std::log(spec.sigma_min);
  const double log_hi = std::log(spec.sigma_max);
  for (std::size_t c = 0; c < spec.clusters; ++c) {
    for (std::size_t j = 0; j < spec.d; ++j) {
      centers[c * spec.d + j] = spec.center_spread * normal(rng);
    }
    sigmas[c] = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
  }

  // Latent bases are scaled by 1/sqrt(latent_dim) so a unit latent step moves
  // a point about sigma per coordinate, as in the full-rank case.
  const std::size_t latent = spec.latent_dim;
  std::vector<double> bases(spec.clusters * spec.d * latent);
  const double basis_scale = latent ? 1.0 / std::sqrt(static_cast<double>(latent)) : 0.0;
  for (auto& x : bases) x = basis_scale * normal(rng);

  std::vector<double> coords(spec.n * spec.d);
  std::vector<double> z(latent);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const std::size_t c = i % spec.clusters;
    double* out = coords.data() + i * spec.d;
    const double* center = centers.data() + c * spec.d;
    if (latent == 0) {
      for (std::size_t j = 0; j < spec.d; ++j) out[j] = center[j] + sigmas[c] * normal(rng);
      continue;
    }
    for (auto& v : z) v = sigmas[c] * normal(rng);
    const double* basis = bases.data() + c * spec.d * latent;
    for (std::size_t j = 0; j < spec.d; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < latent; ++t) acc += basis[j * latent + t] * z[t];
      out[j] = center[j] + acc + spec.noise * normal(rng);
    }
  }
  return Dataset(spec.name, spec.n, spec.d, std::move(coords));
}

}  // namespace qwlsh
