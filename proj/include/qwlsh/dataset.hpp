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
#include <string>
#include <vector>

namespace qwlsh {

using PointId = std::uint64_t;

struct Point {
  PointId id = 0;
  std::vector<double> coords;
};

struct Neighbor {
  PointId id = 0;
  double dist = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Orders by distance, then id. Used for every result list.
inline bool neighbor_less(const Neighbor& a, const Neighbor& b) {
  return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
}

// Row-major n x d matrix of 8-byte reals. Immutable once constructed;
// point ids are the row ordinals.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::string name, std::size_t n, std::size_t d,
          std::vector<double> coords);

  const std::string& name() const { return name_; }
  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }

  std::span<const double> row(PointId id) const {
    return {coords_.data() + id * d_, d_};
  }
  Point point(PointId id) const;
  std::span<const double> coords() const { return coords_; }

  // Bytes occupied by one record in the on-disk data file.
  std::size_t record_bytes() const { return d_ * sizeof(double); }

 private:
  std::string name_;
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> coords_;
};

Dataset load_fvecs(const std::filesystem::path& path);
void save_fvecs(const Dataset& ds, const std::filesystem::path& path);

Dataset load_csv(const std::filesystem::path& path, bool has_header);
void save_csv(const Dataset& ds, const std::filesystem::path& path);

// Keeps the first d_new coordinates of every point.
Dataset truncate_dims(const Dataset& ds, std::size_t d_new);

// First `n_new` points and first `d_new` coordinates; the sub-datasets the
// cost-model trainer sweeps over.
Dataset prefix(const Dataset& ds, std::size_t n_new, std::size_t d_new);

struct MixtureSpec {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t clusters = 16;
  double center_spread = 10.0;
  // Per-cluster standard deviations are drawn log-uniformly from this range
  // so that the dataset has regions of distinctly different density.
  double sigma_min = 0.5;
  double sigma_max = 2.0;
  // Each cluster lies on a random latent_dim-dimensional subspace plus
  // isotropic noise; 0 makes clusters full-dimensional Gaussians.
  std::size_t latent_dim = 8;
  double noise = 0.1;
  std::uint64_t seed = 1;
  std::string name = "mixture";
};

// Synthetic Gaussian mixture. Point i belongs to cluster i mod clusters, so
// every prefix of the dataset samples all clusters, and every coordinate
// prefix keeps the same neighbourhood structure up to scale.
Dataset make_gaussian_mixture(const MixtureSpec& spec);

}  // namespace qwlsh
