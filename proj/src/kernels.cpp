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

#include "qwlsh/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qwlsh/error.hpp"

namespace qwlsh::kernels {

double squared_l2(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

namespace {

void check_shapes(MatrixView x, std::span<const double> q,
                  std::span<double> out) {
  if (q.size() != x.cols || out.size() != x.rows) {
    throw Error("kernel shape mismatch");
  }
}

void check_projection(MatrixView x, MatrixView dirs,
                      std::span<const double> offsets, std::span<double> out) {
  if (dirs.cols != x.cols || offsets.size() != dirs.rows ||
      out.size() != dirs.rows * x.rows) {
    throw Error("projection shape mismatch");
  }
}

double kth_distance_of(MatrixView sample, std::size_t i, std::size_t rank,
                       std::vector<double>& scratch) {
  scratch.clear();
  for (std::size_t j = 0; j < sample.rows; ++j) {
    if (j != i) scratch.push_back(squared_l2(sample.row(i), sample.row(j)));
  }
  if (scratch.empty()) return 0.0;
  const std::size_t r = std::min(rank, scratch.size()) - 1;
  std::nth_element(scratch.begin(), scratch.begin() + r, scratch.end());
  return std::sqrt(scratch[r]);
}

}  // namespace

namespace serial {

void squared_distances(MatrixView x, std::span<const double> q,
                       std::span<double> out) {
  check_shapes(x, q, out);
  for (std::size_t i = 0; i < x.rows; ++i) out[i] = squared_l2(x.row(i), q);
}

void project(MatrixView x, MatrixView dirs, std::span<const double> offsets,
             double width, std::span<double> out) {
  check_projection(x, dirs, offsets, out);
  for (std::size_t j = 0; j < dirs.rows; ++j) {
    for (std::size_t i = 0; i < x.rows; ++i) {
      out[j * x.rows + i] = (dot(dirs.row(j), x.row(i)) + offsets[j]) / width;
    }
  }
}

void kth_neighbor_distance(MatrixView sample, std::size_t rank,
                           std::span<double> out) {
  if (out.size() != sample.rows || rank == 0) {
    throw Error("kth_neighbor_distance: bad arguments");
  }
  std::vector<double> scratch;
  for (std::size_t i = 0; i < sample.rows; ++i) {
    out[i] = kth_distance_of(sample, i, rank, scratch);
  }
}

}  // namespace serial

namespace omp {

void squared_distances(MatrixView x, std::span<const double> q,
                       std::span<double> out) {
  check_shapes(x, q, out);
  const auto rows = static_cast<std::ptrdiff_t>(x.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    out[i] = squared_l2(x.row(i), q);
  }
}

void project(MatrixView x, MatrixView dirs, std::span<const double> offsets,
             double width, std::span<double> out) {
  check_projection(x, dirs, offsets, out);
  const auto total = static_cast<std::ptrdiff_t>(dirs.rows * x.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < total; ++t) {
    const std::size_t j = static_cast<std::size_t>(t) / x.rows;
    const std::size_t i = static_cast<std::size_t>(t) % x.rows;
    out[t] = (dot(dirs.row(j), x.row(i)) + offsets[j]) / width;
  }
}

void kth_neighbor_distance(MatrixView sample, std::size_t rank,
                           std::span<double> out) {
  if (out.size() != sample.rows || rank == 0) {
    throw Error("kth_neighbor_distance: bad arguments");
  }
  const auto rows = static_cast<std::ptrdiff_t>(sample.rows);
#pragma omp parallel
  {
    std::vector<double> scratch;
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
      out[i] = kth_distance_of(sample, static_cast<std::size_t>(i), rank,
                               scratch);
    }
  }
}

}  // namespace omp

}  // namespace qwlsh::kernels
