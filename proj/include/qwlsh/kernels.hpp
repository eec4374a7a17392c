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
#include <span>

// Data-parallel inner loops. Each kernel has a plain serial reference in
// `serial` and an OpenMP version in `omp`; both write every output element
// with the same arithmetic in the same order, so results are bit-identical.
// Library code calls the `omp` variants; tests compare the two.
namespace qwlsh::kernels {

struct MatrixView {
  std::span<const double> data;  // row-major
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::span<const double> row(std::size_t i) const {
    return data.subspan(i * cols, cols);
  }
};

double squared_l2(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);

namespace serial {

// out[i] = |x_i - q|^2
void squared_distances(MatrixView x, std::span<const double> q,
                       std::span<double> out);

// out[j * x.rows + i] = (a_j . x_i + offsets[j]) / width
// where a_j is row j of `directions`.
void project(MatrixView x, MatrixView directions,
             std::span<const double> offsets, double width,
             std::span<double> out);

// out[i] = distance from sample row i to its rank-th nearest other row
// (rank clamped to rows - 1).
void kth_neighbor_distance(MatrixView sample, std::size_t rank,
                           std::span<double> out);

}  // namespace serial

namespace omp {

void squared_distances(MatrixView x, std::span<const double> q,
                       std::span<double> out);
void project(MatrixView x, MatrixView directions,
             std::span<const double> offsets, double width,
             std::span<double> out);
void kth_neighbor_distance(MatrixView sample, std::size_t rank,
                           std::span<double> out);

}  // namespace omp

}  // namespace qwlsh::kernels
