// Copyright 2026 The optbench Authors.
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
#include <vector>

namespace optbench {

/// Dense row-major float64 matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

// Dense kernels used by the MLP. Weights are stored (out x in) row-major.
//
// `serial` is the straight-loop reference; `parallel` distributes independent
// output rows/columns over OpenMP threads. Each output element is reduced in
// the same order in both, so results are bitwise identical and a training
// run does not depend on the thread count.

namespace kernels::serial {

/// y = x W^T + b (b may be empty).
void affine_forward(const Matrix& x, std::span<const double> w, std::span<const double> b, Matrix& y);
/// dx = dy W
void affine_backward_input(const Matrix& dy, std::span<const double> w, Matrix& dx);
/// dW = dy^T x, db = column sums of dy (db may be empty).
void affine_backward_params(const Matrix& dy, const Matrix& x, std::span<double> dw, std::span<double> db);
/// Per-column mean and biased variance over rows [row_begin, row_end).
void column_moments(const Matrix& x, std::size_t row_begin, std::size_t row_end, std::span<double> mean,
                    std::span<double> var);

}  // namespace kernels::serial

namespace kernels::parallel {

void affine_forward(const Matrix& x, std::span<const double> w, std::span<const double> b, Matrix& y);
void affine_backward_input(const Matrix& dy, std::span<const double> w, Matrix& dx);
void affine_backward_params(const Matrix& dy, const Matrix& x, std::span<double> dw, std::span<double> db);
void column_moments(const Matrix& x, std::size_t row_begin, std::size_t row_end, std::span<double> mean,
                    std::span<double> var);

}  // namespace kernels::parallel

}  // namespace optbench
