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

#include "optbench/kernels.hpp"

#include <algorithm>
#include <cstdint>

#include "optbench/error.hpp"

namespace optbench {

namespace {

// Below this many multiply-adds the fork/join overhead dominates.
constexpr std::int64_t kParallelWork = 1 << 14;
constexpr std::size_t kColumnBlock = 8;

void check_forward(const Matrix& x, std::span<const double> w, std::span<const double> b, const Matrix& y) {
  if (x.cols == 0 || w.size() % x.cols != 0) fail(ErrorCode::ShapeMismatch, "weight size not a multiple of input width");
  const std::size_t out = w.size() / x.cols;
  if (!b.empty() && b.size() != out) fail(ErrorCode::ShapeMismatch, "bias length differs from output width");
  if (y.rows != x.rows || y.cols != out) fail(ErrorCode::ShapeMismatch, "output matrix has the wrong shape");
}

void check_backward_input(const Matrix& dy, std::span<const double> w, const Matrix& dx) {
  if (w.size() != dy.cols * dx.cols || dx.rows != dy.rows) {
    fail(ErrorCode::ShapeMismatch, "backward-input shapes disagree");
  }
}

void check_backward_params(const Matrix& dy, const Matrix& x, std::span<const double> dw, std::span<const double> db) {
  if (dy.rows != x.rows || dw.size() != dy.cols * x.cols || (!db.empty() && db.size() != dy.cols)) {
    fail(ErrorCode::ShapeMismatch, "backward-params shapes disagree");
  }
}

void check_moments(const Matrix& x, std::size_t begin, std::size_t end, std::span<const double> mean,
                   std::span<const double> var) {
  if (begin >= end || end > x.rows || mean.size() != x.cols || var.size() != x.cols) {
    fail(ErrorCode::ShapeMismatch, "column-moment range or output size invalid");
  }
}

}  // namespace

namespace kernels::serial {

void affine_forward(const Matrix& x, std::span<const double> w, std::span<const double> b, Matrix& y) {
  check_forward(x, w, b, y);
  for (std::size_t n = 0; n < x.rows; ++n) {
    for (std::size_t o = 0; o < y.cols; ++o) {
      double acc = b.empty() ? 0.0 : b[o];
      for (std::size_t i = 0; i < x.cols; ++i) acc += x(n, i) * w[o * x.cols + i];
      y(n, o) = acc;
    }
  }
}

void affine_backward_input(const Matrix& dy, std::span<const double> w, Matrix& dx) {
  check_backward_input(dy, w, dx);
  for (std::size_t n = 0; n < dy.rows; ++n) {
    for (std::size_t i = 0; i < dx.cols; ++i) {
      double acc = 0.0;
      for (std::size_t o = 0; o < dy.cols; ++o) acc += dy(n, o) * w[o * dx.cols + i];
      dx(n, i) = acc;
    }
  }
}

void affine_backward_params(const Matrix& dy, const Matrix& x, std::span<double> dw, std::span<double> db) {
  check_backward_params(dy, x, dw, db);
  for (std::size_t o = 0; o < dy.cols; ++o) {
    for (std::size_t i = 0; i < x.cols; ++i) {
      double acc = 0.0;
      for (std::size_t n = 0; n < dy.rows; ++n) acc += dy(n, o) * x(n, i);
      dw[o * x.cols + i] = acc;
    }
    if (!db.empty()) {
      double acc = 0.0;
      for (std::size_t n = 0; n < dy.rows; ++n) acc += dy(n, o);
      db[o] = acc;
    }
  }
}

void column_moments(const Matrix& x, std::size_t row_begin, std::size_t row_end, std::span<double> mean,
                    std::span<double> var) {
  check_moments(x, row_begin, row_end, mean, var);
  const auto count = static_cast<double>(row_end - row_begin);
  for (std::size_t c = 0; c < x.cols; ++c) {
    double sum = 0.0;
    for (std::size_t n = row_begin; n < row_end; ++n) sum += x(n, c);
    const double mu = sum / count;
    double sq = 0.0;
    for (std::size_t n = row_begin; n < row_end; ++n) {
      const double d = x(n, c) - mu;
      sq += d * d;
    }
    mean[c] = mu;
    var[c] = sq / count;
  }
}

}  // namespace kernels::serial

namespace kernels::parallel {

void affine_forward(const Matrix& x, std::span<const double> w, std::span<const double> b, Matrix& y) {
  check_forward(x, w, b, y);
  const auto rows = static_cast<std::int64_t>(x.rows);
  const std::size_t in = x.cols;
  const std::size_t out = y.cols;
  const double* xp = x.data.data();
  const double* wp = w.data();
  double* yp = y.data.data();
  const bool has_bias = !b.empty();
  const double* bp = b.data();
#pragma omp parallel for schedule(static) if (rows * static_cast<std::int64_t>(in * out) >= kParallelWork)
  for (std::int64_t n = 0; n < rows; ++n) {
    const double* xr = xp + n * in;
    double* yr = yp + n * out;
    for (std::size_t o = 0; o < out; ++o) {
      const double* wr = wp + o * in;
      double acc = has_bias ? bp[o] : 0.0;
      for (std::size_t i = 0; i < in; ++i) acc += xr[i] * wr[i];
      yr[o] = acc;
    }
  }
}

void affine_backward_input(const Matrix& dy, std::span<const double> w, Matrix& dx) {
  check_backward_input(dy, w, dx);
  const auto rows = static_cast<std::int64_t>(dy.rows);
  const std::size_t in = dx.cols;
  const std::size_t out = dy.cols;
  const double* dyp = dy.data.data();
  const double* wp = w.data();
  double* dxp = dx.data.data();
#pragma omp parallel for schedule(static) if (rows * static_cast<std::int64_t>(in * out) >= kParallelWork)
  for (std::int64_t n = 0; n < rows; ++n) {
    const double* dyr = dyp + n * out;
    double* dxr = dxp + n * in;
    for (std::size_t i = 0; i < in; ++i) {
      double acc = 0.0;
      for (std::size_t o = 0; o < out; ++o) acc += dyr[o] * wp[o * in + i];
      dxr[i] = acc;
    }
  }
}

// The two reductions below stream rows in order and give each thread a block
// of output columns. Every output still sums over n ascending from 0.0, so the
// results match the serial reference bitwise.
void affine_backward_params(const Matrix& dy, const Matrix& x, std::span<double> dw, std::span<double> db) {
  check_backward_params(dy, x, dw, db);
  const std::size_t out = dy.cols;
  const std::size_t in = x.cols;
  const std::size_t rows = dy.rows;
  const double* dyp = dy.data.data();
  const double* xp = x.data.data();
  double* dwp = dw.data();
  double* dbp = db.data();
  const bool has_bias = !db.empty();
  const auto blocks = static_cast<std::int64_t>((out + kColumnBlock - 1) / kColumnBlock);
  const auto work = static_cast<std::int64_t>(out * in * rows);
#pragma omp parallel for schedule(static) if (work >= kParallelWork)
  for (std::int64_t blk = 0; blk < blocks; ++blk) {
    const std::size_t o_begin = static_cast<std::size_t>(blk) * kColumnBlock;
    const std::size_t o_end = std::min(out, o_begin + kColumnBlock);
    std::fill(dwp + o_begin * in, dwp + o_end * in, 0.0);
    if (has_bias) std::fill(dbp + o_begin, dbp + o_end, 0.0);
    for (std::size_t n = 0; n < rows; ++n) {
      const double* xr = xp + n * in;
      const double* dyr = dyp + n * out;
      for (std::size_t o = o_begin; o < o_end; ++o) {
        const double d = dyr[o];
        double* dwr = dwp + o * in;
        for (std::size_t i = 0; i < in; ++i) dwr[i] += d * xr[i];
        if (has_bias) dbp[o] += d;
      }
    }
  }
}

void column_moments(const Matrix& x, std::size_t row_begin, std::size_t row_end, std::span<double> mean,
                    std::span<double> var) {
  check_moments(x, row_begin, row_end, mean, var);
  const std::size_t cols = x.cols;
  const auto count = static_cast<double>(row_end - row_begin);
  const double* xp = x.data.data();
  const auto blocks = static_cast<std::int64_t>((cols + kColumnBlock - 1) / kColumnBlock);
  const auto work = static_cast<std::int64_t>(cols * (row_end - row_begin));
#pragma omp parallel for schedule(static) if (work >= kParallelWork)
  for (std::int64_t blk = 0; blk < blocks; ++blk) {
    const std::size_t c_begin = static_cast<std::size_t>(blk) * kColumnBlock;
    const std::size_t c_end = std::min(cols, c_begin + kColumnBlock);
    double sum[kColumnBlock] = {};
    double sq[kColumnBlock] = {};
    for (std::size_t n = row_begin; n < row_end; ++n) {
      const double* xr = xp + n * cols;
      for (std::size_t c = c_begin; c < c_end; ++c) sum[c - c_begin] += xr[c];
    }
    for (std::size_t c = c_begin; c < c_end; ++c) mean[c] = sum[c - c_begin] / count;
    for (std::size_t n = row_begin; n < row_end; ++n) {
      const double* xr = xp + n * cols;
      for (std::size_t c = c_begin; c < c_end; ++c) {
        const double d = xr[c] - mean[c];
        sq[c - c_begin] += d * d;
      }
    }
    for (std::size_t c = c_begin; c < c_end; ++c) var[c] = sq[c - c_begin] / count;
  }
}

}  // namespace kernels::parallel

}  // namespace optbench
