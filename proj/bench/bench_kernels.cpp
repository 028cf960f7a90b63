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

// Serial reference kernels against their OpenMP counterparts.
// Run with OMP_NUM_THREADS set to the thread count of interest.

#include <benchmark/benchmark.h>

#include <random>

#include "optbench/kernels.hpp"

namespace {

using optbench::Matrix;

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (double& v : m.data) v = dist(rng);
  return m;
}

struct AffineCase {
  Matrix x;
  Matrix w;
  Matrix b;
  Matrix y;
  Matrix dy;
  Matrix dx;

  AffineCase(std::size_t rows, std::size_t in, std::size_t out)
      : x(random_matrix(rows, in, 1)),
        w(random_matrix(out, in, 2)),
        b(random_matrix(1, out, 3)),
        y(rows, out),
        dy(random_matrix(rows, out, 4)),
        dx(rows, in) {}
};

template <auto Fn>
void BM_Forward(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  AffineCase c(rows, 64, 64);
  for (auto _ : state) {
    Fn(c.x, c.w.data, c.b.data, c.y);
    benchmark::DoNotOptimize(c.y.data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows));
}

template <auto Fn>
void BM_BackwardInput(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  AffineCase c(rows, 64, 64);
  for (auto _ : state) {
    Fn(c.dy, c.w.data, c.dx);
    benchmark::DoNotOptimize(c.dx.data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows));
}

template <auto Fn>
void BM_BackwardParams(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  AffineCase c(rows, 64, 64);
  std::vector<double> dw(64 * 64);
  std::vector<double> db(64);
  for (auto _ : state) {
    Fn(c.dy, c.x, dw, db);
    benchmark::DoNotOptimize(dw.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows));
}

template <auto Fn>
void BM_Moments(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(rows, 64, 5);
  std::vector<double> mean(64);
  std::vector<double> var(64);
  for (auto _ : state) {
    Fn(x, 0, rows, mean, var);
    benchmark::DoNotOptimize(var.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows));
}

namespace serial = optbench::kernels::serial;
namespace parallel = optbench::kernels::parallel;

BENCHMARK(BM_Forward<serial::affine_forward>)->Name("affine_forward/serial")->Range(64, 16384);
BENCHMARK(BM_Forward<parallel::affine_forward>)->Name("affine_forward/parallel")->Range(64, 16384);
BENCHMARK(BM_BackwardInput<serial::affine_backward_input>)->Name("affine_backward_input/serial")->Range(64, 16384);
BENCHMARK(BM_BackwardInput<parallel::affine_backward_input>)->Name("affine_backward_input/parallel")->Range(64, 16384);
BENCHMARK(BM_BackwardParams<serial::affine_backward_params>)->Name("affine_backward_params/serial")->Range(64, 16384);
BENCHMARK(BM_BackwardParams<parallel::affine_backward_params>)
    ->Name("affine_backward_params/parallel")
    ->Range(64, 16384);
BENCHMARK(BM_Moments<serial::column_moments>)->Name("column_moments/serial")->Range(64, 16384);
BENCHMARK(BM_Moments<parallel::column_moments>)->Name("column_moments/parallel")->Range(64, 16384);

}  // namespace

BENCHMARK_MAIN();
