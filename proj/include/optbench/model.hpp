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
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "optbench/kernels.hpp"
#include "optbench/param_store.hpp"

namespace optbench {

enum class Mode { train, eval };

/// Fully connected ReLU network. Hidden layer l runs affine -> (BN) -> ReLU;
/// the last layer is affine to logits.
struct MlpConfig {
  std::vector<std::size_t> layer_widths{2, 16, 2};
  std::vector<bool> use_bn{true};              // one entry per hidden layer
  std::vector<double> bn_gamma_init{1.0};      // one entry per BN layer
  double bn_epsilon = 1e-5;
  double bn_stats_decay = 0.9;
  std::size_t virtual_batch_size = 64;
  double label_smoothing = 0.0;
  std::uint64_t init_seed = 0;

  std::size_t num_hidden() const { return layer_widths.size() < 2 ? 0 : layer_widths.size() - 2; }
  std::size_t num_classes() const { return layer_widths.empty() ? 0 : layer_widths.back(); }
  std::size_t num_bn_layers() const;

  /// Throws InvalidConfig.
  void validate() const;

  friend bool operator==(const MlpConfig&, const MlpConfig&) = default;
};

struct Batch {
  Matrix inputs;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  friend bool operator==(const Batch&, const Batch&) = default;
};

struct BnLayerStats {
  std::vector<double> running_mean;
  std::vector<double> running_var;

  friend bool operator==(const BnLayerStats&, const BnLayerStats&) = default;
};

/// One entry per hidden layer; layers without BN hold empty vectors.
struct BnRunningStats {
  std::vector<BnLayerStats> layers;

  static BnRunningStats initial(const MlpConfig& config);
  friend bool operator==(const BnRunningStats&, const BnRunningStats&) = default;
};

// ---------------------------------------------------------------------------
// Batch normalization

struct BnCache {
  Matrix xhat;
  Matrix inv_std;  // one row per virtual sub-batch
  std::size_t virtual_batch_size = 0;
};

struct BnOutput {
  Matrix y;
  BnCache cache;
  BnLayerStats stats;
};

/// Batch normalization with a virtual (ghost) batch size.
///
/// Train mode splits the rows into consecutive sub-batches of
/// `virtual_batch_size`, normalizes each with its own mean and biased
/// variance, and moves the running statistics by
/// running <- rho * running + (1 - rho) * (sub-batch statistic averaged over
/// sub-batches). Eval mode normalizes with the running statistics.
///
/// `input_shift` is a per-feature constant that belongs to the layer input but
/// is not folded into `x` (the MLP passes the pre-BN bias here). It cancels in
/// train-mode normalization, so it only enters the running mean and eval mode.
/// A column with var + eps == 0 normalizes to 0.
BnOutput bn_forward(const Matrix& x, std::span<const double> gamma, std::span<const double> beta, double eps,
                    std::size_t virtual_batch_size, Mode mode, const BnLayerStats& stats, double rho,
                    std::span<const double> input_shift = {});

struct BnGrads {
  Matrix dx;
  std::vector<double> dgamma;
  std::vector<double> dbeta;
};

BnGrads bn_backward(const Matrix& dy, const BnCache& cache, std::span<const double> gamma);

// ---------------------------------------------------------------------------
// Loss

/// Mean over rows of the cross-entropy between softmax(logits) and
/// (1 - tau) * onehot + tau / K.
double smoothed_cross_entropy(const Matrix& logits, std::span<const int> labels, double tau);

/// Row-wise softmax.
Matrix softmax(const Matrix& logits);

// ---------------------------------------------------------------------------
// Network

ParamStore init_mlp(const MlpConfig& config, std::uint64_t rng_seed);

struct LayerCache {
  Matrix input;       // layer input
  Matrix pre;         // affine output; excludes the bias on BN layers
  BnCache bn;         // populated on BN layers
  Matrix activation;  // post-ReLU output
};

struct ForwardCache {
  Mode mode = Mode::eval;
  std::uint64_t param_fingerprint = 0;
  std::vector<LayerCache> hidden;
  Matrix output_input;
  Matrix probabilities;
  std::vector<int> labels;
  double label_smoothing = 0.0;
};

struct ForwardResult {
  Matrix logits;
  double loss = 0.0;
  ForwardCache cache;
  BnRunningStats stats;
};

/// Throws ShapeMismatch, NonFiniteInput, IndivisibleBatch.
ForwardResult forward(const ParamStore& params, const BnRunningStats& stats, const Batch& batch,
                      const MlpConfig& config, Mode mode);

/// Exact gradients of the smoothed loss, one vector per group in store order.
/// Throws StaleCache unless `cache` came from a train-mode forward on these
/// exact parameter values.
std::vector<std::vector<double>> backward(const ForwardCache& cache, const ParamStore& params,
                                          const MlpConfig& config);

std::uint64_t fingerprint(const ParamStore& params);

double accuracy(const Matrix& logits, std::span<const int> labels);

struct FdReport {
  double max_relative_error = 0.0;
  std::size_t coordinates_checked = 0;
  std::string worst_group;
  std::size_t worst_index = 0;
};

/// Central differences on a seeded subset of coordinates (every coordinate
/// when the model has at most `max_coordinates`; otherwise at least one per
/// group), compared with backward(). Relative error uses the denominator
/// max(|a|, |b|, 1e-8). Throws InvalidConfig for h <= 0.
FdReport finite_difference_check(const ParamStore& params, const BnRunningStats& stats, const Batch& batch,
                                 const MlpConfig& config, double h, std::size_t max_coordinates = 256,
                                 std::uint64_t sample_seed = 0);

// ---------------------------------------------------------------------------
// Data

struct Dataset {
  Batch train;
  Batch eval;
};

/// Gaussian blobs around seeded centers in [-1, 1]^features; 80/20 split
/// after a seeded shuffle. Throws InvalidConfig.
Dataset gen_synthetic_dataset(std::size_t classes, std::size_t features, std::size_t per_class, double spread,
                              std::uint64_t seed);

/// `feature_0,...,feature_{d-1},label` header plus one row per example.
void write_dataset_csv(const Batch& batch, std::ostream& out);

Batch gather_rows(const Batch& source, std::span<const std::size_t> rows);

}  // namespace optbench
