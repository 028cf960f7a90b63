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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "optbench/error.hpp"
#include "optbench/model.hpp"
#include "test_support.hpp"

namespace optbench {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an optbench::Error";
  return ErrorCode::InvalidConfig;
}

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  Matrix m(r, c);
  m.data = testing::random_vector(rng, r * c, scale);
  return m;
}

BnLayerStats unit_stats(std::size_t cols) {
  return BnLayerStats{std::vector<double>(cols, 0.0), std::vector<double>(cols, 1.0)};
}

Batch random_batch(std::mt19937_64& rng, std::size_t rows, std::size_t features, std::size_t classes) {
  Batch b{random_matrix(rng, rows, features), std::vector<int>(rows)};
  std::uniform_int_distribution<int> label(0, static_cast<int>(classes) - 1);
  for (auto& y : b.labels) y = label(rng);
  return b;
}

// Textbook batch normalization over all rows, written out directly.
Matrix reference_bn(const Matrix& x, const std::vector<double>& gamma, const std::vector<double>& beta, double eps) {
  Matrix y(x.rows, x.cols);
  for (std::size_t c = 0; c < x.cols; ++c) {
    double mean = 0.0;
    for (std::size_t n = 0; n < x.rows; ++n) mean += x(n, c);
    mean /= double(x.rows);
    double var = 0.0;
    for (std::size_t n = 0; n < x.rows; ++n) var += (x(n, c) - mean) * (x(n, c) - mean);
    var /= double(x.rows);
    for (std::size_t n = 0; n < x.rows; ++n) y(n, c) = gamma[c] * (x(n, c) - mean) / std::sqrt(var + eps) + beta[c];
  }
  return y;
}

TEST(InitMlp, GroupLayoutForSingleBnLayer) {
  MlpConfig c;
  const auto store = init_mlp(c, 1);
  std::vector<std::string> names;
  for (const auto& g : store.groups()) names.push_back(g.name);
  EXPECT_EQ(names, (std::vector<std::string>{"w1", "b1", "bn1_scale", "bn1_shift", "w2", "b2"}));
  EXPECT_EQ(store.group("w1").shape, (std::vector<std::size_t>{16, 2}));
  EXPECT_EQ(store.group("bn1_scale").tag, Tag::bn_scale);
}

TEST(InitMlp, SameSeedSameStore) {
  MlpConfig c;
  c.layer_widths = {2, 16, 16, 2};
  c.use_bn = {true, true};
  c.bn_gamma_init = {1.0, 0.4138};
  EXPECT_EQ(init_mlp(c, 9), init_mlp(c, 9));
  EXPECT_NE(init_mlp(c, 9), init_mlp(c, 10));
  const auto store = init_mlp(c, 9);
  for (double g : store.group("bn2_scale").values) EXPECT_EQ(g, 0.4138);
  for (double g : store.group("bn1_scale").values) EXPECT_EQ(g, 1.0);
}

TEST(InitMlp, ConfigValidation) {
  MlpConfig c;
  c.use_bn = {true, false};
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::InvalidConfig);
  c = MlpConfig{};
  c.bn_gamma_init = {};
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::InvalidConfig);
  c = MlpConfig{};
  c.label_smoothing = 1.5;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::InvalidConfig);
}

TEST(BatchNorm, TwoValueColumnWithZeroEpsilon) {
  Matrix x(2, 1);
  x.data = {1.0, 3.0};
  const std::vector<double> gamma = {1.0};
  const std::vector<double> beta = {0.0};
  const auto out = bn_forward(x, gamma, beta, 0.0, 2, Mode::train, unit_stats(1), 0.9);
  EXPECT_EQ(out.y.data, (std::vector<double>{-1.0, 1.0}));
}

TEST(BatchNorm, ConstantColumnGivesBeta) {
  Matrix x(4, 1, 2.5);
  const std::vector<double> gamma = {3.0};
  const std::vector<double> beta = {0.7};
  const auto out = bn_forward(x, gamma, beta, 1e-5, 4, Mode::train, unit_stats(1), 0.9);
  for (double v : out.y.data) EXPECT_EQ(v, 0.7);
}

TEST(BatchNorm, FullVirtualBatchIsStandardBn) {
  std::mt19937_64 rng(4);
  const auto x = random_matrix(rng, 64, 5, 3.0);
  const auto gamma = testing::random_vector(rng, 5);
  const auto beta = testing::random_vector(rng, 5);
  const auto out = bn_forward(x, gamma, beta, 1e-5, 64, Mode::train, unit_stats(5), 0.9);
  const auto ref = reference_bn(x, gamma, beta, 1e-5);
  for (std::size_t i = 0; i < ref.data.size(); ++i) EXPECT_NEAR(out.y.data[i], ref.data[i], 1e-12);
}

TEST(BatchNorm, EachSubBatchIsNormalized) {
  std::mt19937_64 rng(5);
  auto x = random_matrix(rng, 96, 4, 5.0);
  for (std::size_t n = 0; n < 96; ++n) x(n, 0) += double(n / 32) * 10.0;  // sub-batches with different means
  const std::vector<double> gamma(4, 1.0);
  const std::vector<double> beta(4, 0.0);
  const auto out = bn_forward(x, gamma, beta, 1e-13, 32, Mode::train, unit_stats(4), 0.9);
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t c = 0; c < 4; ++c) {
      double mean = 0.0;
      for (std::size_t n = k * 32; n < (k + 1) * 32; ++n) mean += out.y(n, c);
      mean /= 32.0;
      double var = 0.0;
      for (std::size_t n = k * 32; n < (k + 1) * 32; ++n) var += (out.y(n, c) - mean) * (out.y(n, c) - mean);
      var /= 32.0;
      EXPECT_LE(std::abs(mean), 1e-10);
      EXPECT_NEAR(var, 1.0, 1e-8);
    }
  }
}

TEST(BatchNorm, RunningStatsAverageSubBatches) {
  Matrix x(4, 1);
  x.data = {0.0, 2.0, 10.0, 14.0};  // sub-batch means 1 and 12, variances 1 and 4
  const std::vector<double> gamma = {1.0};
  const std::vector<double> beta = {0.0};
  const BnLayerStats stats{{5.0}, {2.0}};
  const auto out = bn_forward(x, gamma, beta, 1e-5, 2, Mode::train, stats, 0.9);
  EXPECT_NEAR(out.stats.running_mean[0], 0.9 * 5.0 + 0.1 * 6.5, 1e-15);
  EXPECT_NEAR(out.stats.running_var[0], 0.9 * 2.0 + 0.1 * 2.5, 1e-15);
}

TEST(BatchNorm, EvalModeUsesRunningStats) {
  Matrix x(3, 1);
  x.data = {1.0, 2.0, 3.0};
  const std::vector<double> gamma = {2.0};
  const std::vector<double> beta = {1.0};
  const BnLayerStats stats{{2.0}, {4.0}};
  const auto out = bn_forward(x, gamma, beta, 0.0, 64, Mode::eval, stats, 0.9);
  EXPECT_EQ(out.y.data, (std::vector<double>{0.0, 1.0, 2.0}));
  EXPECT_EQ(out.stats, stats);
}

TEST(BatchNorm, IndivisibleBatchRejected) {
  Matrix x(10, 2);
  const std::vector<double> ones(2, 1.0);
  EXPECT_EQ(code_of([&] { bn_forward(x, ones, ones, 1e-5, 4, Mode::train, unit_stats(2), 0.9); }),
            ErrorCode::IndivisibleBatch);
}

TEST(BatchNorm, NonFiniteInputRejected) {
  Matrix x(2, 1);
  x.data = {1.0, std::nan("")};
  const std::vector<double> ones(1, 1.0);
  EXPECT_EQ(code_of([&] { bn_forward(x, ones, ones, 1e-5, 2, Mode::train, unit_stats(1), 0.9); }),
            ErrorCode::NonFiniteInput);
}

TEST(Loss, ZeroLogitsGiveLogK) {
  for (std::size_t k : {2u, 3u, 10u}) {
    for (double tau : {0.0, 0.15, 1.0}) {
      Matrix z(4, k, 0.0);
      const std::vector<int> labels = {0, 1, 0, 1};
      EXPECT_NEAR(smoothed_cross_entropy(z, labels, tau), std::log(double(k)), 1e-15);
    }
  }
}

TEST(Loss, DecomposesIntoOneHotAndUniformParts) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto z = random_matrix(rng, 8, 4, 3.0);
    std::vector<int> labels(8);
    for (std::size_t n = 0; n < 8; ++n) labels[n] = int(n % 4);
    const double tau = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double ce_hot = 0.0;
    double ce_uni = 0.0;
    for (std::size_t n = 0; n < 8; ++n) {
      double sum = 0.0;
      for (std::size_t k = 0; k < 4; ++k) sum += std::exp(z(n, k));
      for (std::size_t k = 0; k < 4; ++k) {
        const double logp = z(n, k) - std::log(sum);
        if (int(k) == labels[n]) ce_hot -= logp;
        ce_uni -= logp / 4.0;
      }
    }
    ce_hot /= 8.0;
    ce_uni /= 8.0;
    EXPECT_NEAR(smoothed_cross_entropy(z, labels, tau), (1.0 - tau) * ce_hot + tau * ce_uni, 1e-12);
  }
}

struct Instance {
  MlpConfig config;
  ParamStore params;
  BnRunningStats stats;
  Batch batch;
};

Instance make_instance(std::uint64_t seed, bool bn, std::size_t rows, std::size_t vbs, double tau) {
  std::mt19937_64 rng(seed);
  Instance inst;
  inst.config.layer_widths = {3, 6, 5, 3};
  inst.config.use_bn = {bn, bn};
  inst.config.bn_gamma_init = bn ? std::vector<double>{1.0, 0.5} : std::vector<double>{};
  inst.config.virtual_batch_size = vbs;
  inst.config.label_smoothing = tau;
  inst.params = init_mlp(inst.config, seed);
  // Perturb every group so BN scale/shift and biases are not at their initial constants.
  ParamStore perturbed = inst.params;
  for (std::size_t g = 0; g < perturbed.size(); ++g) {
    for (auto& v : perturbed.values(g)) v += 0.3 * std::normal_distribution<double>(0.0, 1.0)(rng);
  }
  inst.params = perturbed;
  inst.stats = BnRunningStats::initial(inst.config);
  inst.batch = random_batch(rng, rows, 3, 3);
  return inst;
}

TEST(Backward, OutputBiasGradientSumsToZero) {
  auto inst = make_instance(1, true, 16, 16, 0.1);
  const auto fwd = forward(inst.params, inst.stats, inst.batch, inst.config, Mode::train);
  const auto grads = backward(fwd.cache, inst.params, inst.config);
  const auto& db = grads[*inst.params.index_of("b3")];
  EXPECT_NEAR(db[0] + db[1] + db[2], 0.0, 1e-15);
}

TEST(Backward, FullSmoothingGivesSoftmaxMinusUniform) {
  auto inst = make_instance(2, false, 12, 12, 1.0);
  const auto fwd = forward(inst.params, inst.stats, inst.batch, inst.config, Mode::train);
  const auto grads = backward(fwd.cache, inst.params, inst.config);
  const auto p = softmax(fwd.logits);
  const auto& db = grads[*inst.params.index_of("b3")];
  for (std::size_t k = 0; k < 3; ++k) {
    double expected = 0.0;
    for (std::size_t n = 0; n < 12; ++n) expected += p(n, k) - 1.0 / 3.0;
    EXPECT_NEAR(db[k], expected / 12.0, 1e-15);
  }
}

TEST(Backward, PreBnBiasHasZeroGradient) {
  auto inst = make_instance(3, true, 16, 8, 0.0);
  const auto fwd = forward(inst.params, inst.stats, inst.batch, inst.config, Mode::train);
  const auto grads = backward(fwd.cache, inst.params, inst.config);
  for (double g : grads[*inst.params.index_of("b1")]) EXPECT_EQ(g, 0.0);
}

TEST(Backward, StaleCacheDetected) {
  auto inst = make_instance(4, true, 16, 16, 0.0);
  const auto fwd = forward(inst.params, inst.stats, inst.batch, inst.config, Mode::train);
  auto changed = inst.params;
  changed.values(0)[0] += 1e-3;
  EXPECT_EQ(code_of([&] { backward(fwd.cache, changed, inst.config); }), ErrorCode::StaleCache);
  const auto eval = forward(inst.params, inst.stats, inst.batch, inst.config, Mode::eval);
  EXPECT_EQ(code_of([&] { backward(eval.cache, inst.params, inst.config); }), ErrorCode::StaleCache);
}

TEST(Backward, DeterministicBitwise) {
  auto inst = make_instance(5, true, 32, 16, 0.1);
  const auto a = forward(inst.params, inst.stats, inst.batch, inst.config, Mode::train);
  const auto b = forward(inst.params, inst.stats, inst.batch, inst.config, Mode::train);
  EXPECT_EQ(a.logits, b.logits);
  EXPECT_EQ(a.loss, b.loss);
  EXPECT_EQ(a.stats, b.stats);
  EXPECT_EQ(backward(a.cache, inst.params, inst.config), backward(b.cache, inst.params, inst.config));
}

TEST(Forward, ShapeErrors) {
  auto inst = make_instance(6, true, 16, 16, 0.0);
  Batch wrong = inst.batch;
  wrong.inputs = Matrix(16, 2);
  EXPECT_EQ(code_of([&] { forward(inst.params, inst.stats, wrong, inst.config, Mode::train); }),
            ErrorCode::ShapeMismatch);
  Batch bad_label = inst.batch;
  bad_label.labels[0] = 7;
  EXPECT_EQ(code_of([&] { forward(inst.params, inst.stats, bad_label, inst.config, Mode::train); }),
            ErrorCode::ShapeMismatch);
}

TEST(Forward, ReferenceConfigSmoothingAccepted) {
  auto inst = make_instance(7, true, 16, 16, 0.15);
  EXPECT_TRUE(std::isfinite(forward(inst.params, inst.stats, inst.batch, inst.config, Mode::train).loss));
}

TEST(Forward, TrainModeUpdatesStatsEvalDoesNot) {
  auto inst = make_instance(8, true, 16, 8, 0.0);
  const auto train = forward(inst.params, inst.stats, inst.batch, inst.config, Mode::train);
  EXPECT_NE(train.stats, inst.stats);
  const auto eval = forward(inst.params, inst.stats, inst.batch, inst.config, Mode::eval);
  EXPECT_EQ(eval.stats, inst.stats);
}

class GradientCheck : public ::testing::TestWithParam<std::tuple<bool, bool, double>> {};

TEST_P(GradientCheck, AgreesWithCentralDifferences) {
  const auto [bn, half, tau] = GetParam();
  for (std::uint64_t seed : {11u, 12u}) {
    auto inst = make_instance(seed, bn, 16, half ? 8 : 16, tau);
    const auto report = finite_difference_check(inst.params, inst.stats, inst.batch, inst.config, 1e-5, 256, seed);
    EXPECT_GE(report.coordinates_checked, std::min<std::size_t>(200, inst.params.total_count()));
    EXPECT_LE(report.max_relative_error, 1e-5) << report.worst_group << "[" << report.worst_index << "]";
  }
}

INSTANTIATE_TEST_SUITE_P(Instances, GradientCheck,
                         ::testing::Combine(::testing::Bool(), ::testing::Bool(), ::testing::Values(0.0, 0.1, 1.0)));

TEST(GradientCheck, CoversAllGroupsOnLargeModels) {
  std::mt19937_64 rng(34);
  MlpConfig c;
  c.layer_widths = {4, 32, 32, 3};
  c.use_bn = {true, true};
  c.bn_gamma_init = {1.0, 0.4138};
  c.virtual_batch_size = 8;
  const auto params = init_mlp(c, 34);
  const auto batch = random_batch(rng, 16, 4, 3);
  // Central differences are only meaningful away from ReLU kinks.
  const auto fwd = forward(params, BnRunningStats::initial(c), batch, c, Mode::train);
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& layer : fwd.cache.hidden) {
    for (double v : layer.bn.xhat.data) margin = std::min(margin, std::abs(v));
  }
  ASSERT_GT(margin, 1e-3);
  const auto report = finite_difference_check(params, BnRunningStats::initial(c), batch, c, 1e-5, 256, 3);
  EXPECT_EQ(report.coordinates_checked, 256u);
  EXPECT_LE(report.max_relative_error, 1e-5) << report.worst_group << "[" << report.worst_index << "]";
}

TEST(GradientCheck, ZeroStepRejected) {
  auto inst = make_instance(9, true, 16, 16, 0.0);
  EXPECT_EQ(code_of([&] { finite_difference_check(inst.params, inst.stats, inst.batch, inst.config, 0.0); }),
            ErrorCode::InvalidConfig);
}

TEST(Dataset, SplitSizes) {
  const auto ds = gen_synthetic_dataset(2, 2, 256, 0.3, 1);
  EXPECT_EQ(ds.train.size(), 410u);
  EXPECT_EQ(ds.eval.size(), 102u);
}

TEST(Dataset, SameSeedSameData) {
  const auto a = gen_synthetic_dataset(3, 4, 50, 0.5, 42);
  const auto b = gen_synthetic_dataset(3, 4, 50, 0.5, 42);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.eval, b.eval);
  EXPECT_NE(gen_synthetic_dataset(3, 4, 50, 0.5, 43).train, a.train);
}

TEST(Dataset, TinySpreadIsLinearlySeparable) {
  const auto ds = gen_synthetic_dataset(2, 2, 128, 1e-6, 5);
  // Nearest class mean is a linear rule for two classes.
  double mean[2][2] = {{0, 0}, {0, 0}};
  double count[2] = {0, 0};
  for (std::size_t n = 0; n < ds.train.size(); ++n) {
    const int y = ds.train.labels[n];
    mean[y][0] += ds.train.inputs(n, 0);
    mean[y][1] += ds.train.inputs(n, 1);
    count[y] += 1;
  }
  for (int y = 0; y < 2; ++y) {
    mean[y][0] /= count[y];
    mean[y][1] /= count[y];
  }
  std::size_t correct = 0;
  for (std::size_t n = 0; n < ds.train.size(); ++n) {
    double d[2];
    for (int y = 0; y < 2; ++y) {
      d[y] = std::hypot(ds.train.inputs(n, 0) - mean[y][0], ds.train.inputs(n, 1) - mean[y][1]);
    }
    if ((d[1] < d[0] ? 1 : 0) == ds.train.labels[n]) ++correct;
  }
  EXPECT_EQ(correct, ds.train.size());
}

TEST(Dataset, InvalidArguments) {
  EXPECT_EQ(code_of([] { gen_synthetic_dataset(1, 2, 10, 0.1, 0); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { gen_synthetic_dataset(2, 2, 10, 0.0, 0); }), ErrorCode::InvalidConfig);
}

TEST(Dataset, CsvHeaderAndRows) {
  const auto ds = gen_synthetic_dataset(2, 3, 5, 0.1, 0);
  std::ostringstream out;
  write_dataset_csv(ds.eval, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "feature_0,feature_1,feature_2,label");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, ds.eval.size());
}

}  // namespace
}  // namespace optbench
