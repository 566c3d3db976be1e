/*
 * Copyright (C) 2026 mapf-replan contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#ifndef MAPF__MODEL_HPP
#define MAPF__MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mapf/features.hpp"
#include "mapf/matrix.hpp"

namespace mapf {

/// Column-wise robust scaling: subtract the median, divide by the
/// interquartile range (floored so constant columns map to zero).
struct ScalerParams
{
  std::vector<double> center;
  std::vector<double> scale;
};

ScalerParams fit_scaler(const std::vector<std::vector<double>>& columns);
double transform_value(const ScalerParams& s, int column, double v);
double inverse_value(const ScalerParams& s, int column, double v);

struct TrainConfig
{
  int batch = 64;
  int max_epochs = 500;
  int patience = 100;
  double val_split = 0.2;
  double eta0 = 0.001;
  double gamma = 0.96;
  int decay_steps = 100;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Step-decay schedule: eta0 · gamma^floor(step / decay_steps), with `step`
/// counting mini-batch updates from zero.
double learning_rate(const TrainConfig& cfg, std::int64_t step);

/// Rectifier network with a linear scalar output. Weights are row-major
/// (outputs × inputs); inputs and the target are robust-scaled, and
/// predictions are returned in original target units.
class MlpModel
{
public:
  std::vector<int> layers;
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
  ScalerParams x_scaler;
  double y_center = 0.0;
  double y_scale = 1.0;

  static MlpModel init(const std::vector<int>& layers, std::uint64_t seed);

  int input_dim() const { return layers.empty() ? 0 : layers.front(); }

  /// Forward pass over already scaled inputs; returns the raw (scaled-space)
  /// outputs, one per row. Training and gradient checks use this.
  std::vector<double> forward_scaled(const Matrix& x, int jobs = 1) const;

  double predict(const FeatureVector& x, int jobs = 1) const;
  std::vector<double> predict(const std::vector<FeatureVector>& xs, int jobs = 1) const;

  void save(const std::string& path) const;
  static MlpModel load(const std::string& path);
};

/// Parameter gradients of the batch-mean absolute error at the model's
/// current weights, over already scaled inputs and targets. loss_sum is the
/// un-averaged sum of absolute residuals. Training consumes this; the
/// finite-difference checks in the tests compare against it.
struct MaeGradients
{
  double loss_sum = 0.0;
  std::vector<Matrix> dw;
  std::vector<std::vector<double>> db;
};

MaeGradients mae_gradients(
  const MlpModel& model, const Matrix& x_scaled, const std::vector<double>& y_scaled,
  int jobs = 1);

struct TrainHistory
{
  std::vector<double> train_loss;  // scaled units, per epoch
  std::vector<double> val_loss;    // scaled units, per epoch
  int best_epoch = -1;
  std::int64_t steps = 0;
};

struct TrainResult
{
  MlpModel model;
  TrainHistory history;
};

/// Fits the fixed-architecture regressor 42-64-32-16-1 on the records,
/// minimizing mean absolute error on robust-scaled targets with Adam under
/// the step-decay schedule. A held-out fraction of the input drives early
/// stopping and the best-validation weights are restored. Deterministic for
/// a given config, including across jobs values.
TrainResult train(
  const std::vector<FeatureVector>& x,
  const std::vector<double>& y,
  const TrainConfig& cfg);

struct CvResult
{
  std::vector<double> fold_mae_scaled;
  std::vector<double> fold_mae_seconds;
  double mean_scaled = 0.0;
  double stddev_scaled = 0.0;
  double mean_seconds = 0.0;
  double stddev_seconds = 0.0;
};

CvResult kfold_cv(
  const std::vector<FeatureVector>& x,
  const std::vector<double>& y,
  int folds,
  const TrainConfig& cfg);

/// Mean increase of the test MAE (in target units) when one feature column
/// is shuffled, averaged over `repeats` deterministic shuffles. Raw values;
/// individual features may come out slightly negative.
std::vector<double> permutation_importance(
  const MlpModel& model,
  const std::vector<FeatureVector>& x,
  const std::vector<double>& y,
  int repeats,
  std::uint64_t seed,
  int jobs = 1);

}  // namespace mapf

#endif  // MAPF__MODEL_HPP
