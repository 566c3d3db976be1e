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

#include "mapf/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "mapf/errors.hpp"
#include "mapf/rng.hpp"

namespace mapf {

namespace {

constexpr std::uint64_t kWeightStream = 0x6d6c7077;
constexpr std::uint64_t kOrderStream = 0x7368666c;
constexpr std::uint64_t kFoldStream = 0x63766664;
constexpr std::uint64_t kPermStream = 0x7065726d;

// Below this the column is effectively constant across the interquartile
// range; dividing by the raw IQR would blow such columns up to 1e9-scale
// inputs whenever a tail value appears, so they fall back to unit scale.
constexpr double kDegenerateIqr = 1e-9;

double quantile(const std::vector<double>& sorted, double q)
{
  const std::size_t n = sorted.size();
  const double h = static_cast<double>(n - 1) * q;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n)
    return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double mean_abs_error(const std::vector<double>& pred, const std::vector<double>& truth)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    sum += std::fabs(pred[i] - truth[i]);
  return sum / static_cast<double>(pred.size());
}

}  // namespace

ScalerParams fit_scaler(const std::vector<std::vector<double>>& columns)
{
  if (columns.empty())
    throw InvalidInput("no columns to scale");
  ScalerParams params;
  for (const std::vector<double>& column : columns) {
    if (column.size() < 2)
      throw InvalidInput("scaler needs at least two rows");
    std::vector<double> sorted = column;
    std::sort(sorted.begin(), sorted.end());
    params.center.push_back(quantile(sorted, 0.5));
    const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
    params.scale.push_back(iqr < kDegenerateIqr ? 1.0 : iqr);
  }
  return params;
}

double transform_value(const ScalerParams& s, int column, double v)
{
  return (v - s.center[static_cast<std::size_t>(column)]) /
    s.scale[static_cast<std::size_t>(column)];
}

double inverse_value(const ScalerParams& s, int column, double v)
{
  return v * s.scale[static_cast<std::size_t>(column)] +
    s.center[static_cast<std::size_t>(column)];
}

double learning_rate(const TrainConfig& cfg, std::int64_t step)
{
  return cfg.eta0 * std::pow(cfg.gamma, static_cast<double>(step / cfg.decay_steps));
}

MlpModel MlpModel::init(const std::vector<int>& layers, std::uint64_t seed)
{
  if (layers.size() < 2)
    throw ModelError("network needs input and output layers");
  for (int width : layers) {
    if (width < 1)
      throw ModelError("layer widths must be positive");
  }
  MlpModel model;
  model.layers = layers;
  Rng rng(mix_seed(kWeightStream, seed));
  for (std::size_t l = 1; l < layers.size(); ++l) {
    const int fan_in = layers[l - 1];
    const int fan_out = layers[l];
    const double limit = std::sqrt(6.0 / fan_in);
    Matrix w(fan_out, fan_in);
    for (double& v : w.a)
      v = (2.0 * rng.uniform() - 1.0) * limit;
    model.weights.push_back(std::move(w));
    model.biases.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
  }
  model.x_scaler.center.assign(static_cast<std::size_t>(layers.front()), 0.0);
  model.x_scaler.scale.assign(static_cast<std::size_t>(layers.front()), 1.0);
  return model;
}

std::vector<double> MlpModel::forward_scaled(const Matrix& x, int jobs) const
{
  Matrix a = x;
  Matrix z;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    matmul_nt(a, weights[l], z, jobs);
    const std::vector<double>& bias = biases[l];
    const bool hidden = l + 1 < weights.size();
    for (int r = 0; r < z.rows; ++r) {
      for (int c = 0; c < z.cols; ++c) {
        double v = z.at(r, c) + bias[static_cast<std::size_t>(c)];
        if (hidden && v < 0.0)
          v = 0.0;
        z.at(r, c) = v;
      }
    }
    a = std::move(z);
  }
  std::vector<double> out(static_cast<std::size_t>(a.rows));
  for (int r = 0; r < a.rows; ++r)
    out[static_cast<std::size_t>(r)] = a.at(r, 0);
  return out;
}

double MlpModel::predict(const FeatureVector& x, int jobs) const
{
  return predict(std::vector<FeatureVector>{x}, jobs).front();
}

std::vector<double> MlpModel::predict(const std::vector<FeatureVector>& xs, int jobs) const
{
  if (input_dim() != kFeatureCount)
    throw ModelError("model input width does not match the feature count");
  Matrix m(static_cast<int>(xs.size()), kFeatureCount);
  for (std::size_t r = 0; r < xs.size(); ++r) {
    for (int c = 0; c < kFeatureCount; ++c)
      m.at(static_cast<int>(r), c) =
        transform_value(x_scaler, c, xs[r][static_cast<std::size_t>(c)]);
  }
  std::vector<double> out = forward_scaled(m, jobs);
  for (double& v : out)
    v = v * y_scale + y_center;
  return out;
}

void MlpModel::save(const std::string& path) const
{
  std::ostringstream out;
  out << std::setprecision(17);
  out << "mlp-regressor v1\n";
  out << "layers " << layers.size();
  for (int w : layers)
    out << ' ' << w;
  out << '\n';
  auto write_row = [&out](const std::vector<double>& row) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? " " : "") << row[i];
    out << '\n';
  };
  out << "x_center " << x_scaler.center.size() << '\n';
  write_row(x_scaler.center);
  out << "x_scale " << x_scaler.scale.size() << '\n';
  write_row(x_scaler.scale);
  out << "y_center " << y_center << '\n';
  out << "y_scale " << y_scale << '\n';
  for (std::size_t l = 0; l < weights.size(); ++l) {
    out << "weights " << l + 1 << ' ' << weights[l].rows << ' ' << weights[l].cols
        << '\n';
    for (int r = 0; r < weights[l].rows; ++r) {
      for (int c = 0; c < weights[l].cols; ++c)
        out << (c ? " " : "") << weights[l].at(r, c);
      out << '\n';
    }
    out << "biases " << l + 1 << ' ' << biases[l].size() << '\n';
    write_row(biases[l]);
  }
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw ModelError("cannot write model file " + path);
  file << out.str();
  if (!file.flush())
    throw ModelError("failed writing model file " + path);
}

MlpModel MlpModel::load(const std::string& path)
{
  std::ifstream file(path, std::ios::binary);
  if (!file)
    throw ModelError("cannot read model file " + path);
  std::string magic, version;
  file >> magic >> version;
  if (magic != "mlp-regressor" || version != "v1")
    throw ParseError("not a v1 model file: " + path);

  auto expect = [&file, &path](const std::string& token) {
    std::string word;
    file >> word;
    if (word != token)
      throw ParseError("model file " + path + ": expected '" + token + "', got '" +
                       word + "'");
  };
  auto read_count = [&file, &path](const char* what) {
    std::size_t n = 0;
    if (!(file >> n))
      throw ParseError(std::string("model file ") + path + ": bad " + what + " count");
    return n;
  };
  auto read_values = [&file, &path](std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) {
      if (!(file >> x))
        throw ParseError("model file " + path + ": truncated values");
    }
    return v;
  };

  MlpModel model;
  expect("layers");
  const std::size_t n_layers = read_count("layer");
  if (n_layers < 2)
    throw ParseError("model file " + path + ": too few layers");
  model.layers.resize(n_layers);
  for (int& w : model.layers) {
    if (!(file >> w) || w < 1)
      throw ParseError("model file " + path + ": bad layer width");
  }
  expect("x_center");
  model.x_scaler.center = read_values(read_count("x_center"));
  expect("x_scale");
  model.x_scaler.scale = read_values(read_count("x_scale"));
  if (model.x_scaler.center.size() != static_cast<std::size_t>(model.layers.front()) ||
      model.x_scaler.scale.size() != static_cast<std::size_t>(model.layers.front()))
    throw ParseError("model file " + path + ": scaler width mismatch");
  expect("y_center");
  model.y_center = read_values(1).front();
  expect("y_scale");
  model.y_scale = read_values(1).front();

  for (std::size_t l = 1; l < n_layers; ++l) {
    expect("weights");
    read_count("layer index");
    const int rows = static_cast<int>(read_count("row"));
    const int cols = static_cast<int>(read_count("column"));
    if (rows != model.layers[l] || cols != model.layers[l - 1])
      throw ParseError("model file " + path + ": weight shape mismatch");
    Matrix w(rows, cols);
    w.a = read_values(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    model.weights.push_back(std::move(w));
    expect("biases");
    read_count("layer index");
    const std::size_t bn = read_count("bias");
    if (bn != static_cast<std::size_t>(rows))
      throw ParseError("model file " + path + ": bias width mismatch");
    model.biases.push_back(read_values(bn));
  }
  return model;
}

namespace {

struct AdamState
{
  std::vector<Matrix> mw, vw;
  std::vector<std::vector<double>> mb, vb;

  explicit AdamState(const MlpModel& model)
  {
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
      mw.emplace_back(model.weights[l].rows, model.weights[l].cols);
      vw.emplace_back(model.weights[l].rows, model.weights[l].cols);
      mb.emplace_back(model.biases[l].size(), 0.0);
      vb.emplace_back(model.biases[l].size(), 0.0);
    }
  }
};

void adam_update(
  double& param, double grad, double& m, double& v, double lr, const TrainConfig& cfg,
  double bias1, double bias2)
{
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad * grad;
  const double mhat = m / bias1;
  const double vhat = v / bias2;
  param -= lr * mhat / (std::sqrt(vhat) + cfg.eps);
}

/// One gradient evaluation and one Adam step. Returns the batch loss sum.
double train_batch(
  MlpModel& model, AdamState& adam, const Matrix& xb, const std::vector<double>& yb,
  const TrainConfig& cfg, std::int64_t step)
{
  const MaeGradients g = mae_gradients(model, xb, yb, cfg.jobs);

  const double lr = learning_rate(cfg, step);
  const double bias1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step + 1));
  const double bias2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step + 1));

  for (std::size_t l = model.weights.size(); l-- > 0;) {
    for (std::size_t i = 0; i < g.dw[l].a.size(); ++i)
      adam_update(model.weights[l].a[i], g.dw[l].a[i], adam.mw[l].a[i],
                  adam.vw[l].a[i], lr, cfg, bias1, bias2);
    for (std::size_t i = 0; i < g.db[l].size(); ++i)
      adam_update(model.biases[l][i], g.db[l][i], adam.mb[l][i], adam.vb[l][i], lr,
                  cfg, bias1, bias2);
  }
  return g.loss_sum;
}

}  // namespace

MaeGradients mae_gradients(
  const MlpModel& model, const Matrix& x_scaled, const std::vector<double>& y_scaled,
  int jobs)
{
  const std::size_t n_layers = model.weights.size();
  std::vector<Matrix> acts(n_layers + 1);  // post-activation, acts[0] = input
  std::vector<Matrix> pre(n_layers);       // pre-activation
  acts[0] = x_scaled;
  for (std::size_t l = 0; l < n_layers; ++l) {
    matmul_nt(acts[l], model.weights[l], pre[l], jobs);
    const std::vector<double>& bias = model.biases[l];
    for (int r = 0; r < pre[l].rows; ++r) {
      for (int c = 0; c < pre[l].cols; ++c)
        pre[l].at(r, c) += bias[static_cast<std::size_t>(c)];
    }
    acts[l + 1] = pre[l];
    if (l + 1 < n_layers) {
      for (double& v : acts[l + 1].a)
        v = std::max(v, 0.0);
    }
  }

  MaeGradients g;
  g.dw.resize(n_layers);
  g.db.resize(n_layers);

  const int bs = x_scaled.rows;
  Matrix dz(bs, 1);
  for (int r = 0; r < bs; ++r) {
    const double diff = acts[n_layers].at(r, 0) - y_scaled[static_cast<std::size_t>(r)];
    g.loss_sum += std::fabs(diff);
    dz.at(r, 0) = (diff > 0.0 ? 1.0 : diff < 0.0 ? -1.0 : 0.0) / bs;
  }

  Matrix da;
  for (std::size_t l = n_layers; l-- > 0;) {
    matmul_tn(dz, acts[l], g.dw[l], jobs);
    g.db[l].assign(model.biases[l].size(), 0.0);
    for (int r = 0; r < dz.rows; ++r) {
      for (int c = 0; c < dz.cols; ++c)
        g.db[l][static_cast<std::size_t>(c)] += dz.at(r, c);
    }
    if (l > 0) {
      matmul_nn(dz, model.weights[l], da, jobs);
      dz = Matrix(da.rows, da.cols);
      for (int r = 0; r < da.rows; ++r) {
        for (int c = 0; c < da.cols; ++c)
          dz.at(r, c) = pre[l - 1].at(r, c) > 0.0 ? da.at(r, c) : 0.0;
      }
    }
  }
  return g;
}

TrainResult train(
  const std::vector<FeatureVector>& x, const std::vector<double>& y,
  const TrainConfig& cfg)
{
  if (x.size() != y.size())
    throw InvalidInput("feature and target counts differ");
  if (static_cast<int>(x.size()) < cfg.batch)
    throw InvalidInput("need at least one full batch of records");
  if (cfg.batch < 1 || cfg.max_epochs < 1 || cfg.patience < 1 ||
      cfg.patience >= cfg.max_epochs || cfg.val_split <= 0.0 || cfg.val_split >= 1.0)
    throw InvalidInput("invalid training configuration");

  const int n = static_cast<int>(x.size());

  std::vector<std::vector<double>> columns(
    kFeatureCount, std::vector<double>(static_cast<std::size_t>(n)));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < kFeatureCount; ++c)
      columns[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] =
        x[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  const ScalerParams x_scaler = fit_scaler(columns);
  const ScalerParams y_scaler = fit_scaler({y});

  Matrix xs(n, kFeatureCount);
  std::vector<double> ys(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < kFeatureCount; ++c)
      xs.at(r, c) = transform_value(
        x_scaler, c, x[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    ys[static_cast<std::size_t>(r)] = transform_value(
      y_scaler, 0, y[static_cast<std::size_t>(r)]);
  }

  Rng order_rng(mix_seed(kOrderStream, cfg.seed));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  order_rng.shuffle(order);
  const int val_n = std::clamp(
    static_cast<int>(static_cast<double>(n) * cfg.val_split), 1, n - 1);
  const std::vector<int> val_idx(order.begin(), order.begin() + val_n);
  std::vector<int> train_idx(order.begin() + val_n, order.end());

  Matrix val_x(val_n, kFeatureCount);
  std::vector<double> val_y(static_cast<std::size_t>(val_n));
  for (int r = 0; r < val_n; ++r) {
    const int src = val_idx[static_cast<std::size_t>(r)];
    for (int c = 0; c < kFeatureCount; ++c)
      val_x.at(r, c) = xs.at(src, c);
    val_y[static_cast<std::size_t>(r)] = ys[static_cast<std::size_t>(src)];
  }

  TrainResult result;
  result.model = MlpModel::init({kFeatureCount, 64, 32, 16, 1}, cfg.seed);
  result.model.x_scaler = x_scaler;
  result.model.y_center = y_scaler.center.front();
  result.model.y_scale = y_scaler.scale.front();

  AdamState adam(result.model);
  std::int64_t step = 0;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<Matrix> best_weights = result.model.weights;
  std::vector<std::vector<double>> best_biases = result.model.biases;
  int since_best = 0;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    order_rng.shuffle(train_idx);
    double loss_sum = 0.0;
    for (std::size_t pos = 0; pos < train_idx.size(); pos += cfg.batch) {
      const int bs = static_cast<int>(
        std::min<std::size_t>(cfg.batch, train_idx.size() - pos));
      Matrix xb(bs, kFeatureCount);
      std::vector<double> yb(static_cast<std::size_t>(bs));
      for (int r = 0; r < bs; ++r) {
        const int src = train_idx[pos + static_cast<std::size_t>(r)];
        for (int c = 0; c < kFeatureCount; ++c)
          xb.at(r, c) = xs.at(src, c);
        yb[static_cast<std::size_t>(r)] = ys[static_cast<std::size_t>(src)];
      }
      loss_sum += train_batch(result.model, adam, xb, yb, cfg, step);
      ++step;
    }
    const double train_loss = loss_sum / static_cast<double>(train_idx.size());
    const double val_loss =
      mean_abs_error(result.model.forward_scaled(val_x, cfg.jobs), val_y);
    if (!std::isfinite(train_loss) || !std::isfinite(val_loss))
      throw ModelError(
        "loss diverged at epoch " + std::to_string(epoch) + " (train " +
        std::to_string(train_loss) + ", val " + std::to_string(val_loss) + ")");
    result.history.train_loss.push_back(train_loss);
    result.history.val_loss.push_back(val_loss);

    if (val_loss < best_val) {
      best_val = val_loss;
      best_weights = result.model.weights;
      best_biases = result.model.biases;
      result.history.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  result.model.weights = std::move(best_weights);
  result.model.biases = std::move(best_biases);
  result.history.steps = step;
  return result;
}

CvResult kfold_cv(
  const std::vector<FeatureVector>& x, const std::vector<double>& y, int folds,
  const TrainConfig& cfg)
{
  if (folds < 2)
    throw InvalidInput("cross-validation needs at least two folds");
  if (static_cast<int>(x.size()) < folds)
    throw InvalidInput("fewer records than folds");

  const int n = static_cast<int>(x.size());
  Rng rng(mix_seed(kFoldStream, cfg.seed));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  CvResult result;
  std::size_t at = 0;
  for (int fold = 0; fold < folds; ++fold) {
    const int fold_n = n / folds + (fold < n % folds ? 1 : 0);
    std::vector<int> hold(order.begin() + static_cast<std::ptrdiff_t>(at),
                          order.begin() + static_cast<std::ptrdiff_t>(at) + fold_n);
    at += static_cast<std::size_t>(fold_n);

    std::vector<char> held(static_cast<std::size_t>(n), 0);
    for (int i : hold)
      held[static_cast<std::size_t>(i)] = 1;
    std::vector<FeatureVector> train_x;
    std::vector<double> train_y;
    for (int i = 0; i < n; ++i) {
      if (!held[static_cast<std::size_t>(i)]) {
        train_x.push_back(x[static_cast<std::size_t>(i)]);
        train_y.push_back(y[static_cast<std::size_t>(i)]);
      }
    }
    TrainConfig fold_cfg = cfg;
    fold_cfg.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(fold));
    const TrainResult trained = train(train_x, train_y, fold_cfg);

    std::vector<FeatureVector> hold_x;
    std::vector<double> hold_y;
    for (int i : hold) {
      hold_x.push_back(x[static_cast<std::size_t>(i)]);
      hold_y.push_back(y[static_cast<std::size_t>(i)]);
    }
    const double mae_seconds =
      mean_abs_error(trained.model.predict(hold_x, cfg.jobs), hold_y);
    result.fold_mae_seconds.push_back(mae_seconds);
    result.fold_mae_scaled.push_back(mae_seconds / trained.model.y_scale);
  }

  auto summarize = [folds](const std::vector<double>& v, double& mean, double& stddev) {
    mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(folds);
    double ss = 0.0;
    for (double s : v)
      ss += (s - mean) * (s - mean);
    stddev = folds > 1 ? std::sqrt(ss / static_cast<double>(folds - 1)) : 0.0;
  };
  summarize(result.fold_mae_scaled, result.mean_scaled, result.stddev_scaled);
  summarize(result.fold_mae_seconds, result.mean_seconds, result.stddev_seconds);
  return result;
}

std::vector<double> permutation_importance(
  const MlpModel& model, const std::vector<FeatureVector>& x,
  const std::vector<double>& y, int repeats, std::uint64_t seed, int jobs)
{
  if (x.empty() || x.size() != y.size())
    throw InvalidInput("importance needs a non-empty matched test set");
  if (repeats < 1)
    throw InvalidInput("importance needs at least one repeat");

  const double baseline = mean_abs_error(model.predict(x, jobs), y);
  std::vector<double> importance(kFeatureCount, 0.0);
  std::vector<int> perm(x.size());
  for (int f = 0; f < kFeatureCount; ++f) {
    double sum = 0.0;
    for (int r = 0; r < repeats; ++r) {
      Rng rng(mix_seed(kPermStream, seed, static_cast<std::uint64_t>(f),
                       static_cast<std::uint64_t>(r)));
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(perm);
      std::vector<FeatureVector> shuffled = x;
      for (std::size_t i = 0; i < shuffled.size(); ++i)
        shuffled[i][static_cast<std::size_t>(f)] =
          x[static_cast<std::size_t>(perm[i])][static_cast<std::size_t>(f)];
      sum += mean_abs_error(model.predict(shuffled, jobs), y);
    }
    importance[static_cast<std::size_t>(f)] =
      sum / static_cast<double>(repeats) - baseline;
  }
  return importance;
}

}  // namespace mapf
