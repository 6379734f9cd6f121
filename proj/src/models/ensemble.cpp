/*
 * Copyright (c) 2026, The soilml Authors.
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
 */

#include "soilml/models/ensemble.hpp"

#include <algorithm>

#include "soilml/error.hpp"
#include "soilml/parallel.hpp"
#include "soilml/rng.hpp"

namespace soilml {

double ForestModel::predict_one(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& t : trees) s += t.predict_one(x);
  return s / static_cast<double>(trees.size());
}

ForestModel forest_fit(const Matrix& x, std::span<const double> y, const ForestConfig& cfg,
                       std::uint64_t seed) {
  if (x.rows() == 0) fail(ErrorCode::TooFewRows, "forest needs at least one row");
  if (cfg.n_estimators < 1) fail(ErrorCode::BadConfig, "forest needs n_estimators >= 1");
  const TreeConfig tcfg{cfg.max_depth, cfg.max_leaf_nodes, cfg.min_samples_leaf};
  const Rng root(seed);
  ForestModel m;
  m.trees.resize(cfg.n_estimators);
  parallel_for(cfg.n_estimators, [&](std::size_t t) {
    if (!cfg.bootstrap) {
      m.trees[t] = tree_fit(x, y, tcfg);
      return;
    }
    Rng rng = root.split(t);
    std::vector<std::size_t> sample(x.rows());
    for (auto& s : sample) s = rng.below(x.rows());
    std::sort(sample.begin(), sample.end());
    m.trees[t] = tree_fit(x, y, tcfg, sample);
  });
  return m;
}

std::vector<double> forest_predict(const ForestModel& m, const Matrix& x) {
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = m.predict_one(x.row(r));
  return out;
}

double GbrModel::predict_one(std::span<const double> x) const {
  double f = base;
  for (const auto& t : trees) f += learning_rate * t.predict_one(x);
  return f;
}

GbrFit gbr_fit(const Matrix& x, std::span<const double> y, const GbrConfig& cfg) {
  if (x.rows() == 0) fail(ErrorCode::TooFewRows, "boosting needs at least one row");
  if (x.rows() != y.size()) fail(ErrorCode::LengthMismatch, "feature rows and targets differ");
  if (!(cfg.learning_rate > 0.0 && cfg.learning_rate <= 1.0)) {
    fail(ErrorCode::BadConfig, "learning_rate must lie in (0, 1]");
  }
  const TreeConfig tcfg{cfg.max_depth, cfg.max_leaf_nodes, cfg.min_samples_leaf};
  const std::size_t n = x.rows();

  GbrFit fit;
  // Mean with one correction pass, so a constant target reproduces itself.
  double sum = 0.0;
  for (double v : y) sum += v;
  double base = sum / static_cast<double>(n);
  double correction = 0.0;
  for (double v : y) correction += v - base;
  fit.model.base = base + correction / static_cast<double>(n);
  fit.model.learning_rate = cfg.learning_rate;

  std::vector<double> current(n, fit.model.base);
  std::vector<double> residual(n);
  auto mse = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = y[i] - current[i];
      s += d * d;
    }
    return s / static_cast<double>(n);
  };
  fit.train_mse.push_back(mse());

  for (std::size_t stage = 0; stage < cfg.n_estimators; ++stage) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - current[i];
    RegressionTree tree = tree_fit(x, residual, tcfg);
    for (std::size_t i = 0; i < n; ++i) {
      current[i] += cfg.learning_rate * tree.predict_one(x.row(i));
    }
    fit.model.trees.push_back(std::move(tree));
    fit.train_mse.push_back(mse());
  }
  return fit;
}

std::vector<double> gbr_predict(const GbrModel& m, const Matrix& x) {
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = m.predict_one(x.row(r));
  return out;
}

}  // namespace soilml
