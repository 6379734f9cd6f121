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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "soilml/matrix.hpp"
#include "soilml/models/tree.hpp"

namespace soilml {

struct ForestConfig {
  std::size_t n_estimators = 24;
  std::size_t max_leaf_nodes = 30;
  std::size_t max_depth = 7;
  bool bootstrap = true;
  std::size_t min_samples_leaf = 1;

  bool operator==(const ForestConfig&) const = default;
};

struct ForestModel {
  std::vector<RegressionTree> trees;

  double predict_one(std::span<const double> x) const;
  bool operator==(const ForestModel&) const = default;
};

/// Bagged regression trees. Tree t draws its bootstrap sample from the RNG
/// stream split(t) of `seed`; trees may be grown concurrently.
ForestModel forest_fit(const Matrix& x, std::span<const double> y, const ForestConfig& cfg,
                       std::uint64_t seed);
/// Unweighted mean of tree outputs, summed in tree order.
std::vector<double> forest_predict(const ForestModel& m, const Matrix& x);

struct GbrConfig {
  std::size_t n_estimators = 100;
  std::size_t max_leaf_nodes = 25;
  std::size_t max_depth = 3;
  std::uint64_t random_state = 0;
  double learning_rate = 0.1;
  std::size_t min_samples_leaf = 1;

  bool operator==(const GbrConfig&) const = default;
};

struct GbrModel {
  double base = 0.0;
  double learning_rate = 0.1;
  std::vector<RegressionTree> trees;

  double predict_one(std::span<const double> x) const;
  bool operator==(const GbrModel&) const = default;
};

struct GbrFit {
  GbrModel model;
  std::vector<double> train_mse;  // entry s is the MSE after s stages (entry 0: mean only)
};

/// Least-squares gradient boosting: stage 0 predicts mean(y), each further
/// stage fits a tree to the current residuals and adds learning_rate times
/// its output. Splits are deterministic, so random_state only labels the run.
GbrFit gbr_fit(const Matrix& x, std::span<const double> y, const GbrConfig& cfg);
std::vector<double> gbr_predict(const GbrModel& m, const Matrix& x);

}  // namespace soilml
