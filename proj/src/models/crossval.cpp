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

#include <optional>

#include "soilml/error.hpp"
#include "soilml/models/regressor.hpp"
#include "soilml/parallel.hpp"

namespace soilml {

CvResult cross_validate(const RegressorSpec& spec, const FeatureSet& features, const Matrix& raw_x,
                        std::span<const double> y, const FoldPlan& plan) {
  if (raw_x.rows() != y.size() || plan.n() != y.size()) {
    fail(ErrorCode::LengthMismatch, "fold plan, features and targets must have equal length");
  }
  std::vector<std::optional<std::vector<double>>> fold_pred(plan.k);
  parallel_for(plan.k, [&](std::size_t f) {
    const auto train = plan.train_indices(f);
    const auto test = plan.test_indices(f);
    const Matrix xtr = raw_x.select_rows(train);
    std::vector<double> ytr(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) ytr[i] = y[train[i]];
    const auto model = fit_model(spec, features, xtr, ytr);
    fold_pred[f] = model.predict(raw_x.select_rows(test));
  });

  CvResult res;
  res.plan = plan;
  res.predictions.assign(y.size(), 0.0);
  for (std::size_t f = 0; f < plan.k; ++f) {
    const auto test = plan.test_indices(f);
    const auto& pred = *fold_pred[f];
    std::vector<double> actual(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
      actual[i] = y[test[i]];
      res.predictions[test[i]] = pred[i];
    }
    res.folds.push_back(evaluate(actual, pred));
  }
  res.pooled = evaluate(y, res.predictions);
  return res;
}

}  // namespace soilml
