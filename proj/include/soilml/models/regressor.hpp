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

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "soilml/dataset.hpp"
#include "soilml/matrix.hpp"
#include "soilml/metrics.hpp"
#include "soilml/models/ensemble.hpp"
#include "soilml/models/mlp.hpp"
#include "soilml/models/svr.hpp"

namespace soilml {

enum class Family : std::uint8_t { Svr, RandomForest, GradientBoosting, Mlp };

/// Short tag used on the command line and in files: svr, rf, gbr, mlp.
std::string_view family_name(Family f) noexcept;
/// Table label, e.g. "Random Forests Algorithm".
std::string_view family_label(Family f) noexcept;
std::optional<Family> family_from_name(std::string_view name) noexcept;

using FamilyConfig = std::variant<SvrConfig, ForestConfig, GbrConfig, MlpConfig>;
using KeyValues = std::vector<std::pair<std::string, std::string>>;

Family family_of(const FamilyConfig& cfg) noexcept;
FamilyConfig default_config(Family f);
/// Ordered key/value echo of a family config (keys without section prefix).
KeyValues config_to_kv(const FamilyConfig& cfg);
/// Sets one key; throws BadConfig for unknown keys or unparsable values.
void config_set(FamilyConfig& cfg, std::string_view key, std::string_view value);

struct RegressorSpec {
  FamilyConfig config = ForestConfig{};
  std::uint64_t seed = 0;
  bool allow_partial = false;  // accept a non-converged SVR solution

  Family family() const noexcept { return family_of(config); }
  bool operator==(const RegressorSpec&) const = default;
};

using ModelParams = std::variant<SvrModel, ForestModel, GbrModel, MlpModel>;

/// Affine map applied to the target before fitting (identity unless the
/// family trains on a standardised target).
struct TargetScale {
  double mean = 0.0;
  double std = 1.0;
  bool operator==(const TargetScale&) const = default;
};

struct FitDiagnostics {
  std::vector<double> loss_history;  // MLP, per epoch
  std::vector<double> stage_mse;     // GBR, per stage
  std::size_t svr_iterations = 0;
  double svr_violation = 0.0;
  bool converged = true;
};

class FittedModel {
 public:
  FittedModel(RegressorSpec spec, FeatureSet features, Standardizer standardizer,
              TargetScale target, ModelParams params);

  Family family() const noexcept { return spec_.family(); }
  const RegressorSpec& spec() const noexcept { return spec_; }
  const FeatureSet& features() const noexcept { return features_; }
  const Standardizer& standardizer() const noexcept { return standardizer_; }
  const TargetScale& target_scale() const noexcept { return target_; }
  const ModelParams& params() const noexcept { return params_; }

  /// Predicts from raw (unstandardised) feature columns in canonical order.
  std::vector<double> predict(const Matrix& raw) const;
  /// Selects the model's feature columns from `ds` and predicts.
  std::vector<double> predict(const Dataset& ds) const;

  bool operator==(const FittedModel&) const = default;

 private:
  RegressorSpec spec_;
  FeatureSet features_;
  Standardizer standardizer_;
  TargetScale target_;
  ModelParams params_;
};

/// Fits the standardizer on `raw_x`, then the family's model.
FittedModel fit_model(const RegressorSpec& spec, const FeatureSet& features, const Matrix& raw_x,
                      std::span<const double> y, FitDiagnostics* diag = nullptr);

/// Versioned text container; numeric payloads are hex floats so a save/load
/// round trip is bit-exact. Layout documented in docs/model_format.md.
void save_model(std::ostream& out, const FittedModel& m);
FittedModel load_model(std::istream& in);
void save_model_file(const std::string& path, const FittedModel& m);
FittedModel load_model_file(const std::string& path);

struct CvResult {
  FoldPlan plan;
  std::vector<EvaluationReport> folds;
  EvaluationReport pooled;
  std::vector<double> predictions;  // held-out prediction per record, record order
};

/// k-fold cross-validation. Each fold fits standardizer and model on the
/// complement of the fold and predicts the fold; folds run concurrently and
/// are reduced in fold order. The pooled report covers all held-out
/// predictions in record order.
CvResult cross_validate(const RegressorSpec& spec, const FeatureSet& features, const Matrix& raw_x,
                        std::span<const double> y, const FoldPlan& plan);

}  // namespace soilml
