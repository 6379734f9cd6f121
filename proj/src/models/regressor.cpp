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

#include "soilml/models/regressor.hpp"

#include <cmath>

#include "soilml/error.hpp"
#include "soilml/text.hpp"

namespace soilml {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string u(std::size_t v) { return std::to_string(v); }
std::string d(double v) { return text::shortest(v); }
std::string b(bool v) { return v ? "true" : "false"; }

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  fail(ErrorCode::BadConfig,
       "invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

void set_size(std::size_t& out, std::string_view key, std::string_view value) {
  const auto v = text::to_u64(value);
  if (!v) bad_value(key, value);
  out = static_cast<std::size_t>(*v);
}

void set_u64(std::uint64_t& out, std::string_view key, std::string_view value) {
  const auto v = text::to_u64(value);
  if (!v) bad_value(key, value);
  out = *v;
}

void set_double(double& out, std::string_view key, std::string_view value) {
  const auto v = text::to_double(value);
  if (!v) bad_value(key, value);
  out = *v;
}

void set_bool(bool& out, std::string_view key, std::string_view value) {
  const auto v = text::to_bool(value);
  if (!v) bad_value(key, value);
  out = *v;
}

[[noreturn]] void unknown_key(std::string_view family, std::string_view key) {
  fail(ErrorCode::BadConfig, "unknown key '" + std::string(family) + "." + std::string(key) + "'");
}

}  // namespace

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::Svr: return "svr";
    case Family::RandomForest: return "rf";
    case Family::GradientBoosting: return "gbr";
    case Family::Mlp: return "mlp";
  }
  return "?";
}

std::string_view family_label(Family f) noexcept {
  switch (f) {
    case Family::Svr: return "Support Vector Regression (SVR)";
    case Family::RandomForest: return "Random Forests Algorithm";
    case Family::GradientBoosting: return "Gradient Boosting Regression";
    case Family::Mlp: return "Artificial Neural Network (ANN)";
  }
  return "?";
}

std::optional<Family> family_from_name(std::string_view name) noexcept {
  if (name == "svr") return Family::Svr;
  if (name == "rf" || name == "forest") return Family::RandomForest;
  if (name == "gbr" || name == "gb") return Family::GradientBoosting;
  if (name == "mlp" || name == "ann") return Family::Mlp;
  return std::nullopt;
}

Family family_of(const FamilyConfig& cfg) noexcept {
  return std::visit(Overloaded{[](const SvrConfig&) { return Family::Svr; },
                               [](const ForestConfig&) { return Family::RandomForest; },
                               [](const GbrConfig&) { return Family::GradientBoosting; },
                               [](const MlpConfig&) { return Family::Mlp; }},
                    cfg);
}

FamilyConfig default_config(Family f) {
  switch (f) {
    case Family::Svr: return SvrConfig{};
    case Family::RandomForest: return ForestConfig{};
    case Family::GradientBoosting: return GbrConfig{};
    case Family::Mlp: return MlpConfig{};
  }
  return ForestConfig{};
}

KeyValues config_to_kv(const FamilyConfig& cfg) {
  return std::visit(
      Overloaded{
          [](const SvrConfig& c) -> KeyValues {
            return {{"c", d(c.c_penalty)},        {"epsilon", d(c.epsilon_tube)},
                    {"gamma", d(c.gamma)},        {"max_passes", u(c.max_passes)},
                    {"kkt_tol", d(c.kkt_tol)},    {"cache_mb", u(c.cache_mb)}};
          },
          [](const ForestConfig& c) -> KeyValues {
            return {{"n_estimators", u(c.n_estimators)},
                    {"max_leaf_nodes", u(c.max_leaf_nodes)},
                    {"max_depth", u(c.max_depth)},
                    {"bootstrap", b(c.bootstrap)},
                    {"min_samples_leaf", u(c.min_samples_leaf)}};
          },
          [](const GbrConfig& c) -> KeyValues {
            return {{"n_estimators", u(c.n_estimators)},
                    {"max_leaf_nodes", u(c.max_leaf_nodes)},
                    {"max_depth", u(c.max_depth)},
                    {"random_state", std::to_string(c.random_state)},
                    {"learning_rate", d(c.learning_rate)},
                    {"min_samples_leaf", u(c.min_samples_leaf)}};
          },
          [](const MlpConfig& c) -> KeyValues {
            return {{"hidden_layers", u(c.hidden_layers)},
                    {"hidden_width", u(c.hidden_width)},
                    {"elu_alpha", d(c.elu_alpha)},
                    {"l2_lambda", d(c.l2_lambda)},
                    {"epochs", u(c.epochs)},
                    {"batch_size", u(c.batch_size)},
                    {"learning_rate", d(c.adam.learning_rate)},
                    {"beta1", d(c.adam.beta1)},
                    {"beta2", d(c.adam.beta2)},
                    {"adam_epsilon", d(c.adam.epsilon)},
                    {"bn_eps", d(c.bn_eps)},
                    {"bn_momentum", d(c.bn_momentum)}};
          }},
      cfg);
}

void config_set(FamilyConfig& cfg, std::string_view key, std::string_view value) {
  std::visit(Overloaded{
                 [&](SvrConfig& c) {
                   if (key == "c") return set_double(c.c_penalty, key, value);
                   if (key == "epsilon") return set_double(c.epsilon_tube, key, value);
                   if (key == "gamma") return set_double(c.gamma, key, value);
                   if (key == "max_passes") return set_size(c.max_passes, key, value);
                   if (key == "kkt_tol") return set_double(c.kkt_tol, key, value);
                   if (key == "cache_mb") return set_size(c.cache_mb, key, value);
                   unknown_key("svr", key);
                 },
                 [&](ForestConfig& c) {
                   if (key == "n_estimators") return set_size(c.n_estimators, key, value);
                   if (key == "max_leaf_nodes") return set_size(c.max_leaf_nodes, key, value);
                   if (key == "max_depth") return set_size(c.max_depth, key, value);
                   if (key == "bootstrap") return set_bool(c.bootstrap, key, value);
                   if (key == "min_samples_leaf") return set_size(c.min_samples_leaf, key, value);
                   unknown_key("rf", key);
                 },
                 [&](GbrConfig& c) {
                   if (key == "n_estimators") return set_size(c.n_estimators, key, value);
                   if (key == "max_leaf_nodes") return set_size(c.max_leaf_nodes, key, value);
                   if (key == "max_depth") return set_size(c.max_depth, key, value);
                   if (key == "random_state") return set_u64(c.random_state, key, value);
                   if (key == "learning_rate") return set_double(c.learning_rate, key, value);
                   if (key == "min_samples_leaf") return set_size(c.min_samples_leaf, key, value);
                   unknown_key("gbr", key);
                 },
                 [&](MlpConfig& c) {
                   if (key == "hidden_layers") return set_size(c.hidden_layers, key, value);
                   if (key == "hidden_width") return set_size(c.hidden_width, key, value);
                   if (key == "elu_alpha") return set_double(c.elu_alpha, key, value);
                   if (key == "l2_lambda") return set_double(c.l2_lambda, key, value);
                   if (key == "epochs") return set_size(c.epochs, key, value);
                   if (key == "batch_size") return set_size(c.batch_size, key, value);
                   if (key == "learning_rate") return set_double(c.adam.learning_rate, key, value);
                   if (key == "beta1") return set_double(c.adam.beta1, key, value);
                   if (key == "beta2") return set_double(c.adam.beta2, key, value);
                   if (key == "adam_epsilon") return set_double(c.adam.epsilon, key, value);
                   if (key == "bn_eps") return set_double(c.bn_eps, key, value);
                   if (key == "bn_momentum") return set_double(c.bn_momentum, key, value);
                   unknown_key("mlp", key);
                 }},
             cfg);
}

FittedModel::FittedModel(RegressorSpec spec, FeatureSet features, Standardizer standardizer,
                         TargetScale target, ModelParams params)
    : spec_(std::move(spec)),
      features_(features),
      standardizer_(std::move(standardizer)),
      target_(target),
      params_(std::move(params)) {
  if (standardizer_.dims() != features_.size()) {
    fail(ErrorCode::DimensionMismatch, "standardizer width differs from feature count");
  }
}

std::vector<double> FittedModel::predict(const Matrix& raw) const {
  if (raw.rows() == 0) return {};
  if (raw.cols() != features_.size()) {
    fail(ErrorCode::DimensionMismatch, "expected " + std::to_string(features_.size()) +
                                           " feature columns, got " + std::to_string(raw.cols()));
  }
  const Matrix x = standardize_apply(standardizer_, raw);
  auto out = std::visit(Overloaded{[&](const SvrModel& m) { return svr_predict(m, x); },
                                   [&](const ForestModel& m) { return forest_predict(m, x); },
                                   [&](const GbrModel& m) { return gbr_predict(m, x); },
                                   [&](const MlpModel& m) { return mlp_predict(m, x); }},
                        params_);
  if (target_ != TargetScale{}) {
    for (auto& v : out) v = v * target_.std + target_.mean;
  }
  return out;
}

std::vector<double> FittedModel::predict(const Dataset& ds) const {
  return predict(feature_matrix(ds, features_));
}

FittedModel fit_model(const RegressorSpec& spec, const FeatureSet& features, const Matrix& raw_x,
                      std::span<const double> y, FitDiagnostics* diag) {
  if (raw_x.rows() != y.size()) fail(ErrorCode::LengthMismatch, "feature rows and targets differ");
  if (raw_x.cols() != features.size()) {
    fail(ErrorCode::DimensionMismatch, "feature matrix width differs from feature set");
  }
  if (raw_x.rows() < 2) {
    fail(ErrorCode::TooFewRows, "need at least 2 training rows",
         static_cast<long long>(raw_x.rows()));
  }
  Standardizer st = standardize_fit(raw_x);
  const Matrix x = standardize_apply(st, raw_x);
  FitDiagnostics local;
  FitDiagnostics& dg = diag ? *diag : local;
  TargetScale target;

  ModelParams params = std::visit(
      Overloaded{[&](const SvrConfig& c) -> ModelParams {
                   auto sol = svr_fit(x, y, c, spec.allow_partial);
                   dg.svr_iterations = sol.iterations;
                   dg.svr_violation = sol.max_violation;
                   dg.converged = sol.converged;
                   return std::move(sol.model);
                 },
                 [&](const ForestConfig& c) -> ModelParams {
                   return forest_fit(x, y, c, spec.seed);
                 },
                 [&](const GbrConfig& c) -> ModelParams {
                   auto fit = gbr_fit(x, y, c);
                   dg.stage_mse = std::move(fit.train_mse);
                   return std::move(fit.model);
                 },
                 [&](const MlpConfig& c) -> ModelParams {
                   // The network trains on a standardised target; predictions
                   // are mapped back through the same affine transform.
                   double sum = 0.0;
                   for (double v : y) sum += v;
                   target.mean = sum / static_cast<double>(y.size());
                   double ss = 0.0;
                   for (double v : y) ss += (v - target.mean) * (v - target.mean);
                   const double sd = std::sqrt(ss / static_cast<double>(y.size()));
                   target.std = sd > 0.0 ? sd : 1.0;
                   std::vector<double> z(y.size());
                   for (std::size_t i = 0; i < y.size(); ++i) {
                     z[i] = (y[i] - target.mean) / target.std;
                   }
                   auto fit = mlp_fit(x, z, c, spec.seed);
                   dg.loss_history = std::move(fit.loss_history);
                   return std::move(fit.model);
                 }},
      spec.config);
  return FittedModel(spec, features, std::move(st), target, std::move(params));
}

}  // namespace soilml
