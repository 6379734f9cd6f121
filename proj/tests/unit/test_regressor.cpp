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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "soilml/error.hpp"
#include "soilml/models/regressor.hpp"
#include "soilml/parallel.hpp"

using namespace soilml;

namespace {

struct Data {
  Matrix x;
  std::vector<double> y;
};

Data smooth(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  Data d{fixture::random_matrix(g, n, 2, 300.0, 900.0), {}};
  d.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.y[i] = 0.05 + 1e-4 * d.x(i, 0) - 2e-5 * d.x(i, 1);
  return d;
}

FamilyConfig small(Family f) {
  auto cfg = default_config(f);
  if (f == Family::Mlp) {
    config_set(cfg, "epochs", "3");
    config_set(cfg, "hidden_layers", "2");
    config_set(cfg, "hidden_width", "6");
  }
  if (f == Family::GradientBoosting) config_set(cfg, "n_estimators", "20");
  return cfg;
}

const FeatureSet kTwo{SensorChannel::Yl69Raw, SensorChannel::Sen13322Raw};
const Family kFamilies[] = {Family::Svr, Family::RandomForest, Family::GradientBoosting,
                            Family::Mlp};

}  // namespace

TEST_CASE("family names") {
  for (auto f : kFamilies) {
    CHECK(family_from_name(family_name(f)) == f);
    CHECK(family_of(default_config(f)) == f);
  }
  CHECK(family_from_name("ann") == Family::Mlp);
  CHECK_FALSE(family_from_name("knn").has_value());
  CHECK(family_label(Family::Svr) == "Support Vector Regression (SVR)");
}

TEST_CASE("family config keys") {
  auto rf = default_config(Family::RandomForest);
  const auto kv = config_to_kv(rf);
  CHECK(kv.front() == std::pair<std::string, std::string>{"n_estimators", "24"});
  config_set(rf, "max_leaf_nodes", "12");
  CHECK(std::get<ForestConfig>(rf).max_leaf_nodes == 12);
  CHECK_THROWS_AS(config_set(rf, "learning_rate", "0.1"), Error);
  CHECK_THROWS_AS(config_set(rf, "n_estimators", "many"), Error);
  auto gb = default_config(Family::GradientBoosting);
  CHECK(std::get<GbrConfig>(gb).n_estimators == 100);
  CHECK(std::get<GbrConfig>(gb).max_leaf_nodes == 25);
  CHECK(std::get<GbrConfig>(gb).max_depth == 3);
}

TEST_CASE("fit_model input checks") {
  const auto d = smooth(20, 1);
  RegressorSpec spec{default_config(Family::RandomForest), 1, false};
  CHECK_THROWS_AS(fit_model(spec, kTwo, d.x, std::vector<double>(19, 0.0)), Error);
  CHECK_THROWS_AS(fit_model(spec, FeatureSet::all(), d.x, d.y), Error);
  CHECK_THROWS_AS(fit_model(spec, kTwo, d.x.select_rows(std::vector<std::size_t>{0}),
                            std::vector<double>{0.1}),
                  Error);
}

TEST_CASE("every family saves and loads bit-exactly") {
  const auto d = smooth(80, 2);
  std::mt19937_64 g(3);
  const auto q = fixture::random_matrix(g, 25, 2, 250.0, 950.0);
  for (auto f : kFamilies) {
    CAPTURE(family_name(f));
    RegressorSpec spec{small(f), 9, f == Family::Svr};
    FitDiagnostics diag;
    const auto m = fit_model(spec, kTwo, d.x, d.y, &diag);
    std::stringstream ss;
    save_model(ss, m);
    const auto text = ss.str();
    const auto back = load_model(ss);
    CHECK(back == m);
    CHECK(back.predict(q) == m.predict(q));
    std::stringstream again;
    save_model(again, back);
    CHECK(again.str() == text);
    if (f == Family::Mlp) CHECK(diag.loss_history.size() == 3);
    if (f == Family::GradientBoosting) CHECK(diag.stage_mse.size() == 21);
  }
}

TEST_CASE("damaged model files are rejected") {
  const auto d = smooth(40, 4);
  const auto m = fit_model(RegressorSpec{small(Family::RandomForest), 1, false}, kTwo, d.x, d.y);
  std::stringstream ss;
  save_model(ss, m);
  const auto good = ss.str();
  auto expect_bad = [](const std::string& text) {
    std::istringstream in(text);
    try {
      load_model(in);
      FAIL("expected BadModelFile");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BadModelFile);
    }
  };
  expect_bad("");
  expect_bad("not a model\n");
  expect_bad(good.substr(0, good.size() / 2));
  auto wrong_version = good;
  wrong_version.replace(0, good.find('\n'), "soilml-model 99");
  expect_bad(wrong_version);
}

TEST_CASE("mlp target scaling is undone at prediction time") {
  const auto d = smooth(200, 5);
  auto cfg = small(Family::Mlp);
  config_set(cfg, "epochs", "40");
  const auto m = fit_model(RegressorSpec{cfg, 3, false}, kTwo, d.x, d.y);
  CHECK(m.target_scale().std > 0.0);
  CHECK(m.target_scale().mean == doctest::Approx(0.1).epsilon(0.2));
  const auto p = m.predict(d.x);
  const auto r = evaluate(d.y, p);
  CHECK(r.rmse < 0.02);
}

TEST_CASE("cross validation partitions and pools") {
  const auto d = smooth(103, 6);
  const auto plan = kfold_split(103, 5);
  for (auto f : kFamilies) {
    CAPTURE(family_name(f));
    RegressorSpec spec{small(f), 4, true};
    const auto cv = cross_validate(spec, kTwo, d.x, d.y, plan);
    REQUIRE(cv.folds.size() == 5);
    REQUIRE(cv.predictions.size() == 103);
    std::size_t total = 0;
    for (std::size_t k = 0; k < 5; ++k) {
      total += cv.folds[k].n;
      const auto idx = plan.test_indices(k);
      std::vector<double> a, p;
      for (auto i : idx) {
        a.push_back(d.y[i]);
        p.push_back(cv.predictions[i]);
      }
      CHECK(evaluate(a, p) == cv.folds[k]);
    }
    CHECK(total == 103);
    const auto o = oracle::metrics(d.y, cv.predictions);
    CHECK(std::abs(*cv.pooled.pearson_r - *o.r) <= 1e-12);
    CHECK(std::abs(cv.pooled.rmse - o.rmse) <= 1e-12 * o.rmse);
  }
}

TEST_CASE("cross validation is independent of thread count") {
  const auto d = smooth(120, 7);
  const auto plan = kfold_split(120, 4, FoldMode::Shuffled, 3);
  RegressorSpec spec{small(Family::Mlp), 11, false};
  set_max_threads(1);
  const auto a = cross_validate(spec, kTwo, d.x, d.y, plan);
  set_max_threads(3);
  const auto b = cross_validate(spec, kTwo, d.x, d.y, plan);
  set_max_threads(0);
  CHECK(a.predictions == b.predictions);
  CHECK(a.pooled == b.pooled);
}
