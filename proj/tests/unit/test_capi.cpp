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

#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "soilml/soilml.h"

TEST_CASE("config handle") {
  soilml_config* cfg = nullptr;
  REQUIRE(soilml_config_new(&cfg) == SOILML_OK);
  CHECK(soilml_config_set(cfg, "mlp.epochs", "12") == SOILML_OK);
  char* v = nullptr;
  REQUIRE(soilml_config_get(cfg, "mlp.epochs", &v) == SOILML_OK);
  CHECK(std::string(v) == "12");
  soilml_string_free(v);
  CHECK(soilml_config_apply(cfg, "nope.key=1") == SOILML_ERR_CONFIG);
  CHECK(std::string(soilml_last_error_code()) == "BadConfig");
  CHECK(std::string(soilml_last_error()).find("nope.key") != std::string::npos);
  CHECK(soilml_config_load(cfg, "/nonexistent/cfg.txt") == SOILML_ERR_IO);
  char* dump = nullptr;
  REQUIRE(soilml_config_dump(cfg, &dump) == SOILML_OK);
  CHECK(std::string(dump).find("mlp.epochs = 12\n") != std::string::npos);
  soilml_string_free(dump);
  CHECK(soilml_config_set(nullptr, "a", "b") == SOILML_ERR_CONFIG);
  CHECK(soilml_config_new(nullptr) == SOILML_ERR_CONFIG);
  soilml_config_free(cfg);
  soilml_config_free(nullptr);
}

TEST_CASE("datasets, models and commands") {
  fixture::TempDir dir("capi");
  soilml_config* cfg = nullptr;
  REQUIRE(soilml_config_new(&cfg) == SOILML_OK);
  soilml_config_set(cfg, "sim.duration_days", "2");
  const auto csv = dir.file("d.csv"), model = dir.file("m.model");
  char* rep = nullptr;
  REQUIRE(soilml_cmd_simulate(cfg, csv.c_str(), &rep) == SOILML_OK);
  CHECK(std::string(rep).find("rows=1440") != std::string::npos);
  soilml_string_free(rep);
  REQUIRE(soilml_cmd_train(cfg, csv.c_str(), "gbr", "yl69_raw", 0, model.c_str(), nullptr) ==
          SOILML_OK);
  CHECK(soilml_cmd_train(cfg, csv.c_str(), "gbr", "", 0, nullptr, nullptr) == SOILML_ERR_CONFIG);

  soilml_dataset* ds = nullptr;
  REQUIRE(soilml_dataset_load(csv.c_str(), &ds) == SOILML_OK);
  CHECK(soilml_dataset_rows(ds) == 1440);
  soilml_model* m = nullptr;
  REQUIRE(soilml_model_load(model.c_str(), &m) == SOILML_OK);
  CHECK(std::string(soilml_model_family(m)) == "gbr");
  std::vector<double> out(1440);
  CHECK(soilml_model_predict(m, ds, out.data(), out.size()) == SOILML_OK);
  CHECK(out[0] > 0.0);
  CHECK(soilml_model_predict(m, ds, out.data(), 10) == SOILML_ERR_CONFIG);
  soilml_model* junk = nullptr;
  CHECK(soilml_model_load(csv.c_str(), &junk) == SOILML_ERR_CONFIG);
  CHECK(std::string(soilml_last_error_code()) == "BadModelFile");
  CHECK(soilml_model_load("/nonexistent.model", &junk) == SOILML_ERR_IO);
  CHECK(junk == nullptr);
  CHECK(soilml_dataset_load("/nonexistent.csv", &ds) == SOILML_ERR_IO);
  soilml_model_free(m);
  soilml_dataset_free(ds);
  soilml_config_free(cfg);
  CHECK(std::strlen(soilml_version()) > 0);
}
