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

// soilml command-line driver. Talks to the library through the C API only.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "soilml/soilml.h"

namespace {

struct ConfigDeleter {
  void operator()(soilml_config* c) const { soilml_config_free(c); }
};
using ConfigPtr = std::unique_ptr<soilml_config, ConfigDeleter>;

int report_failure(soilml_status st) {
  std::fprintf(stderr, "error: %s\n", soilml_last_error());
  return static_cast<int>(st);
}

int finish(soilml_status st, char* report, bool quiet) {
  if (st != SOILML_OK) return report_failure(st);
  if (report && !quiet) std::fputs(report, stdout);
  soilml_string_free(report);
  return 0;
}

const char* c_or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soilml: low-cost soil moisture regression and field-capacity estimation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path;
  std::vector<std::string> overrides;
  long long seed = -1;
  long long threads = -1;
  bool quiet = false;
  app.add_option("--config", config_path, "Config file of `section.key = value` lines");
  app.add_option("--set", overrides, "Override one key, e.g. --set mlp.epochs=50")->take_all();
  app.add_option("--seed", seed, "Run seed (same as --set run.seed=N)");
  app.add_option("--threads", threads, "Worker threads, 0 = all cores (run.threads)");
  app.add_option("--out", out_path, "Primary output path");
  app.add_flag("--quiet,-q", quiet, "Suppress the report on stdout");

  std::string data, family, features = "all", model_path, rain, suite, predictions, script;
  bool allow_partial = false;
  long long folds = -1;

  auto* sim = app.add_subcommand("simulate", "Generate a synthetic dataset and truth sidecar");

  auto* train = app.add_subcommand("train", "Fit a model on a dataset and save it");
  train->add_option("--data", data, "Dataset CSV")->required();
  train->add_option("--model", family, "Model family: svr, rf, gbr or mlp")->required();
  train->add_option("--features", features, "Comma-separated channel list or 'all'");
  train->add_flag("--allow-partial", allow_partial, "Keep a non-converged SVR solution");

  auto* predict = app.add_subcommand("predict", "Predict VWC with a saved model");
  predict->add_option("--model", model_path, "Model file")->required();
  predict->add_option("--data", data, "Dataset CSV")->required();

  auto* cv = app.add_subcommand("crossval", "k-fold cross-validation report");
  cv->add_option("--data", data, "Dataset CSV")->required();
  cv->add_option("--model", family, "Model family: svr, rf, gbr or mlp")->required();
  cv->add_option("--features", features, "Comma-separated channel list or 'all'");
  cv->add_option("--folds", folds, "Number of folds (cv.folds)");
  cv->add_flag("--allow-partial", allow_partial, "Keep non-converged SVR solutions");

  auto* fc = app.add_subcommand("fieldcap", "Estimate field capacity from a VWC series");
  fc->add_option("--data", data, "Dataset CSV")->required();
  fc->add_option("--model", model_path, "Predict VWC with this model instead of vwc_true");
  fc->add_option("--rain", rain, "Rain events file (default: the dataset's .truth sidecar)");

  auto* cmp = app.add_subcommand("compare", "Table of algorithms and sensor subsets");
  cmp->add_option("--data", data, "Dataset CSV")->required();
  cmp->add_option("--suite", suite, "Suite file, one `algorithm;feature,list` per line");
  cmp->add_option("--rain", rain, "Rain events file (default: the dataset's .truth sidecar)");
  cmp->add_option("--plot-script", script, "Also write a plotting script here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : SOILML_ERR_CONFIG;
  }

  soilml_config* raw = nullptr;
  if (soilml_config_new(&raw) != SOILML_OK) return report_failure(SOILML_ERR_INTERNAL);
  ConfigPtr cfg(raw);
  if (!config_path.empty()) {
    if (auto st = soilml_config_load(cfg.get(), config_path.c_str()); st != SOILML_OK) {
      return report_failure(st);
    }
  }
  auto set = [&](const char* key, long long v) {
    return soilml_config_set(cfg.get(), key, std::to_string(v).c_str());
  };
  if (seed >= 0) {
    if (auto st = set("run.seed", seed); st != SOILML_OK) return report_failure(st);
  }
  if (threads >= 0) {
    if (auto st = set("run.threads", threads); st != SOILML_OK) return report_failure(st);
  }
  if (folds >= 0) {
    if (auto st = set("cv.folds", folds); st != SOILML_OK) return report_failure(st);
  }
  for (const auto& o : overrides) {
    if (auto st = soilml_config_apply(cfg.get(), o.c_str()); st != SOILML_OK) {
      return report_failure(st);
    }
  }

  char* report = nullptr;
  soilml_status st = SOILML_OK;
  if (sim->parsed()) {
    if (out_path.empty()) {
      std::fprintf(stderr, "error: simulate needs --out PATH\n");
      return SOILML_ERR_CONFIG;
    }
    st = soilml_cmd_simulate(cfg.get(), out_path.c_str(), &report);
  } else if (train->parsed()) {
    if (out_path.empty()) {
      std::fprintf(stderr, "error: train needs --out MODEL_PATH\n");
      return SOILML_ERR_CONFIG;
    }
    st = soilml_cmd_train(cfg.get(), data.c_str(), family.c_str(), features.c_str(),
                          allow_partial ? 1 : 0, out_path.c_str(), &report);
  } else if (predict->parsed()) {
    st = soilml_cmd_predict(cfg.get(), model_path.c_str(), data.c_str(), c_or_null(out_path),
                            &report);
  } else if (cv->parsed()) {
    st = soilml_cmd_crossval(cfg.get(), data.c_str(), family.c_str(), features.c_str(),
                             allow_partial ? 1 : 0, c_or_null(out_path), &report);
  } else if (fc->parsed()) {
    st = soilml_cmd_fieldcap(cfg.get(), data.c_str(), c_or_null(model_path), c_or_null(rain),
                             &report);
  } else if (cmp->parsed()) {
    st = soilml_cmd_compare(cfg.get(), data.c_str(), c_or_null(suite), c_or_null(rain),
                            c_or_null(out_path), c_or_null(script), &report);
  }
  return finish(st, report, quiet);
}
