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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "soilml/config.hpp"
#include "soilml/metrics.hpp"

namespace soilml {

/// Machine-readable `[report] ... [/report]` block of `key=value` lines.
/// Metrics are written twice: `key` at 8 decimals for reading and
/// `key.exact` as a hex float so the block parses back bit-exactly.
class ReportBlock {
 public:
  void add(std::string key, std::string value);
  void add_real(const std::string& key, double v);
  void add_eval(const std::string& prefix, const EvaluationReport& r);
  std::string render() const;

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

using ReportMap = std::map<std::string, std::string, std::less<>>;

/// Parses the first report block found in `text`. Throws MalformedRow when
/// no well-formed block exists.
ReportMap parse_report_block(std::string_view text);
/// Reads `<prefix>.n`, `.rmse.exact`, `.mae.exact` and `.r.exact` (or r=n/a).
EvaluationReport eval_from_report(const ReportMap& m, const std::string& prefix);
double real_from_report(const ReportMap& m, const std::string& key);

struct ModelChoice {
  std::string family;            // svr | rf | gbr | mlp
  std::string features = "all";  // comma-separated channel names
  bool allow_partial = false;
};

/// One comparison row from a suite file line `algorithm;feature,list`.
struct SuiteRow {
  Family family = Family::Mlp;
  FeatureSet features = FeatureSet::all();
};

std::vector<SuiteRow> parse_suite(std::string_view text);
std::vector<SuiteRow> load_suite_file(const std::string& path);
/// The six default comparison rows: SVR, RF, GBR and MLP on every channel, MLP
/// without the DS18S20, MLP on the two moisture probes.
std::vector<SuiteRow> default_suite();

struct CompareOutputs {
  std::string csv_path;     // tidy predictions, empty to skip
  std::string script_path;  // plot script, empty to skip
};

// Each command returns its terminal report (text table plus report block).
std::string cmd_simulate(const RunConfig& cfg, const std::string& out_csv);
std::string cmd_train(const RunConfig& cfg, const std::string& data, const ModelChoice& choice,
                      const std::string& model_out);
std::string cmd_predict(const RunConfig& cfg, const std::string& model_path,
                        const std::string& data, const std::string& out_csv);
std::string cmd_crossval(const RunConfig& cfg, const std::string& data, const ModelChoice& choice,
                         const std::string& predictions_out);
/// With an empty `model_path` the estimator reads the vwc_true column;
/// otherwise it estimates from the model's predictions. An empty `rain_path`
/// falls back to the truth sidecar next to `data`.
std::string cmd_fieldcap(const RunConfig& cfg, const std::string& data,
                         const std::string& model_path, const std::string& rain_path);
/// An empty `suite_path` selects default_suite().
std::string cmd_compare(const RunConfig& cfg, const std::string& data,
                        const std::string& suite_path, const std::string& rain_path,
                        const CompareOutputs& outputs);

}  // namespace soilml
