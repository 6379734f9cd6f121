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

#include "soilml/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "soilml/error.hpp"
#include "soilml/parallel.hpp"
#include "soilml/text.hpp"

namespace soilml {

namespace {

std::string pad(std::string_view s, std::size_t w) {
  std::string out(s);
  if (out.size() < w) out.append(w - out.size(), ' ');
  return out;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string percent(double v) { return fixed(100.0 * v, 2) + "%"; }

// Applies the run-wide thread cap for the duration of one command.
class ThreadScope {
 public:
  explicit ThreadScope(const RunConfig& cfg) : previous_(max_threads()) {
    set_max_threads(cfg.threads);
  }
  ~ThreadScope() { set_max_threads(previous_); }
  ThreadScope(const ThreadScope&) = delete;
  ThreadScope& operator=(const ThreadScope&) = delete;

 private:
  std::size_t previous_;
};

Family resolve_family(std::string_view name) {
  const auto f = family_from_name(name);
  if (!f) {
    fail(ErrorCode::BadConfig,
         "unknown model family '" + std::string(name) + "' (expected svr, rf, gbr or mlp)");
  }
  return *f;
}

RegressorSpec make_spec(const RunConfig& cfg, Family f, bool allow_partial) {
  RegressorSpec spec;
  spec.config = cfg.family_config(f);
  spec.seed = cfg.seed;
  spec.allow_partial = allow_partial;
  return spec;
}

void echo_config(std::ostream& out, const FamilyConfig& fc) {
  const auto section = family_name(family_of(fc));
  out << "config:\n";
  for (const auto& [k, v] : config_to_kv(fc)) out << "  " << section << '.' << k << " = " << v << '\n';
}

void echo_config(ReportBlock& rb, const FamilyConfig& fc) {
  const auto section = std::string(family_name(family_of(fc)));
  for (const auto& [k, v] : config_to_kv(fc)) rb.add("config." + section + "." + k, v);
}

void eval_lines(std::ostream& out, const EvaluationReport& r) {
  out << "  n     " << r.n << '\n';
  out << "  rmse  " << format_metric(r.rmse) << '\n';
  out << "  mae   " << format_metric(r.mae) << '\n';
  out << "  r     " << format_metric(r.pearson_r) << '\n';
}

std::optional<RainSchedule> try_rain(const std::string& data, const std::string& rain_path) {
  if (!rain_path.empty()) return read_rain_file(rain_path);
  std::ifstream probe(truth_path_for(data));
  if (!probe) return std::nullopt;
  return read_rain(probe);
}

RainSchedule require_rain(const std::string& data, const std::string& rain_path) {
  auto r = try_rain(data, rain_path);
  if (!r) {
    fail(ErrorCode::Io, "no rain events: pass --rain or provide '" + truth_path_for(data) + "'");
  }
  return *r;
}

std::vector<VwcSample> as_series(const std::vector<std::int64_t>& ts, const std::vector<double>& v) {
  std::vector<VwcSample> s(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) s[i] = {ts[i], v[i]};
  return s;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << body;
  if (!out) fail(ErrorCode::Io, "write to '" + path + "' failed");
}

}  // namespace

// ---------------------------------------------------------------------------
// Report blocks

void ReportBlock::add(std::string key, std::string value) {
  lines_.emplace_back(std::move(key), std::move(value));
}

void ReportBlock::add_real(const std::string& key, double v) {
  add(key, format_metric(v));
  add(key + ".exact", text::hexfloat(v));
}

void ReportBlock::add_eval(const std::string& prefix, const EvaluationReport& r) {
  add(prefix + ".n", std::to_string(r.n));
  add_real(prefix + ".rmse", r.rmse);
  add_real(prefix + ".mae", r.mae);
  if (r.pearson_r) {
    add_real(prefix + ".r", *r.pearson_r);
  } else {
    add(prefix + ".r", "n/a");
  }
}

std::string ReportBlock::render() const {
  std::string s = "[report]\n";
  for (const auto& [k, v] : lines_) s += k + "=" + v + "\n";
  s += "[/report]\n";
  return s;
}

ReportMap parse_report_block(std::string_view text) {
  const auto open = text.find("[report]");
  const auto close = text.find("[/report]");
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    fail(ErrorCode::MalformedRow, "no [report] block found");
  }
  ReportMap m;
  std::istringstream in(std::string(text.substr(open + 8, close - open - 8)));
  std::string line;
  while (std::getline(in, line)) {
    const auto t = text::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::MalformedRow, "report line without '='");
    m[std::string(t.substr(0, eq))] = std::string(t.substr(eq + 1));
  }
  return m;
}

double real_from_report(const ReportMap& m, const std::string& key) {
  const auto it = m.find(key + ".exact");
  if (it == m.end()) fail(ErrorCode::MalformedRow, "report lacks '" + key + ".exact'");
  const auto v = text::to_double(it->second);
  if (!v) fail(ErrorCode::MalformedRow, "report value '" + key + "' is not a number");
  return *v;
}

EvaluationReport eval_from_report(const ReportMap& m, const std::string& prefix) {
  EvaluationReport r;
  const auto n = m.find(prefix + ".n");
  if (n == m.end()) fail(ErrorCode::MalformedRow, "report lacks '" + prefix + ".n'");
  const auto nv = text::to_u64(n->second);
  if (!nv) fail(ErrorCode::MalformedRow, "bad count in report");
  r.n = static_cast<std::size_t>(*nv);
  r.rmse = real_from_report(m, prefix + ".rmse");
  r.mae = real_from_report(m, prefix + ".mae");
  const auto rr = m.find(prefix + ".r");
  if (rr != m.end() && rr->second != "n/a") r.pearson_r = real_from_report(m, prefix + ".r");
  return r;
}

// ---------------------------------------------------------------------------
// Suites

std::vector<SuiteRow> parse_suite(std::string_view body) {
  std::vector<SuiteRow> rows;
  std::istringstream in{std::string(body)};
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view t = line;
    if (const auto hash = t.find('#'); hash != std::string_view::npos) t = t.substr(0, hash);
    t = text::trim(t);
    if (t.empty()) continue;
    const auto semi = t.find(';');
    if (semi == std::string_view::npos) {
      fail(ErrorCode::BadConfig, "suite line is not 'algorithm;feature,list'", line_no);
    }
    SuiteRow row;
    row.family = resolve_family(text::trim(t.substr(0, semi)));
    row.features = FeatureSet::parse(text::trim(t.substr(semi + 1)));
    rows.push_back(row);
  }
  if (rows.empty()) fail(ErrorCode::BadConfig, "suite has no rows");
  return rows;
}

std::vector<SuiteRow> load_suite_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open suite file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_suite(ss.str());
}

std::vector<SuiteRow> default_suite() {
  using C = SensorChannel;
  const FeatureSet all = FeatureSet::all();
  return {
      {Family::Svr, all},
      {Family::RandomForest, all},
      {Family::GradientBoosting, all},
      {Family::Mlp, all},
      {Family::Mlp, FeatureSet{C::Sht10TempC, C::Sht10HumidityPct, C::Yl69Raw, C::Sen13322Raw}},
      {Family::Mlp, FeatureSet{C::Yl69Raw, C::Sen13322Raw}},
  };
}

// ---------------------------------------------------------------------------
// Commands

std::string cmd_simulate(const RunConfig& cfg, const std::string& out_csv) {
  const SimConfig sim = cfg.sim_config();
  const Dataset ds = simulate_dataset(sim);
  write_csv_file(out_csv, ds);
  const std::string truth_path = truth_path_for(out_csv);
  write_truth_file(truth_path, TruthRecord{sim.soil, sim.seed, sim.schedule});

  std::ostringstream out;
  out << "simulated " << ds.size() << " rows at " << sim.dt << " s -> " << out_csv << '\n';
  out << "rain events: " << sim.schedule.events.size() << " ("
      << fixed(sim.schedule.total_depth_mm(), 1) << " mm)\n";
  out << "theta_fc: " << text::shortest(sim.soil.theta_fc) << '\n';
  out << "truth: " << truth_path << '\n';
  ReportBlock rb;
  rb.add("kind", "simulate");
  rb.add("rows", std::to_string(ds.size()));
  rb.add("dt", std::to_string(sim.dt));
  rb.add("seed", std::to_string(sim.seed));
  rb.add("rain_events", std::to_string(sim.schedule.events.size()));
  rb.add_real("theta_fc", sim.soil.theta_fc);
  out << rb.render();
  return out.str();
}

std::string cmd_train(const RunConfig& cfg, const std::string& data, const ModelChoice& choice,
                      const std::string& model_out) {
  ThreadScope threads(cfg);
  const Family fam = resolve_family(choice.family);
  const FeatureSet fs = FeatureSet::parse(choice.features);
  const RegressorSpec spec = make_spec(cfg, fam, choice.allow_partial);
  const Dataset ds = read_csv_file(data);
  const FeatureTable tab = select_features(ds, fs);

  FitDiagnostics diag;
  const FittedModel model = fit_model(spec, fs, tab.features, tab.target, &diag);
  save_model_file(model_out, model);
  const EvaluationReport fit = evaluate(tab.target, model.predict(tab.features));

  std::ostringstream out;
  out << "model: " << family_label(fam) << " [" << family_name(fam) << "]\n";
  out << "features: " << fs.to_string() << '\n';
  out << "sensor cost: " << text::shortest(sensor_cost(fs)) << " EUR\n";
  out << "seed: " << spec.seed << '\n';
  echo_config(out, spec.config);
  out << "training fit:\n";
  eval_lines(out, fit);
  switch (fam) {
    case Family::Svr:
      out << "solver: " << diag.svr_iterations << " iterations, violation "
          << text::shortest(diag.svr_violation) << (diag.converged ? "" : " (not converged)") << '\n';
      break;
    case Family::GradientBoosting:
      out << "stage mse: " << format_metric(diag.stage_mse.front()) << " -> "
          << format_metric(diag.stage_mse.back()) << '\n';
      break;
    case Family::Mlp:
      out << "final epoch loss: " << format_metric(diag.loss_history.back()) << '\n';
      break;
    case Family::RandomForest: break;
  }
  out << "saved: " << model_out << '\n';

  ReportBlock rb;
  rb.add("kind", "train");
  rb.add("family", std::string(family_name(fam)));
  rb.add("features", fs.to_string());
  rb.add("cost", text::shortest(sensor_cost(fs)));
  rb.add("seed", std::to_string(spec.seed));
  echo_config(rb, spec.config);
  rb.add_eval("train", fit);
  out << rb.render();
  return out.str();
}

std::string cmd_predict(const RunConfig& cfg, const std::string& model_path,
                        const std::string& data, const std::string& out_csv) {
  ThreadScope threads(cfg);
  const FittedModel model = load_model_file(model_path);
  const Dataset ds = read_csv_file(data);
  const auto pred = model.predict(ds);

  std::ostringstream csv;
  csv << "timestamp,predicted,actual\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& r = ds.records()[i];
    csv << r.timestamp << ',' << text::shortest(pred[i]) << ',';
    if (r.vwc_true) csv << text::shortest(*r.vwc_true);
    csv << '\n';
  }
  if (!out_csv.empty()) write_text_file(out_csv, csv.str());

  std::ostringstream out;
  out << "model: " << family_label(model.family()) << " [" << family_name(model.family()) << "]\n";
  out << "features: " << model.features().to_string() << '\n';
  out << "rows: " << ds.size() << '\n';
  ReportBlock rb;
  rb.add("kind", "predict");
  rb.add("family", std::string(family_name(model.family())));
  rb.add("rows", std::to_string(ds.size()));
  if (ds.has_all_targets() && !ds.empty()) {
    std::vector<double> actual(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) actual[i] = *ds.records()[i].vwc_true;
    const auto ev = evaluate(actual, pred);
    out << "against vwc_true:\n";
    eval_lines(out, ev);
    rb.add_eval("eval", ev);
  }
  if (!out_csv.empty()) out << "predictions: " << out_csv << '\n';
  if (out_csv.empty()) out << csv.str();
  out << rb.render();
  return out.str();
}

std::string cmd_crossval(const RunConfig& cfg, const std::string& data, const ModelChoice& choice,
                         const std::string& predictions_out) {
  ThreadScope threads(cfg);
  const Family fam = resolve_family(choice.family);
  const FeatureSet fs = FeatureSet::parse(choice.features);
  const RegressorSpec spec = make_spec(cfg, fam, choice.allow_partial);
  const Dataset ds = read_csv_file(data);
  const FeatureTable tab = select_features(ds, fs);
  const FoldPlan plan = kfold_split(ds.size(), cfg.cv_folds, cfg.cv_mode, cfg.cv_seed);
  const CvResult cv = cross_validate(spec, fs, tab.features, tab.target, plan);

  if (!predictions_out.empty()) {
    std::ostringstream csv;
    csv << "timestamp,fold,actual,predicted\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
      csv << ds.records()[i].timestamp << ',' << plan.assignment[i] + 1 << ','
          << text::shortest(tab.target[i]) << ',' << text::shortest(cv.predictions[i]) << '\n';
    }
    write_text_file(predictions_out, csv.str());
  }

  std::ostringstream out;
  out << "model: " << family_label(fam) << " [" << family_name(fam) << "]\n";
  out << "features: " << fs.to_string() << '\n';
  out << "sensor cost: " << text::shortest(sensor_cost(fs)) << " EUR\n";
  out << "folds: " << plan.k << " (" << fold_mode_name(plan.mode) << ")\n";
  out << "seed: " << spec.seed << '\n';
  echo_config(out, spec.config);
  out << '\n' << pad("fold", 8) << pad("n", 8) << pad("rmse", 14) << pad("mae", 14) << "r\n";
  for (std::size_t f = 0; f < cv.folds.size(); ++f) {
    const auto& r = cv.folds[f];
    out << pad(std::to_string(f + 1), 8) << pad(std::to_string(r.n), 8)
        << pad(format_metric(r.rmse), 14) << pad(format_metric(r.mae), 14)
        << format_metric(r.pearson_r) << '\n';
  }
  out << pad("pooled", 8) << pad(std::to_string(cv.pooled.n), 8)
      << pad(format_metric(cv.pooled.rmse), 14) << pad(format_metric(cv.pooled.mae), 14)
      << format_metric(cv.pooled.pearson_r) << '\n';
  if (!predictions_out.empty()) out << "predictions: " << predictions_out << '\n';

  ReportBlock rb;
  rb.add("kind", "crossval");
  rb.add("family", std::string(family_name(fam)));
  rb.add("features", fs.to_string());
  rb.add("cost", text::shortest(sensor_cost(fs)));
  rb.add("seed", std::to_string(spec.seed));
  rb.add("folds", std::to_string(plan.k));
  rb.add("mode", std::string(fold_mode_name(plan.mode)));
  echo_config(rb, spec.config);
  for (std::size_t f = 0; f < cv.folds.size(); ++f) {
    rb.add_eval("fold." + std::to_string(f + 1), cv.folds[f]);
  }
  rb.add_eval("pooled", cv.pooled);
  out << '\n' << rb.render();
  return out.str();
}

std::string cmd_fieldcap(const RunConfig& cfg, const std::string& data,
                         const std::string& model_path, const std::string& rain_path) {
  ThreadScope threads(cfg);
  const Dataset ds = read_csv_file(data);
  const RainSchedule rain = require_rain(data, rain_path);
  std::vector<double> vwc;
  std::string source;
  if (model_path.empty()) {
    vwc.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const auto& v = ds.records()[i].vwc_true;
      if (!v) {
        fail(ErrorCode::MissingTarget,
             "row " + std::to_string(i) + " lacks vwc_true (pass --model to predict it)",
             static_cast<long long>(i));
      }
      vwc.push_back(*v);
    }
    source = "vwc_true";
  } else {
    const FittedModel model = load_model_file(model_path);
    vwc = model.predict(ds);
    source = "predicted by " + std::string(family_name(model.family())) + " on " +
             model.features().to_string();
  }
  const auto est = estimate_field_capacity(as_series(ds.timestamps(), vwc), rain.events, cfg.fc);

  std::ostringstream out;
  out << "source: " << source << '\n';
  out << "theta_fc: " << format_metric(est.theta_fc) << " (" << percent(est.theta_fc) << ")\n";
  out << "window: " << est.window_start << " .. " << est.window_end << " ("
      << fixed(static_cast<double>(est.window_end - est.window_start) / 3600.0, 1) << " h)\n";
  out << "samples: " << est.n_samples << '\n';
  out << "dispersion: " << format_metric(est.dispersion) << '\n';
  ReportBlock rb;
  rb.add("kind", "fieldcap");
  rb.add("source", model_path.empty() ? "vwc_true" : "model");
  rb.add_real("theta_fc", est.theta_fc);
  rb.add("window_start", std::to_string(est.window_start));
  rb.add("window_end", std::to_string(est.window_end));
  rb.add("n_samples", std::to_string(est.n_samples));
  rb.add_real("dispersion", est.dispersion);
  out << rb.render();
  return out.str();
}

namespace {

struct RowOutcome {
  bool ok = false;
  std::string error;
  ErrorCode code = ErrorCode::InvalidArgument;
  EvaluationReport pooled;
  std::vector<double> predictions;
  std::optional<FieldCapacityEstimate> fc;  // empty: not possible
};

constexpr std::array<SensorChannel, kChannelCount> kTableOrder = {
    SensorChannel::Ds18s20TempC, SensorChannel::Sht10TempC, SensorChannel::Yl69Raw,
    SensorChannel::Sen13322Raw, SensorChannel::Sht10HumidityPct};

constexpr std::array<std::string_view, kChannelCount> kTableHeads = {
    "DS18S20(T)", "SHT10(T)", "YL-69(M)", "SEN13322(M)", "SHT10(H)"};

std::string plot_script(const std::string& csv_path) {
  return "#!/usr/bin/env python3\n"
         "# Plots actual vs predicted VWC for every comparison row.\n"
         "import csv, sys\n"
         "from collections import defaultdict\n"
         "import matplotlib\n"
         "matplotlib.use('Agg')\n"
         "import matplotlib.pyplot as plt\n\n"
         "path = sys.argv[1] if len(sys.argv) > 1 else '" + csv_path + "'\n"
         "rows = defaultdict(lambda: ([], [], []))\n"
         "with open(path) as fh:\n"
         "    for r in csv.DictReader(fh):\n"
         "        key = r['row'] + ' ' + r['algorithm'] + ' [' + r['features'] + ']'\n"
         "        t, a, p = rows[key]\n"
         "        t.append(int(r['timestamp']))\n"
         "        a.append(float(r['actual']))\n"
         "        p.append(float(r['predicted']))\n"
         "fig, axes = plt.subplots(len(rows), 1, figsize=(10, 2.5 * len(rows)), squeeze=False)\n"
         "for ax, (key, (t, a, p)) in zip(axes[:, 0], sorted(rows.items())):\n"
         "    h = [(x - t[0]) / 3600.0 for x in t]\n"
         "    ax.plot(h, a, label='actual', linewidth=1)\n"
         "    ax.plot(h, p, label='predicted', linewidth=0.8)\n"
         "    ax.set_title(key, fontsize=9)\n"
         "    ax.set_ylabel('VWC')\n"
         "    ax.legend(loc='upper right', fontsize=8)\n"
         "axes[-1, 0].set_xlabel('hours')\n"
         "fig.tight_layout()\n"
         "fig.savefig(path.rsplit('.', 1)[0] + '.png', dpi=120)\n";
}

}  // namespace

std::string cmd_compare(const RunConfig& cfg, const std::string& data,
                        const std::string& suite_path, const std::string& rain_path,
                        const CompareOutputs& outputs) {
  ThreadScope threads(cfg);
  const auto suite = suite_path.empty() ? default_suite() : load_suite_file(suite_path);
  const Dataset ds = read_csv_file(data);
  const auto rain = try_rain(data, rain_path);
  const auto ts = ds.timestamps();
  const FoldPlan plan = kfold_split(ds.size(), cfg.cv_folds, cfg.cv_mode, cfg.cv_seed);
  const FeatureTable all = select_features(ds, FeatureSet::all());

  std::optional<FieldCapacityEstimate> actual_fc;
  if (rain) {
    try {
      actual_fc = estimate_field_capacity(as_series(ts, all.target), rain->events, cfg.fc);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoQuiescentWindow) throw;
    }
  }

  std::vector<RowOutcome> rows(suite.size());
  parallel_for(suite.size(), [&](std::size_t i) {
    RowOutcome& o = rows[i];
    try {
      const auto& row = suite[i];
      const RegressorSpec spec = make_spec(cfg, row.family, false);
      const Matrix x = feature_matrix(ds, row.features);
      const CvResult cv = cross_validate(spec, row.features, x, all.target, plan);
      o.pooled = cv.pooled;
      o.predictions = cv.predictions;
      if (rain) {
        try {
          const auto est =
              estimate_field_capacity(as_series(ts, cv.predictions), rain->events, cfg.fc);
          if (est.dispersion <= cfg.fc_max_dispersion) o.fc = est;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NoQuiescentWindow) throw;
        }
      }
      o.ok = true;
    } catch (const Error& e) {
      o.code = e.code();
      o.error = e.what();
    } catch (const std::exception& e) {
      o.code = ErrorCode::InvalidArgument;
      o.error = e.what();
    }
  });

  std::size_t failures = 0;
  for (const auto& o : rows) failures += o.ok ? 0 : 1;
  if (failures == rows.size()) fail(rows.front().code, "every comparison row failed: " + rows.front().error);

  // One row per run, one flag column per channel.
  constexpr std::size_t kLabel = 34, kFlag = 13, kCost = 11, kMetric = 13;
  std::ostringstream out;
  out << pad("Algorithm", kLabel);
  for (auto h : kTableHeads) out << pad(h, kFlag);
  out << pad("Cost(EUR)", kCost) << pad("RMSE", kMetric) << pad("MAE", kMetric)
      << pad("Pearson R", kMetric) << "FC actual/estimated\n";
  const std::string fc_actual = actual_fc ? percent(actual_fc->theta_fc) : "n/a";

  ReportBlock rb;
  rb.add("kind", "compare");
  rb.add("rows", std::to_string(suite.size()));
  rb.add("folds", std::to_string(plan.k));
  rb.add("seed", std::to_string(cfg.seed));
  if (actual_fc) {
    rb.add_real("fc_actual", actual_fc->theta_fc);
  } else {
    rb.add("fc_actual", "n/a");
  }
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& row = suite[i];
    const auto& o = rows[i];
    const double cost = sensor_cost(row.features);
    out << pad(family_label(row.family), kLabel);
    for (auto ch : kTableOrder) out << pad(row.features.contains(ch) ? "x" : "-", kFlag);
    out << pad(text::shortest(cost), kCost);
    const std::string p = "row." + std::to_string(i + 1);
    rb.add(p + ".family", std::string(family_name(row.family)));
    rb.add(p + ".features", row.features.to_string());
    rb.add(p + ".cost", text::shortest(cost));
    if (!o.ok) {
      out << "failed: " << o.error << '\n';
      rb.add(p + ".status", "failed");
      continue;
    }
    std::string fc_text;
    if (!rain) {
      fc_text = "n/a (no rain data)";
    } else if (o.fc) {
      fc_text = fc_actual + " / " + percent(o.fc->theta_fc);
    } else {
      fc_text = "Not Possible";
    }
    out << pad(format_metric(o.pooled.rmse), kMetric) << pad(format_metric(o.pooled.mae), kMetric)
        << pad(format_metric(o.pooled.pearson_r), kMetric) << fc_text << '\n';
    rb.add(p + ".status", "ok");
    rb.add_eval(p + ".pooled", o.pooled);
    if (o.fc) {
      rb.add_real(p + ".fc_estimated", o.fc->theta_fc);
    } else {
      rb.add(p + ".fc_estimated", rain ? "not_possible" : "n/a");
    }
  }

  if (!outputs.csv_path.empty()) {
    std::ostringstream csv;
    csv << "row,algorithm,features,timestamp,actual,predicted\n";
    for (std::size_t i = 0; i < suite.size(); ++i) {
      if (!rows[i].ok) continue;
      std::string feats = suite[i].features.to_string();
      std::replace(feats.begin(), feats.end(), ',', '+');
      const std::string head = std::to_string(i + 1) + "," +
                               std::string(family_name(suite[i].family)) + "," + feats + ",";
      for (std::size_t r = 0; r < ds.size(); ++r) {
        csv << head << ts[r] << ',' << text::shortest(all.target[r]) << ','
            << text::shortest(rows[i].predictions[r]) << '\n';
      }
    }
    write_text_file(outputs.csv_path, csv.str());
    out << "plot data: " << outputs.csv_path << '\n';
  }
  if (!outputs.script_path.empty()) {
    write_text_file(outputs.script_path,
                    plot_script(outputs.csv_path.empty() ? "compare.csv" : outputs.csv_path));
    out << "plot script: " << outputs.script_path << '\n';
  }
  out << '\n' << rb.render();
  return out.str();
}

}  // namespace soilml
