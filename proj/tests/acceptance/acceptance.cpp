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

// Acceptance suite. Prints one PASS/FAIL line per criterion; with a numeric
// argument only that criterion runs. Exit status is non-zero on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "fixtures.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"
#include "soilml/dataset.hpp"
#include "soilml/metrics.hpp"
#include "soilml/models/ensemble.hpp"
#include "soilml/models/mlp.hpp"
#include "soilml/models/svr.hpp"
#include "soilml/models/tree.hpp"
#include "soilml/pipeline.hpp"
#include "soilml/simulator.hpp"
#include "soilml/soilphys.hpp"

#ifndef SOILML_CLI
#error "SOILML_CLI must name the command-line binary"
#endif

using namespace soilml;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages of a criterion.
class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) msgs_ += (msgs_.empty() ? "" : "; ") + what;
  }
  Outcome done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s): " + msgs_};
  }

 private:
  int failures_ = 0;
  std::string msgs_;
};

std::string num(double v, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

// ---------------------------------------------------------------------------
// CLI helpers

struct RunResult {
  int status = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs the CLI inside `dir` so relative output paths are identical across runs.
RunResult cli(const std::string& dir, const std::string& args) {
  const std::string cmd = "cd " + quote(dir) + " && " + quote(SOILML_CLI) + " " + args +
                          " > stdout.txt 2> stderr.txt";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = fixture::slurp(dir + "/stdout.txt");
  return r;
}

// ---------------------------------------------------------------------------
// 1. metric formulas

Outcome metric_oracles() {
  Check ck;
  std::mt19937_64 g(20260101);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + g() % 9999;
    std::uniform_real_distribution<double> scale(-3.0, 3.0);
    const double offset = std::pow(10.0, scale(g));
    const double spread = std::pow(10.0, scale(g) - 1.0);
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> rho_d(-1.0, 1.0);
    const double rho = rho_d(g);
    std::vector<double> a(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = z(g), e = z(g);
      a[i] = offset + spread * s;
      p[i] = offset + spread * (rho * s + std::sqrt(1.0 - rho * rho) * e);
    }
    const auto o = oracle::metrics(a, p);
    const auto r = evaluate(a, p);
    auto rel = [](double got, double want) {
      return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
    };
    const double e1 = rel(r.rmse, o.rmse), e2 = rel(r.mae, o.mae);
    double e3 = 0.0;
    ck.require(r.pearson_r.has_value() == o.r.has_value(), "R definedness differs");
    if (r.pearson_r && o.r) e3 = rel(*r.pearson_r, *o.r);
    worst = std::max({worst, e1, e2, e3});
    ck.require(e1 <= 1e-12, "rmse rel err " + num(e1) + " at trial " + std::to_string(trial));
    ck.require(e2 <= 1e-12, "mae rel err " + num(e2) + " at trial " + std::to_string(trial));
    ck.require(e3 <= 1e-12, "R rel err " + num(e3) + " at trial " + std::to_string(trial) +
                                " (R=" + num(o.r.value_or(0.0)) + ")");
    ck.require(r.rmse >= r.mae, "rmse < mae at trial " + std::to_string(trial));
  }
  return ck.done("1000 vectors, worst relative error " + num(worst));
}

// 2. Topp polynomial and its inverse

Outcome topp_round_trip() {
  Check ck;
  double prev = -1.0, worst_inv = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double e = 1.0 + 79.0 * i / 9999.0;
    const double th = vwc_from_permittivity({e});
    if (i > 0) ck.require(th > prev, "not strictly increasing at eps=" + num(e, 8));
    prev = th;
    const double back = vwc_from_permittivity(permittivity_from_vwc(th));
    worst_inv = std::max(worst_inv, std::abs(back - th));
  }
  ck.require(worst_inv < 1e-8, "inverse error " + num(worst_inv));
  const double s80 = vwc_from_permittivity({80.0}), s4 = vwc_from_permittivity({4.0});
  ck.require(std::abs(s80 - 0.9646) <= 1e-7, "eps=80 gives " + num(s80, 10));
  ck.require(std::abs(s4 - 0.0552752) <= 1e-7, "eps=4 gives " + num(s4, 10));
  ck.require(std::abs(s4 - oracle::topp(4.0)) <= 1e-15, "polynomial oracle mismatch");
  return ck.done("10^4-point grid increasing, inverse error " + num(worst_inv) +
                 ", spot values within 1e-7");
}

// 3. travel time to permittivity

Outcome permittivity_scaling() {
  Check ck;
  const double k1 = permittivity_from_travel_time({1e-9, 0.15, 3e8}).epsilon_a;
  ck.require(k1 == 1.0, "kappa(1e-9, 0.15, 3e8) = " + num(k1, 17));
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> tt(1e-9, 2e-8), ll(0.05, 0.3), ss(1.0, 4.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = tt(g), l = ll(g), s = ss(g);
    if (t * kSpeedOfLight / (2 * l) < 1.0) continue;
    const double base = permittivity_from_travel_time({t, l}).epsilon_a;
    const double time_scaled = permittivity_from_travel_time({s * t, l}).epsilon_a;
    const double len_scaled = permittivity_from_travel_time({t, l / s}).epsilon_a;
    const double e1 = std::abs(time_scaled - s * s * base) / (s * s * base);
    const double e2 = std::abs(len_scaled - s * s * base) / (s * s * base);
    worst = std::max({worst, e1, e2});
  }
  ck.require(worst <= 1e-12, "scaling rel err " + num(worst));
  return ck.done("kappa = 1 exactly; quadratic scaling rel err " + num(worst));
}

// 4. MLP gradient

Outcome mlp_gradient() {
  Check ck;
  std::size_t checked = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = gradcheck::run(seed, 1e-4, 1e-7);
    checked += r.checked;
    worst = std::max(worst, r.worst_abs);
    ck.require(r.failed == 0, "seed " + std::to_string(seed) + ": " + r.first_failure);
  }
  return ck.done(std::to_string(checked) + " parameter gradients over 20 seeds, worst abs diff " +
                 num(worst));
}

// 5. Adam on f(w) = w^2

Outcome adam_reference() {
  Check ck;
  // Hand expansion: g_t = 2 w_{t-1}, beta1 = 0.9, beta2 = 0.999, lr = 1e-3, eps = 1e-8.
  long double w = 1.0L, m = 0.0L, v = 0.0L;
  std::vector<long double> ref;
  for (int t = 1; t <= 3; ++t) {
    const long double gr = 2.0L * w;
    m = 0.9L * m + 0.1L * gr;
    v = 0.999L * v + 0.001L * gr * gr;
    const long double mh = m / (1.0L - std::pow(0.9L, t));
    const long double vh = v / (1.0L - std::pow(0.999L, t));
    w -= 1e-3L * mh / (std::sqrt(vh) + 1e-8L);
    ref.push_back(w);
  }
  AdamState st(1);
  std::vector<double> p{1.0};
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    adam_step(st, p, std::vector<double>{2.0 * p[0]}, AdamConfig{});
    const double err = std::abs(p[0] - static_cast<double>(ref[t]));
    worst = std::max(worst, err);
    ck.require(err <= 1e-12, "step " + std::to_string(t + 1) + " off by " + num(err));
  }
  // Step 1 lands on 0.999 up to the epsilon in the denominator.
  ck.require(std::abs(static_cast<double>(ref[0]) - 0.999) < 1e-11, "step 1 is not 0.999");
  return ck.done("w = " + num(static_cast<double>(ref[0]), 12) + ", " +
                 num(static_cast<double>(ref[1]), 12) + ", " +
                 num(static_cast<double>(ref[2]), 12) + "; max err " + num(worst));
}

// 6. SVR against the exhaustive QP

Outcome svr_oracle() {
  Check ck;
  std::mt19937_64 g(606);
  double worst_obj = 0.0, worst_pred = 0.0, worst_kkt = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t n = 2 + g() % 7, d = 1 + g() % 3;
    const auto x = fixture::random_matrix(g, n, d, -1.5, 1.5);
    const auto y = fixture::random_vector(g, n, -1.0, 1.0);
    std::uniform_real_distribution<double> cu(0.2, 5.0), eu(0.0, 0.3), gu(0.2, 2.0);
    SvrConfig cfg;
    cfg.c_penalty = cu(g);
    cfg.epsilon_tube = eu(g);
    cfg.gamma = gu(g);
    cfg.kkt_tol = 1e-12;
    cfg.max_passes = 100000;
    const auto sol = svr_solve(x, y, cfg);
    const auto pts = fixture::rows_of(x);
    const auto ref =
        oracle::svr_brute_force(pts, y, cfg.c_penalty, cfg.epsilon_tube, cfg.gamma);
    const std::string tag = "instance " + std::to_string(inst);
    const double de = std::abs(sol.objective - ref.objective);
    worst_obj = std::max(worst_obj, de);
    ck.require(de <= 1e-4, tag + " objective off by " + num(de));
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = std::min(sol.alpha[i], sol.alpha_star[i]);
      const double hi = std::max(sol.alpha[i], sol.alpha_star[i]);
      worst_kkt = std::max({worst_kkt, -lo, hi - cfg.c_penalty});
      ck.require(lo >= -1e-8 && hi <= cfg.c_penalty + 1e-8, tag + " box violated");
      sum += sol.alpha[i] - sol.alpha_star[i];
    }
    worst_kkt = std::max(worst_kkt, std::abs(sum));
    ck.require(std::abs(sum) <= 1e-8, tag + " equality off by " + num(std::abs(sum)));
    auto queries = fixture::random_matrix(g, 20, d, -2.0, 2.0);
    for (std::size_t q = 0; q < queries.rows() + n; ++q) {
      const auto row = q < queries.rows() ? queries.row(q) : x.row(q - queries.rows());
      const double dp =
          std::abs(sol.model.predict_one(row) - oracle::svr_predict(pts, ref, row, cfg.gamma));
      worst_pred = std::max(worst_pred, dp);
      ck.require(dp <= 1e-6, tag + " prediction off by " + num(dp));
    }
  }
  return ck.done("50 instances: objective err " + num(worst_obj) + ", prediction err " +
                 num(worst_pred) + ", constraint err " + num(worst_kkt));
}

// 7. trees and forests

Outcome tree_forest() {
  Check ck;
  std::mt19937_64 g(707);
  int compared = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 2 + g() % 19, d = 1 + g() % 3;
    auto x = fixture::random_matrix(g, n, d);
    if (inst % 2 == 0) {
      for (auto& v : x.data()) v = std::round(v * 3.0);
    }
    const auto y = fixture::random_vector(g, n);
    const TreeConfig cfg{1 + g() % 6, 2 + g() % 12, 1 + g() % 3};
    const auto t = tree_fit(x, y, cfg);
    const auto ref = oracle::tree_brute_force(fixture::rows_of(x), y, cfg.max_depth,
                                              cfg.max_leaf_nodes, cfg.min_samples_leaf);
    const std::string tag = "instance " + std::to_string(inst);
    if (t.nodes().size() != ref.size()) {
      ck.require(false, tag + " node count " + std::to_string(t.nodes().size()) + " vs " +
                            std::to_string(ref.size()));
      continue;
    }
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const auto& a = t.nodes()[i];
      ck.require(a.feature == ref[i].feature && a.threshold == ref[i].threshold &&
                     a.left == ref[i].left && a.right == ref[i].right &&
                     a.n_samples == ref[i].n && std::abs(a.value - ref[i].value) < 1e-12,
                 tag + " node " + std::to_string(i) + " differs");
    }
    ++compared;
  }

  // A forest over one input partitions the line into at most 24 * 29 + 1 cells.
  const auto x1 = fixture::random_matrix(g, 3000, 1, 0.0, 1.0);
  std::vector<double> y1(3000);
  std::normal_distribution<double> z(0.0, 0.1);
  for (std::size_t i = 0; i < 3000; ++i) y1[i] = std::sin(6.0 * x1(i, 0)) + z(g);
  const auto forest = forest_fit(x1, y1, ForestConfig{}, 42);
  const auto q = fixture::random_matrix(g, 50000, 1, -0.5, 1.5);
  const auto pred = forest_predict(forest, q);
  const auto distinct = std::set<double>(pred.begin(), pred.end()).size();
  ck.require(distinct <= 24 * 30, "distinct forest outputs " + std::to_string(distinct));
  ck.require(forest.trees.size() == 24, "forest size");
  for (const auto& t : forest.trees) {
    ck.require(t.leaf_count() <= 30 && t.depth() <= 7, "tree exceeds default depth or leaf limits");
  }

  const auto x3 = fixture::random_matrix(g, 500, 3);
  const auto y3 = fixture::random_vector(g, 500);
  ForestConfig one;
  one.n_estimators = 1;
  one.bootstrap = false;
  const auto f1 = forest_fit(x3, y3, one, 9);
  const auto bare = tree_fit(x3, y3, TreeConfig{one.max_depth, one.max_leaf_nodes, 1});
  const auto q3 = fixture::random_matrix(g, 1000, 3, -1.5, 1.5);
  ck.require(f1.trees.size() == 1 && f1.trees[0] == bare, "1-tree forest differs from bare tree");
  ck.require(forest_predict(f1, q3) == bare.predict(q3), "1-tree predictions differ");

  return ck.done(std::to_string(compared) + " trees equal the exhaustive oracle; " +
                 std::to_string(distinct) + " distinct forest outputs (bound 720); 1-tree forest == tree");
}

// 8. boosting

Outcome gbr_monotone() {
  Check ck;
  std::mt19937_64 g(808);
  std::size_t stages = 0;
  for (int ds = 0; ds < 50; ++ds) {
    const std::size_t n = 20 + g() % 300, d = 1 + g() % 5;
    const auto x = fixture::random_matrix(g, n, d);
    auto y = fixture::random_vector(g, n);
    for (std::size_t i = 0; i < n; ++i) y[i] += 2.0 * x(i, 0) * x(i, d - 1);
    GbrConfig cfg;
    cfg.random_state = static_cast<std::uint64_t>(ds);
    const auto fit = gbr_fit(x, y, cfg);
    ck.require(fit.train_mse.size() == 101, "stage count");
    for (std::size_t s = 1; s < fit.train_mse.size(); ++s) {
      ++stages;
      ck.require(fit.train_mse[s] <= fit.train_mse[s - 1],
                 "dataset " + std::to_string(ds) + " stage " + std::to_string(s) + " rose");
    }
    // Bookkeeping agrees with the model's own predictions.
    const auto p = gbr_predict(fit.model, x);
    double mse = 0.0;
    for (std::size_t i = 0; i < n; ++i) mse += (p[i] - y[i]) * (p[i] - y[i]);
    mse /= static_cast<double>(n);
    ck.require(std::abs(mse - fit.train_mse.back()) <= 1e-10 * (1.0 + mse),
               "dataset " + std::to_string(ds) + " final MSE bookkeeping");
  }
  return ck.done(std::to_string(stages) + " stage transitions over 50 datasets, none increased");
}

// 9. simulated end to end through the CLI

Outcome end_to_end() {
  Check ck;
  fixture::TempDir dir("e2e");
  const std::string d = dir.path().string();
  const auto sim = cli(d, "simulate --out data.csv --seed 42");
  ck.require(sim.status == 0, "simulate exited " + std::to_string(sim.status));
  if (sim.status != 0) return ck.done("");

  const auto truth = read_truth_file(d + "/data.truth");
  const std::string feats = "--features yl69_raw,sen13322_raw";
  const auto cv = cli(d, "crossval --data data.csv --model mlp " + feats + " --folds 5");
  ck.require(cv.status == 0, "crossval exited " + std::to_string(cv.status));
  double r = 0.0;
  if (cv.status == 0) {
    const auto rep = parse_report_block(cv.out);
    const auto pooled = eval_from_report(rep, "pooled");
    r = pooled.pearson_r.value_or(0.0);
    ck.require(r >= 0.70, "pooled R " + num(r, 8));
  }

  const auto tr = cli(d, "train --data data.csv --model mlp " + feats + " --out mlp.model");
  ck.require(tr.status == 0, "train exited " + std::to_string(tr.status));
  const auto fc = cli(d, "fieldcap --data data.csv --model mlp.model");
  ck.require(fc.status == 0, "fieldcap exited " + std::to_string(fc.status));
  double est = 0.0;
  if (fc.status == 0) {
    est = real_from_report(parse_report_block(fc.out), "theta_fc");
    ck.require(std::abs(est - 0.055) <= 0.005, "estimated FC " + num(est, 8));
    ck.require(std::abs(truth.soil.theta_fc - 0.055) < 1e-15, "truth sidecar FC");
  }
  return ck.done("pooled R " + num(r, 8) + " (>= 0.70), FC from predictions " + num(est, 6) +
                 " (truth 0.055)");
}

// 10. estimator on noiseless truth

Outcome fc_noiseless() {
  Check ck;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SimConfig cfg;
    cfg.seed = seed;
    cfg.schedule = jittered_schedule(seed, cfg.start_epoch);
    const auto est = estimate_field_capacity(simulate_vwc(cfg), cfg.schedule.events);
    const double err = std::abs(est.theta_fc - cfg.soil.theta_fc);
    worst = std::max(worst, err);
    ck.require(err <= 0.002, "seed " + std::to_string(seed) + " off by " + num(err));
  }
  return ck.done("10 jittered schedules, worst error " + num(worst));
}

// 11. CLI determinism

Outcome cli_determinism() {
  Check ck;
  const std::string small =
      "--set sim.duration_days=5 mlp.epochs=3 mlp.hidden_layers=3 mlp.hidden_width=8 "
      "gbr.n_estimators=20 rf.n_estimators=8";
  const std::vector<std::pair<std::string, std::vector<std::string>>> steps = {
      {"simulate --out data.csv", {"data.csv", "data.truth"}},
      {"train --data data.csv --model mlp --out mlp.model", {"mlp.model"}},
      {"train --data data.csv --model rf --features yl69_raw,sen13322_raw --out rf.model",
       {"rf.model"}},
      {"predict --model mlp.model --data data.csv --out pred.csv", {"pred.csv"}},
      {"crossval --data data.csv --model gbr --out cv.csv", {"cv.csv"}},
      {"fieldcap --data data.csv --model rf.model", {}},
      {"compare --data data.csv --suite suite.txt --out cmp.csv --plot-script plot.py",
       {"cmp.csv", "plot.py"}},
  };
  fixture::TempDir a("det-a"), b("det-b"), c("det-c");
  const std::string dirs[3] = {a.path().string(), b.path().string(), c.path().string()};
  const std::string threads[3] = {"1", "1", "4"};
  for (const auto& dd : dirs) {
    fixture::spit(dd + "/suite.txt", "svr;all\nrf;all\ngbr;yl69_raw,sen13322_raw\nmlp;all\n");
  }
  std::size_t compared = 0;
  for (const auto& [args, files] : steps) {
    std::string outs[3];
    for (int k = 0; k < 3; ++k) {
      const auto r = cli(dirs[k], "--seed 7 --threads " + threads[k] + " " + small + " " + args);
      ck.require(r.status == 0, "'" + args + "' exited " + std::to_string(r.status));
      outs[k] = r.out;
    }
    const std::string verb = args.substr(0, args.find(' '));
    ck.require(outs[0] == outs[1], verb + ": stdout differs between repeats");
    ck.require(outs[0] == outs[2], verb + ": stdout differs between 1 and 4 threads");
    ++compared;
    for (const auto& f : files) {
      const auto f0 = fixture::slurp(dirs[0] + "/" + f);
      ck.require(!f0.empty(), f + " is empty");
      ck.require(f0 == fixture::slurp(dirs[1] + "/" + f), f + " differs between repeats");
      ck.require(f0 == fixture::slurp(dirs[2] + "/" + f), f + " differs between thread counts");
      ++compared;
    }
  }
  return ck.done("6 commands, " + std::to_string(compared) +
                 " outputs byte-identical across 2 repeats and 1 vs 4 threads");
}

// 12. sensor costs

Outcome costs() {
  Check ck;
  const double all = sensor_cost(FeatureSet::all());
  const double no_ds = sensor_cost(
      FeatureSet::parse("sht10_temp_c,sht10_humidity_pct,yl69_raw,sen13322_raw"));
  const double moist = sensor_cost(FeatureSet::parse("yl69_raw,sen13322_raw"));
  ck.require(all == 75.7, "all channels cost " + num(all, 17));
  ck.require(no_ds == 60.2, "without DS18S20 cost " + num(no_ds, 17));
  ck.require(moist == 6.2, "moisture only cost " + num(moist, 17));
  // The default comparison suite carries the same figures on its three MLP rows.
  const auto suite = default_suite();
  ck.require(suite.size() == 6 && sensor_cost(suite[3].features) == 75.7 &&
                 sensor_cost(suite[4].features) == 60.2 && sensor_cost(suite[5].features) == 6.2,
             "default suite costs");
  return ck.done("75.7 / 60.2 / 6.2 EUR");
}

struct Criterion {
  const char* name;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"metric formulas vs quad-precision oracle", metric_oracles},
    {"Topp polynomial round trip", topp_round_trip},
    {"TDR permittivity identity and scaling", permittivity_scaling},
    {"MLP gradient vs finite differences", mlp_gradient},
    {"Adam reference sequence", adam_reference},
    {"SVR vs exhaustive QP", svr_oracle},
    {"tree/forest equivalences", tree_forest},
    {"boosting training loss monotone", gbr_monotone},
    {"end-to-end field capacity from cheap sensors", end_to_end},
    {"field capacity on noiseless truth", fc_noiseless},
    {"CLI determinism", cli_determinism},
    {"sensor cost accounting", costs},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) {
    for (int i = 1; i <= 12; ++i) which.push_back(i);
  }
  int failed = 0;
  for (int id : which) {
    if (id < 1 || id > 12) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto& c = kCriteria[id - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %02d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
