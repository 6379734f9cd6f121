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

#include "soilml/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <vector>

#include "soilml/error.hpp"
#include "soilml/text.hpp"

namespace soilml {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  fail(ErrorCode::BadConfig,
       "invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

struct Binding {
  std::string key;
  std::function<std::string()> get;
  std::function<void(std::string_view)> set;
};

Binding real(std::string key, double& v) {
  auto k = key;
  return {std::move(key), [&v] { return text::shortest(v); },
          [&v, k](std::string_view s) {
            const auto p = text::to_double(s);
            if (!p) bad_value(k, s);
            v = *p;
          }};
}

template <class T>
Binding integer(std::string key, T& v) {
  auto k = key;
  return {std::move(key), [&v] { return std::to_string(v); },
          [&v, k](std::string_view s) {
            if constexpr (std::is_signed_v<T>) {
              const auto p = text::to_i64(s);
              if (!p) bad_value(k, s);
              v = static_cast<T>(*p);
            } else {
              const auto p = text::to_u64(s);
              if (!p) bad_value(k, s);
              v = static_cast<T>(*p);
            }
          }};
}

void curve(std::vector<Binding>& b, const std::string& name, MoistureCurve& c) {
  b.push_back(real("noise." + name + "_offset", c.offset));
  b.push_back(real("noise." + name + "_a", c.a));
  b.push_back(real("noise." + name + "_b", c.b));
  b.push_back(real("noise." + name + "_temp_coeff", c.temp_coeff));
  b.push_back(real("noise." + name + "_std", c.noise_std));
}

// Family keys are delegated to the models layer so both share one table.
template <class Cfg>
void family(std::vector<Binding>& b, const std::string& section, Cfg& cfg) {
  FamilyConfig probe = cfg;
  for (const auto& [k, v] : config_to_kv(probe)) {
    const std::string sub = k;
    b.push_back({section + "." + sub,
                 [&cfg, sub] {
                   for (const auto& [kk, vv] : config_to_kv(FamilyConfig(cfg))) {
                     if (kk == sub) return vv;
                   }
                   return std::string();
                 },
                 [&cfg, sub](std::string_view s) {
                   FamilyConfig tmp = cfg;
                   config_set(tmp, sub, s);
                   cfg = std::get<Cfg>(tmp);
                 }});
  }
}

std::vector<Binding> bindings(RunConfig& c) {
  std::vector<Binding> b;
  b.push_back(real("sim.duration_days", c.duration_days));
  b.push_back(integer("sim.dt", c.dt));
  b.push_back(integer("sim.rows", c.rows));
  b.push_back(integer("sim.start_epoch", c.start_epoch));
  b.push_back(real("sim.initial_vwc", c.initial_vwc));
  b.push_back({"sim.schedule", [&c] { return std::string(schedule_name(c.schedule)); },
               [&c](std::string_view s) {
                 if (s == "paper") c.schedule = ScheduleKind::Paper;
                 else if (s == "jittered") c.schedule = ScheduleKind::Jittered;
                 else if (s == "none") c.schedule = ScheduleKind::None;
                 else bad_value("sim.schedule", s);
               }});

  b.push_back(real("soil.theta_fc", c.soil.theta_fc));
  b.push_back(real("soil.theta_sat", c.soil.theta_sat));
  b.push_back(real("soil.theta_r", c.soil.theta_r));
  b.push_back(real("soil.drainage_rate", c.soil.drainage_rate));
  b.push_back(real("soil.et_rate", c.soil.et_rate));
  b.push_back(real("soil.infiltration_depth", c.soil.infiltration_depth));

  curve(b, "yl69", c.noise.yl69);
  curve(b, "sen13322", c.noise.sen13322);
  b.push_back(real("noise.soil_temp_mean", c.noise.soil_temp_mean));
  b.push_back(real("noise.soil_temp_amplitude", c.noise.soil_temp_amplitude));
  b.push_back(real("noise.soil_temp_lag_s", c.noise.soil_temp_lag_s));
  b.push_back(real("noise.soil_temp_std", c.noise.soil_temp_noise));
  b.push_back(real("noise.ds18s20_std", c.noise.ds18s20_noise));
  b.push_back(real("noise.sht10_temp_std", c.noise.sht10_temp_noise));
  b.push_back(real("noise.humidity_scale", c.noise.humidity_scale));
  b.push_back(real("noise.humidity_std", c.noise.humidity_noise));

  b.push_back(integer("fc.settle_seconds", c.fc.settle_seconds));
  b.push_back(real("fc.slope_tol", c.fc.slope_tol));
  b.push_back(integer("fc.min_samples", c.fc.min_samples));
  b.push_back(real("fc.max_dispersion", c.fc_max_dispersion));

  family(b, "svr", c.svr);
  family(b, "rf", c.rf);
  family(b, "gbr", c.gbr);
  family(b, "mlp", c.mlp);

  b.push_back(integer("cv.folds", c.cv_folds));
  b.push_back({"cv.mode", [&c] { return std::string(fold_mode_name(c.cv_mode)); },
               [&c](std::string_view s) {
                 if (s == "contiguous") c.cv_mode = FoldMode::Contiguous;
                 else if (s == "shuffled") c.cv_mode = FoldMode::Shuffled;
                 else bad_value("cv.mode", s);
               }});
  b.push_back(integer("cv.seed", c.cv_seed));

  b.push_back(integer("run.seed", c.seed));
  b.push_back(integer("run.threads", c.threads));
  return b;
}

}  // namespace

std::string_view schedule_name(ScheduleKind k) noexcept {
  switch (k) {
    case ScheduleKind::Paper: return "paper";
    case ScheduleKind::Jittered: return "jittered";
    case ScheduleKind::None: return "none";
  }
  return "?";
}

std::string_view fold_mode_name(FoldMode m) noexcept {
  return m == FoldMode::Shuffled ? "shuffled" : "contiguous";
}

void RunConfig::set(std::string_view key, std::string_view value) {
  key = text::trim(key);
  value = text::trim(value);
  for (auto& b : bindings(*this)) {
    if (b.key == key) {
      b.set(value);
      return;
    }
  }
  fail(ErrorCode::BadConfig, "unknown config key '" + std::string(key) + "'");
}

void RunConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    fail(ErrorCode::BadConfig, "override '" + std::string(assignment) + "' is not key=value");
  }
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::string RunConfig::get(std::string_view key) const {
  auto& self = const_cast<RunConfig&>(*this);
  for (auto& b : bindings(self)) {
    if (b.key == key) return b.get();
  }
  fail(ErrorCode::BadConfig, "unknown config key '" + std::string(key) + "'");
}

KeyValues RunConfig::entries() const {
  auto& self = const_cast<RunConfig&>(*this);
  KeyValues out;
  for (auto& b : bindings(self)) out.emplace_back(b.key, b.get());
  return out;
}

FamilyConfig RunConfig::family_config(Family f) const {
  switch (f) {
    case Family::Svr: return svr;
    case Family::RandomForest: return rf;
    case Family::GradientBoosting: return gbr;
    case Family::Mlp: return mlp;
  }
  return rf;
}

SimConfig RunConfig::sim_config() const {
  SimConfig s;
  s.duration_s = duration_days * 86400.0;
  s.dt = dt;
  s.rows = rows;
  s.start_epoch = start_epoch;
  s.initial_vwc = initial_vwc;
  s.seed = seed;
  s.soil = soil;
  s.noise = noise;
  switch (schedule) {
    case ScheduleKind::Paper: s.schedule = default_paper_like_schedule(start_epoch); break;
    case ScheduleKind::Jittered: s.schedule = jittered_schedule(seed, start_epoch); break;
    case ScheduleKind::None: break;
  }
  return s;
}

void load_config(RunConfig& cfg, std::istream& in) {
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view t = line;
    if (const auto hash = t.find('#'); hash != std::string_view::npos) t = t.substr(0, hash);
    t = text::trim(t);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::BadConfig, "line is not 'section.key = value'", line_no);
    }
    try {
      cfg.set(t.substr(0, eq), t.substr(eq + 1));
    } catch (const Error& e) {
      fail(e.code(), std::string(e.what()) + " (line " + std::to_string(line_no) + ")", line_no);
    }
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config file '" + path + "'");
  load_config(cfg, in);
}

}  // namespace soilml
