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

#include "soilml/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "soilml/error.hpp"
#include "soilml/rng.hpp"
#include "soilml/text.hpp"

namespace soilml {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::int64_t kHour = 3600;
constexpr std::int64_t kDay = 86400;

[[noreturn]] void bad(const std::string& msg) { fail(ErrorCode::BadConfig, msg); }

double quantize(double v, double step) { return std::round(v / step) * step; }

// Rain depth (mm) falling inside [t0, t1).
double rain_in(const RainSchedule& s, double t0, double t1) {
  double mm = 0.0;
  for (const auto& e : s.events) {
    const double lo = std::max<double>(t0, static_cast<double>(e.start));
    const double hi = std::min<double>(t1, static_cast<double>(e.end));
    if (hi > lo) mm += e.depth_mm * (hi - lo) / static_cast<double>(e.end - e.start);
  }
  return mm;
}

}  // namespace

void SoilParams::validate() const {
  if (!(theta_r < theta_fc && theta_fc < theta_sat)) {
    bad("soil requires theta_r < theta_fc < theta_sat");
  }
  if (!(theta_r >= 0.0 && theta_sat <= 1.0)) bad("soil water contents must lie in [0, 1]");
  if (!(drainage_rate > 0.0)) bad("soil.drainage_rate must be > 0");
  if (!(et_rate >= 0.0)) bad("soil.et_rate must be >= 0");
  if (!(infiltration_depth > 0.0)) bad("soil.infiltration_depth must be > 0");
}

void RainSchedule::validate() const {
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.start >= e.end) bad("rain event " + std::to_string(i) + " has start >= end");
    if (!(e.depth_mm >= 0.0)) bad("rain event " + std::to_string(i) + " has negative depth");
    if (i > 0 && e.start < events[i - 1].end) {
      bad("rain event " + std::to_string(i) + " overlaps or precedes its predecessor");
    }
  }
}

double RainSchedule::total_depth_mm() const noexcept {
  double s = 0.0;
  for (const auto& e : events) s += e.depth_mm;
  return s;
}

double MoistureCurve::response(double theta, double temp_c) const noexcept {
  return offset + a / (b + theta) + temp_coeff * (temp_c - 20.0);
}

void SensorNoiseParams::validate(const SoilParams& soil) const {
  for (double s : {yl69.noise_std, sen13322.noise_std, soil_temp_noise, ds18s20_noise,
                   sht10_temp_noise, humidity_noise}) {
    if (!(s >= 0.0)) bad("noise standard deviations must be >= 0");
  }
  for (const auto* c : {&yl69, &sen13322}) {
    // a / (b + theta) is monotone on the range iff b + theta keeps one sign.
    if (!(c->a != 0.0 && c->b + soil.theta_r > 0.0)) {
      bad("moisture transfer curve is not monotone over [theta_r, theta_sat]");
    }
  }
  if (!(humidity_scale > 0.0)) bad("noise.humidity_scale must be > 0");
}

std::size_t SimConfig::sample_count() const {
  if (rows > 0) return rows;
  return static_cast<std::size_t>(std::floor(duration_s / static_cast<double>(dt)));
}

void SimConfig::validate() const {
  if (dt <= 0) bad("sim.dt must be > 0");
  if (rows == 0 && !(duration_s >= static_cast<double>(dt))) bad("sim duration must be >= dt");
  soil.validate();
  noise.validate(soil);
  schedule.validate();
  if (!(initial_vwc >= soil.theta_r && initial_vwc <= soil.theta_sat)) {
    bad("sim.initial_vwc must lie in [theta_r, theta_sat]");
  }
}

RainSchedule default_paper_like_schedule(std::int64_t start) {
  RainSchedule s;
  s.events = {
      {start + 2 * kHour, start + 5 * kHour, 25.0},
      {start + 4 * kDay + 14 * kHour, start + 4 * kDay + 16 * kHour, 8.0},
      {start + 5 * kDay + 20 * kHour, start + 5 * kDay + 22 * kHour + 1800, 10.0},
      {start + 9 * kDay + 6 * kHour, start + 9 * kDay + 7 * kHour + 1800, 6.0},
  };
  return s;
}

RainSchedule jittered_schedule(std::uint64_t seed, std::int64_t start) {
  RainSchedule base = default_paper_like_schedule(start);
  Rng rng = Rng(seed).split(0x5c4ed);
  for (auto& e : base.events) {
    const auto shift = static_cast<std::int64_t>(rng.below(6 * kHour + 1)) - 3 * kHour;
    const double stretch = 0.8 + 0.4 * rng.uniform();
    const double depth = 0.7 + 0.6 * rng.uniform();
    const auto dur = static_cast<std::int64_t>(std::llround(static_cast<double>(e.end - e.start) * stretch));
    e.start = std::max(start, e.start + shift);
    e.end = e.start + std::max<std::int64_t>(dur, 600);
    e.depth_mm *= depth;
  }
  return base;
}

std::vector<VwcSample> simulate_vwc(const SimConfig& cfg) {
  cfg.validate();
  const auto n = cfg.sample_count();
  const auto& soil = cfg.soil;
  const double dt = static_cast<double>(cfg.dt);
  const double column_mm = 1000.0 * soil.infiltration_depth;
  std::vector<VwcSample> out(n);
  double theta = cfg.initial_vwc;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t t = cfg.start_epoch + static_cast<std::int64_t>(i) * cfg.dt;
    out[i] = {t, theta};
    const double rain = rain_in(cfg.schedule, static_cast<double>(t), static_cast<double>(t) + dt);
    double d = rain / column_mm;
    d -= soil.drainage_rate * std::max(theta - soil.theta_fc, 0.0) * dt;
    if (theta > soil.theta_r) d -= soil.et_rate * dt;
    theta = std::clamp(theta + d, soil.theta_r, soil.theta_sat);
  }
  return out;
}

Dataset synthesize_sensors(const std::vector<VwcSample>& series, const SimConfig& cfg) {
  if (series.empty()) fail(ErrorCode::InvalidArgument, "empty VWC series");
  const auto& nz = cfg.noise;
  nz.validate(cfg.soil);
  Rng root(cfg.seed);
  Rng r_temp = root.split(1), r_ds = root.split(2), r_sht = root.split(3), r_hum = root.split(4),
      r_yl = root.split(5), r_sen = root.split(6);
  auto noise = [](Rng& r, double sd) { return sd > 0.0 ? sd * r.normal() : 0.0; };

  std::vector<SensorRecord> recs(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const double phase =
        2.0 * kPi * (static_cast<double>(s.timestamp % kDay) - nz.soil_temp_lag_s) / 86400.0;
    const double temp = nz.soil_temp_mean + nz.soil_temp_amplitude * std::sin(phase) +
                        noise(r_temp, nz.soil_temp_noise);
    auto& rec = recs[i];
    rec.timestamp = s.timestamp;
    auto set = [&rec](SensorChannel ch, double v) { rec.channels[static_cast<std::size_t>(ch)] = v; };
    set(SensorChannel::Ds18s20TempC, quantize(temp + noise(r_ds, nz.ds18s20_noise), 0.0625));
    set(SensorChannel::Sht10TempC, quantize(temp + noise(r_sht, nz.sht10_temp_noise), 0.01));
    const double hum = 100.0 * (1.0 - std::exp(-s.vwc / nz.humidity_scale)) +
                       noise(r_hum, nz.humidity_noise);
    set(SensorChannel::Sht10HumidityPct, std::clamp(quantize(hum, 0.01), 0.0, 100.0));
    const double yl = nz.yl69.response(s.vwc, temp) + noise(r_yl, nz.yl69.noise_std);
    const double sen = nz.sen13322.response(s.vwc, temp) + noise(r_sen, nz.sen13322.noise_std);
    set(SensorChannel::Yl69Raw, std::clamp(std::round(yl), 0.0, 1023.0));
    set(SensorChannel::Sen13322Raw, std::clamp(std::round(sen), 0.0, 1023.0));
    rec.vwc_true = s.vwc;
  }
  return Dataset(std::move(recs), "simulator", cfg.dt);
}

Dataset simulate_dataset(const SimConfig& cfg) { return synthesize_sensors(simulate_vwc(cfg), cfg); }

void write_truth(std::ostream& out, const TruthRecord& t) {
  out << "theta_fc=" << text::shortest(t.soil.theta_fc) << '\n';
  out << "theta_sat=" << text::shortest(t.soil.theta_sat) << '\n';
  out << "theta_r=" << text::shortest(t.soil.theta_r) << '\n';
  out << "k=" << text::shortest(t.soil.drainage_rate) << '\n';
  out << "et_rate=" << text::shortest(t.soil.et_rate) << '\n';
  out << "infiltration_depth=" << text::shortest(t.soil.infiltration_depth) << '\n';
  out << "seed=" << t.seed << '\n';
  out << "rain.count=" << t.schedule.events.size() << '\n';
  for (std::size_t i = 0; i < t.schedule.events.size(); ++i) {
    const auto& e = t.schedule.events[i];
    out << "rain." << i << '=' << e.start << ',' << e.end << ',' << text::shortest(e.depth_mm)
        << '\n';
  }
}

namespace {

using KvMap = std::map<std::string, std::string, std::less<>>;

KvMap parse_kv(std::istream& in) {
  KvMap kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::MalformedRow, "truth line without '='", static_cast<long long>(line_no));
    }
    kv[std::string(text::trim(t.substr(0, eq)))] = std::string(text::trim(t.substr(eq + 1)));
  }
  return kv;
}

const std::string& kv_get(const KvMap& kv, const std::string& k) {
  const auto it = kv.find(k);
  if (it == kv.end()) fail(ErrorCode::MalformedRow, "truth file lacks '" + k + "'");
  return it->second;
}

std::int64_t kv_int(const std::string& k, std::string_view s) {
  const auto v = text::to_i64(s);
  if (!v) fail(ErrorCode::MalformedRow, "truth value '" + k + "' is not an integer");
  return *v;
}

double kv_num(const KvMap& kv, const std::string& k) {
  const auto v = text::to_double(kv_get(kv, k));
  if (!v) fail(ErrorCode::MalformedRow, "truth value '" + k + "' is not a number");
  return *v;
}

RainSchedule rain_from_kv(const KvMap& kv) {
  RainSchedule s;
  const auto count = kv.count("rain.count") ? kv_int("rain.count", kv_get(kv, "rain.count")) : 0;
  for (std::int64_t i = 0; i < count; ++i) {
    const std::string key = "rain." + std::to_string(i);
    const std::string& v = kv_get(kv, key);
    const auto c1 = v.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : v.find(',', c1 + 1);
    if (c2 == std::string::npos) fail(ErrorCode::MalformedRow, "'" + key + "' needs start,end,depth");
    RainEvent e;
    e.start = kv_int(key, std::string_view(v).substr(0, c1));
    e.end = kv_int(key, std::string_view(v).substr(c1 + 1, c2 - c1 - 1));
    const auto d = text::to_double(std::string_view(v).substr(c2 + 1));
    if (!d) fail(ErrorCode::MalformedRow, "'" + key + "' has a bad depth");
    e.depth_mm = *d;
    s.events.push_back(e);
  }
  return s;
}

}  // namespace

TruthRecord read_truth(std::istream& in) {
  const auto kv = parse_kv(in);
  TruthRecord t;
  t.soil.theta_fc = kv_num(kv, "theta_fc");
  t.soil.theta_sat = kv_num(kv, "theta_sat");
  if (kv.count("theta_r")) t.soil.theta_r = kv_num(kv, "theta_r");
  t.soil.drainage_rate = kv_num(kv, "k");
  if (kv.count("et_rate")) t.soil.et_rate = kv_num(kv, "et_rate");
  if (kv.count("infiltration_depth")) t.soil.infiltration_depth = kv_num(kv, "infiltration_depth");
  t.seed = static_cast<std::uint64_t>(kv_int("seed", kv_get(kv, "seed")));
  t.schedule = rain_from_kv(kv);
  return t;
}

RainSchedule read_rain(std::istream& in) {
  const auto kv = parse_kv(in);
  if (!kv.count("rain.count")) fail(ErrorCode::MalformedRow, "rain file lacks 'rain.count'");
  return rain_from_kv(kv);
}

RainSchedule read_rain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open rain file '" + path + "'");
  return read_rain(in);
}

void write_truth_file(const std::string& path, const TruthRecord& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  write_truth(out, t);
  if (!out) fail(ErrorCode::Io, "write to '" + path + "' failed");
}

TruthRecord read_truth_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open truth file '" + path + "'");
  return read_truth(in);
}

std::string truth_path_for(const std::string& csv_path) {
  const auto slash = csv_path.find_last_of('/');
  const auto dot = csv_path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return csv_path.substr(0, dot) + ".truth";
  }
  return csv_path + ".truth";
}

}  // namespace soilml
