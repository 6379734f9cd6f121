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

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "soilml/dataset.hpp"
#include "soilml/soilphys.hpp"

namespace soilml {

/// Bucket-model soil column. Defaults describe a sandy field at 30 cm.
struct SoilParams {
  double theta_fc = 0.055;
  double theta_sat = 0.35;
  double theta_r = 0.02;
  double drainage_rate = 3e-5;  // 1/s, about 9 h e-folding
  double et_rate = 1e-9;        // VWC/s removed while theta > theta_r
  double infiltration_depth = 0.30;  // m of soil receiving rain

  /// Throws BadConfig unless theta_r < theta_fc < theta_sat, k > 0, et >= 0, depth > 0.
  void validate() const;
  bool operator==(const SoilParams&) const = default;
};

struct RainSchedule {
  std::vector<RainEvent> events;

  /// Throws BadConfig unless events are ordered, non-overlapping, start < end, depth >= 0.
  void validate() const;
  double total_depth_mm() const noexcept;
  bool operator==(const RainSchedule&) const = default;
};

/// raw = offset + a / (b + theta) + temp_coeff * (T - 20) + N(0, noise_std),
/// rounded and clamped to the 10-bit ADC range. With a < 0 the reading rises
/// with moisture.
struct MoistureCurve {
  double offset = 0.0;
  double a = 0.0;
  double b = 0.0;
  double temp_coeff = 0.0;
  double noise_std = 0.0;

  /// Noise-free, unrounded response.
  double response(double theta, double temp_c) const noexcept;
  bool operator==(const MoistureCurve&) const = default;
};

struct SensorNoiseParams {
  MoistureCurve yl69{1100.0, -40.0, 0.04, 0.4, 1.5};
  MoistureCurve sen13322{900.0, -25.0, 0.06, -0.3, 1.5};
  double soil_temp_mean = 17.0;
  double soil_temp_amplitude = 1.5;
  double soil_temp_lag_s = 28800.0;
  double soil_temp_noise = 0.05;  // process noise on the true soil temperature
  double ds18s20_noise = 0.1;
  double sht10_temp_noise = 0.1;
  double humidity_scale = 0.05;  // humidity = 100 (1 - exp(-theta / scale))
  double humidity_noise = 1.0;

  /// Throws BadConfig for negative noise levels or a non-monotone curve.
  void validate(const SoilParams& soil) const;
  bool operator==(const SensorNoiseParams&) const = default;
};

inline constexpr std::int64_t kDefaultStartEpoch = 1498694400;  // 2017-06-29T00:00:00Z

struct SimConfig {
  double duration_s = 11.0 * 86400.0;
  std::int64_t dt = 120;
  std::size_t rows = 0;  // overrides duration when nonzero
  std::int64_t start_epoch = kDefaultStartEpoch;
  double initial_vwc = 0.06;
  std::uint64_t seed = 42;
  SoilParams soil;
  SensorNoiseParams noise;
  RainSchedule schedule;

  /// Number of samples: `rows` if set, else floor(duration / dt).
  std::size_t sample_count() const;
  void validate() const;
};

/// Heavy event on day 0, dry through day 3, two moderate events on days 4-6
/// and a late event on day 9, relative to `start`.
RainSchedule default_paper_like_schedule(std::int64_t start = kDefaultStartEpoch);
/// Paper-like schedule with times, durations and depths perturbed by `seed`;
/// the dry gap after the first event stays longer than 60 h.
RainSchedule jittered_schedule(std::uint64_t seed, std::int64_t start = kDefaultStartEpoch);

/// Explicit Euler integration of the bucket model; sample i is the state at
/// start_epoch + i * dt.
std::vector<VwcSample> simulate_vwc(const SimConfig& cfg);

/// Sensor channels for a VWC series; vwc_true carries the series itself.
Dataset synthesize_sensors(const std::vector<VwcSample>& series, const SimConfig& cfg);

/// simulate_vwc followed by synthesize_sensors.
Dataset simulate_dataset(const SimConfig& cfg);

/// Ground truth written next to a simulated CSV.
struct TruthRecord {
  SoilParams soil;
  std::uint64_t seed = 0;
  RainSchedule schedule;

  bool operator==(const TruthRecord&) const = default;
};

/// key=value lines: theta_fc, theta_sat, theta_r, k, et_rate, seed,
/// rain.count and rain.<i>=start,end,depth_mm.
void write_truth(std::ostream& out, const TruthRecord& t);
TruthRecord read_truth(std::istream& in);
void write_truth_file(const std::string& path, const TruthRecord& t);
TruthRecord read_truth_file(const std::string& path);
/// Only the rain.count / rain.<i> lines; accepts a truth sidecar too.
RainSchedule read_rain(std::istream& in);
RainSchedule read_rain_file(const std::string& path);
/// "data/run.csv" -> "data/run.truth".
std::string truth_path_for(const std::string& csv_path);

}  // namespace soilml
