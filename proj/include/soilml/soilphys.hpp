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
#include <span>
#include <vector>

namespace soilml {

inline constexpr double kSpeedOfLight = 2.99792458e8;

/// Round-trip pulse travel time along a TDR probe.
struct TdrReading {
  double travel_time_s = 0.0;
  double line_length_m = 0.0;
  double light_speed_mps = kSpeedOfLight;
};

/// Apparent dielectric permittivity; >= 1 when built from a physical reading.
struct Permittivity {
  double epsilon_a = 1.0;
};

struct RainEvent {
  std::int64_t start = 0;
  std::int64_t end = 0;
  double depth_mm = 0.0;

  bool operator==(const RainEvent&) const = default;
};

struct VwcSample {
  std::int64_t timestamp = 0;
  double vwc = 0.0;
};

struct FcConfig {
  std::int64_t settle_seconds = 172800;
  double slope_tol = 1e-8;  // VWC per second
  std::size_t min_samples = 360;
};

struct FieldCapacityEstimate {
  double theta_fc = 0.0;
  std::int64_t window_start = 0;
  std::int64_t window_end = 0;
  std::size_t n_samples = 0;
  double dispersion = 0.0;  // population std of VWC inside the window
};

/// kappa = (t c / 2L)^2. Throws NonPhysical when the result is below 1, and
/// InvalidArgument for non-positive t or L.
Permittivity permittivity_from_travel_time(const TdrReading& r);

inline constexpr double kToppMinPermittivity = 1.0;
inline constexpr double kToppMaxPermittivity = 80.0;

/// Topp polynomial, unclamped. Throws OutOfRange outside [1, 80].
double vwc_from_permittivity(Permittivity p);
/// Inverse of the Topp polynomial by bisection on [1, 80].
Permittivity permittivity_from_vwc(double theta);

/// Theil-Sen slope (median of pairwise slopes) of vwc against time, per second.
double theil_sen_slope(std::span<const VwcSample> samples);

/// Locates the post-rain drainage plateau and returns its median VWC.
///
/// For each rain event with positive depth, the candidate window opens
/// `settle_seconds` after the event ends and closes at the next such event's
/// start (or the series end). Each window is scanned with segments of
/// `min_samples` points; segments whose Theil-Sen slope is below `slope_tol`
/// are merged into maximal quiescent runs. The longest run with at least
/// `min_samples` points wins (earliest on ties). Throws NoQuiescentWindow.
FieldCapacityEstimate estimate_field_capacity(std::span<const VwcSample> series,
                                              std::span<const RainEvent> rains,
                                              const FcConfig& cfg = {});

}  // namespace soilml
