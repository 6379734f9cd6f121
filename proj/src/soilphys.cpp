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

#include "soilml/soilphys.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "soilml/error.hpp"

namespace soilml {

namespace {

double topp(double e) { return ((4.3e-6 * e - 5.5e-4) * e + 2.92e-2) * e - 5.3e-2; }

double median_inplace(std::vector<double>& v) {
  const std::size_t n = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

struct Run {
  std::size_t begin = 0;  // index into series
  std::size_t end = 0;    // one past last
  std::size_t size() const { return end - begin; }
};

}  // namespace

Permittivity permittivity_from_travel_time(const TdrReading& r) {
  if (!(r.travel_time_s > 0.0) || !(r.line_length_m > 0.0) || !(r.light_speed_mps > 0.0)) {
    fail(ErrorCode::InvalidArgument, "travel time, line length and light speed must be positive");
  }
  // Travel time relative to the same path in air; exact when the two agree.
  const double ratio = r.travel_time_s / (2.0 * r.line_length_m / r.light_speed_mps);
  const double kappa = ratio * ratio;
  if (kappa < 1.0) {
    fail(ErrorCode::NonPhysical, "permittivity " + std::to_string(kappa) + " is below air");
  }
  return Permittivity{kappa};
}

double vwc_from_permittivity(Permittivity p) {
  const double e = p.epsilon_a;
  if (!(e >= kToppMinPermittivity && e <= kToppMaxPermittivity)) {
    fail(ErrorCode::OutOfRange, "permittivity " + std::to_string(e) + " outside [1, 80]");
  }
  return topp(e);
}

Permittivity permittivity_from_vwc(double theta) {
  const double lo_theta = topp(kToppMinPermittivity);
  const double hi_theta = topp(kToppMaxPermittivity);
  // The endpoints themselves are only known to a few ulps.
  constexpr double kSlack = 1e-12;
  if (!(theta >= lo_theta - kSlack && theta <= hi_theta + kSlack)) {
    fail(ErrorCode::OutOfRange, "vwc " + std::to_string(theta) + " outside Topp range");
  }
  if (theta <= lo_theta) return Permittivity{kToppMinPermittivity};
  if (theta >= hi_theta) return Permittivity{kToppMaxPermittivity};
  double lo = kToppMinPermittivity;
  double hi = kToppMaxPermittivity;
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double f = topp(mid) - theta;
    if (std::abs(f) < 1e-10) break;
    if (f < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) break;
  }
  return Permittivity{mid};
}

double theil_sen_slope(std::span<const VwcSample> s) {
  if (s.size() < 2) return 0.0;
  std::vector<double> slopes;
  slopes.reserve(s.size() * (s.size() - 1) / 2);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double dt = static_cast<double>(s[j].timestamp - s[i].timestamp);
      slopes.push_back((s[j].vwc - s[i].vwc) / dt);
    }
  }
  return median_inplace(slopes);
}

FieldCapacityEstimate estimate_field_capacity(std::span<const VwcSample> series,
                                              std::span<const RainEvent> rains,
                                              const FcConfig& cfg) {
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i].timestamp <= series[i - 1].timestamp) {
      fail(ErrorCode::InvalidArgument, "series timestamps must be strictly increasing",
           static_cast<long long>(i));
    }
  }
  const std::size_t seg = std::max<std::size_t>(cfg.min_samples, 2);

  std::vector<RainEvent> events;
  for (const auto& r : rains) {
    if (r.depth_mm > 0.0) events.push_back(r);
  }
  std::sort(events.begin(), events.end(),
            [](const RainEvent& a, const RainEvent& b) { return a.start < b.start; });

  Run best;
  auto find_index = [&](std::int64_t t) {
    return static_cast<std::size_t>(
        std::lower_bound(series.begin(), series.end(), t,
                         [](const VwcSample& s, std::int64_t v) { return s.timestamp < v; }) -
        series.begin());
  };

  for (std::size_t e = 0; e < events.size(); ++e) {
    const std::int64_t open = events[e].end + cfg.settle_seconds;
    std::int64_t close = std::numeric_limits<std::int64_t>::max();
    for (std::size_t n = e + 1; n < events.size(); ++n) {
      if (events[n].start >= events[e].end) {
        close = events[n].start;
        break;
      }
    }
    // A later event overlapping this one's tail also ends its drainage phase.
    bool superseded = false;
    for (std::size_t n = 0; n < events.size(); ++n) {
      if (n != e && events[n].start < events[e].end + cfg.settle_seconds &&
          events[n].end > events[e].end) {
        superseded = true;
      }
    }
    if (superseded || open >= close) continue;

    const std::size_t first = find_index(open);
    const std::size_t last = close == std::numeric_limits<std::int64_t>::max()
                                 ? series.size()
                                 : find_index(close);
    if (last <= first || last - first < seg) continue;
    const std::size_t m = last - first;

    std::vector<std::size_t> starts;
    const std::size_t stride = std::max<std::size_t>(1, seg / 4);
    for (std::size_t s = 0; s + seg <= m; s += stride) starts.push_back(s);
    if (starts.back() + seg < m) starts.push_back(m - seg);

    std::vector<bool> quiet(m, false);
    for (auto s : starts) {
      const double slope = theil_sen_slope(series.subspan(first + s, seg));
      if (std::abs(slope) < cfg.slope_tol) {
        std::fill(quiet.begin() + static_cast<std::ptrdiff_t>(s),
                  quiet.begin() + static_cast<std::ptrdiff_t>(s + seg), true);
      }
    }
    for (std::size_t i = 0; i < m;) {
      if (!quiet[i]) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < m && quiet[j]) ++j;
      const Run run{first + i, first + j};
      if (run.size() >= seg && run.size() > best.size()) best = run;
      i = j;
    }
  }

  if (best.size() == 0) {
    fail(ErrorCode::NoQuiescentWindow, "no post-rain window with a flat VWC plateau");
  }

  std::vector<double> values;
  values.reserve(best.size());
  double sum = 0.0;
  for (std::size_t i = best.begin; i < best.end; ++i) {
    values.push_back(series[i].vwc);
    sum += series[i].vwc;
  }
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);

  FieldCapacityEstimate est;
  est.n_samples = values.size();
  est.dispersion = std::sqrt(ss / static_cast<double>(values.size()));
  est.theta_fc = median_inplace(values);
  est.window_start = series[best.begin].timestamp;
  est.window_end = series[best.end - 1].timestamp;
  return est;
}

}  // namespace soilml
