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

#include "soilml/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "soilml/error.hpp"

namespace soilml {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b, std::size_t min_len) {
  if (a.size() != b.size()) {
    fail(ErrorCode::LengthMismatch,
         "series lengths differ (" + std::to_string(a.size()) + " vs " +
             std::to_string(b.size()) + ")");
  }
  if (a.size() < min_len) {
    fail(ErrorCode::Empty, "need at least " + std::to_string(min_len) + " samples");
  }
}

// Widest accumulator the compiler offers. Products of two doubles are exact in
// binary128, so only the summation rounds.
#if defined(__SIZEOF_FLOAT128__)
using Wide = __float128;
#else
using Wide = long double;
#endif

long double wide_sqrt(Wide v) { return std::sqrt(static_cast<long double>(v)); }

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
}

std::optional<double> pearson_two_pass(std::span<const double> x, std::span<const double> y) {
  if (is_constant(x) || is_constant(y)) return std::nullopt;
  const auto n = static_cast<Wide>(x.size());
  Wide sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const Wide mx = sx / n, my = sy / n;
  Wide sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Wide dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  const long double r = static_cast<long double>(sxy) /
                        (wide_sqrt(sxx) * wide_sqrt(syy));
  return static_cast<double>(std::clamp<long double>(r, -1.0L, 1.0L));
}

}  // namespace

double rmse(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, 1);
  long double ss = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const long double d = static_cast<long double>(actual[i]) - predicted[i];
    ss += d * d;
  }
  return static_cast<double>(std::sqrt(ss / static_cast<long double>(actual.size())));
}

double mae(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, 1);
  long double s = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    s += std::abs(static_cast<long double>(actual[i]) - predicted[i]);
  }
  return static_cast<double>(s / static_cast<long double>(actual.size()));
}

std::optional<double> pearson_r(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 2);
  const auto n = static_cast<Wide>(x.size());
  Wide sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Wide a = x[i], b = y[i];
    sx += a;
    sy += b;
    sxx += a * a;
    syy += b * b;
    sxy += a * b;
  }
  const Wide vx = n * sxx - sx * sx;
  const Wide vy = n * syy - sy * sy;
  // Relative size of the surviving variance term; below 1e-6 more than six
  // digits cancelled.
  const bool lossy = !(vx > Wide(1e-6) * n * sxx) || !(vy > Wide(1e-6) * n * syy);
  if (lossy) return pearson_two_pass(x, y);
  const long double r =
      static_cast<long double>(n * sxy - sx * sy) / (wide_sqrt(vx) * wide_sqrt(vy));
  return static_cast<double>(std::clamp<long double>(r, -1.0L, 1.0L));
}

EvaluationReport evaluate(std::span<const double> actual, std::span<const double> predicted) {
  EvaluationReport rep;
  rep.rmse = rmse(actual, predicted);
  rep.mae = mae(actual, predicted);
  rep.n = actual.size();
  if (actual.size() >= 2) rep.pearson_r = pearson_r(actual, predicted);
  return rep;
}

std::string format_metric(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.8f", v);
  return buf;
}

std::string format_metric(const std::optional<double>& v) {
  return v ? format_metric(*v) : std::string("n/a");
}

}  // namespace soilml
