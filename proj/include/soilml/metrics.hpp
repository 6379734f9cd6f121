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
#include <optional>
#include <span>
#include <string>

namespace soilml {

/// Throws LengthMismatch or Empty.
double rmse(std::span<const double> actual, std::span<const double> predicted);
double mae(std::span<const double> actual, std::span<const double> predicted);

/// Pearson's R from raw sums, accumulated in long double. Falls back to the
/// mean-centred two-pass form when the raw-sum denominator has lost more than
/// six significant digits. Returns nullopt when either series has zero
/// variance. Throws LengthMismatch, or Empty for fewer than two points.
std::optional<double> pearson_r(std::span<const double> x, std::span<const double> y);

struct EvaluationReport {
  double rmse = 0.0;
  double mae = 0.0;
  std::optional<double> pearson_r;  // nullopt renders as "n/a"
  std::size_t n = 0;

  bool operator==(const EvaluationReport&) const = default;
};

EvaluationReport evaluate(std::span<const double> actual, std::span<const double> predicted);

/// Fixed 8-decimal rendering used in every report table.
std::string format_metric(double v);
std::string format_metric(const std::optional<double>& v);

}  // namespace soilml
