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

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>

#include "soilml/dataset.hpp"
#include "soilml/models/regressor.hpp"
#include "soilml/simulator.hpp"
#include "soilml/soilphys.hpp"

namespace soilml {

enum class ScheduleKind { Paper, Jittered, None };

/// Every tunable of a command run. Keys are `section.key`; see
/// `RunConfig::entries()` for the full list with current values.
struct RunConfig {
  // sim.*
  double duration_days = 11.0;
  std::int64_t dt = 120;
  std::size_t rows = 0;
  std::int64_t start_epoch = kDefaultStartEpoch;
  double initial_vwc = 0.06;
  ScheduleKind schedule = ScheduleKind::Paper;
  // soil.* and noise.*
  SoilParams soil;
  SensorNoiseParams noise;
  // fc.*
  FcConfig fc;
  double fc_max_dispersion = 0.005;
  // model families
  SvrConfig svr;
  ForestConfig rf;
  GbrConfig gbr;
  MlpConfig mlp;
  // cv.*
  std::size_t cv_folds = 5;
  FoldMode cv_mode = FoldMode::Contiguous;
  std::uint64_t cv_seed = 0;
  // run.*
  std::uint64_t seed = 42;
  std::size_t threads = 0;

  /// Sets one `section.key`. Throws BadConfig on unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
  /// Applies "section.key=value".
  void apply_override(std::string_view assignment);
  std::string get(std::string_view key) const;
  /// All keys in documentation order with their current values.
  KeyValues entries() const;

  FamilyConfig family_config(Family f) const;
  /// Simulator configuration with the schedule resolved against `seed`.
  SimConfig sim_config() const;
};

/// Line grammar: `section.key = value`, `#` starts a comment, blank lines
/// ignored. Errors carry the 1-based line number.
void load_config(RunConfig& cfg, std::istream& in);
void load_config_file(RunConfig& cfg, const std::string& path);

std::string_view schedule_name(ScheduleKind k) noexcept;
std::string_view fold_mode_name(FoldMode m) noexcept;

}  // namespace soilml
