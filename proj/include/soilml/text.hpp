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
#include <optional>
#include <string>
#include <string_view>

namespace soilml::text {

/// Shortest decimal that parses back to the same double.
std::string shortest(double v);
/// C99 hex-float ("%a"), exact.
std::string hexfloat(double v);

std::optional<double> to_double(std::string_view s);  // decimal or hex-float, finite only
std::optional<std::uint64_t> to_u64(std::string_view s);
std::optional<std::int64_t> to_i64(std::string_view s);
std::optional<bool> to_bool(std::string_view s);  // true/false/1/0/on/off/yes/no

std::string_view trim(std::string_view s) noexcept;

}  // namespace soilml::text
