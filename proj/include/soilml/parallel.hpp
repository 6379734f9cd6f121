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
#include <functional>

namespace soilml {

/// Upper bound on worker threads used by fits and cross-validation.
/// 0 selects std::thread::hardware_concurrency().
void set_max_threads(std::size_t n) noexcept;
std::size_t max_threads() noexcept;

/// Runs body(i) for i in [0, count). Units are claimed dynamically, so the
/// body must write only to slot i of its output; callers reduce afterwards in
/// index order. Nested calls run inline on the calling worker. The first
/// exception (lowest index) is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace soilml
