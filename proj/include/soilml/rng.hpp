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

namespace soilml {

/// Counter-based splittable generator.
///
/// Each output is a SplitMix64 finalisation of (key + counter * golden), so a
/// stream is fully determined by its key. Child streams are derived from
/// (key, index) and never depend on how many values the parent has drawn,
/// which is what lets forest trees, CV folds and epochs be computed in any
/// order or on any thread and still reproduce bit-identical results.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  /// Independent stream for work unit `index`.
  Rng split(std::uint64_t index) const noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform integer in [0, bound). `bound` must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// Standard normal deviate (Box-Muller, no cached pair).
  double normal() noexcept;

  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace soilml
