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

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soilml/matrix.hpp"

namespace soilml {

/// The five low-cost sensor channels, in canonical column order.
enum class SensorChannel : std::uint8_t {
  Ds18s20TempC = 0,
  Sht10TempC = 1,
  Sht10HumidityPct = 2,
  Yl69Raw = 3,
  Sen13322Raw = 4,
};

inline constexpr std::size_t kChannelCount = 5;
inline constexpr std::array<SensorChannel, kChannelCount> kAllChannels = {
    SensorChannel::Ds18s20TempC, SensorChannel::Sht10TempC, SensorChannel::Sht10HumidityPct,
    SensorChannel::Yl69Raw, SensorChannel::Sen13322Raw};

/// CSV column name, e.g. "yl69_raw".
std::string_view column_name(SensorChannel ch) noexcept;
std::optional<SensorChannel> channel_from_name(std::string_view name) noexcept;

/// Physical sensors; SHT10 carries two channels.
enum class PhysicalSensor : std::uint8_t { Ds18s20, Sht10, Yl69, Sen13322, Decagon5tm };

PhysicalSensor sensor_of(SensorChannel ch) noexcept;
/// Unit price in euro cents.
std::int64_t unit_price_cents(PhysicalSensor s) noexcept;

struct SensorRecord {
  std::int64_t timestamp = 0;
  std::array<double, kChannelCount> channels{};
  std::optional<double> vwc_true;

  double value(SensorChannel ch) const noexcept { return channels[static_cast<std::size_t>(ch)]; }
  bool operator==(const SensorRecord&) const = default;
};

/// Ordered, validated sensor table.
class Dataset {
 public:
  Dataset() = default;
  /// Throws NonMonotoneTimestamp (detail = record index) or RangeViolation.
  Dataset(std::vector<SensorRecord> records, std::string source, std::int64_t interval_seconds);

  const std::vector<SensorRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const std::string& source() const noexcept { return source_; }
  std::int64_t interval_seconds() const noexcept { return interval_; }

  std::vector<std::int64_t> timestamps() const;
  bool has_all_targets() const noexcept;

  bool operator==(const Dataset& o) const { return records_ == o.records_; }

 private:
  std::vector<SensorRecord> records_;
  std::string source_;
  std::int64_t interval_ = 0;
};

/// Range checks shared by the parser and the simulator. Throws RangeViolation.
void validate_record(const SensorRecord& r);

/// Non-empty, duplicate-free subset of channels, iterated in canonical order.
class FeatureSet {
 public:
  /// Throws InvalidArgument on empty or duplicated input.
  explicit FeatureSet(std::span<const SensorChannel> channels);
  FeatureSet(std::initializer_list<SensorChannel> channels);

  static FeatureSet all();
  /// Comma-separated column names ("yl69_raw,sen13322_raw") or "all".
  /// Throws UnknownFeature naming the offending token.
  static FeatureSet parse(std::string_view list);

  bool contains(SensorChannel ch) const noexcept { return (mask_ >> static_cast<int>(ch)) & 1U; }
  std::vector<SensorChannel> channels() const;
  std::size_t size() const noexcept;
  std::string to_string() const;
  std::uint8_t mask() const noexcept { return mask_; }
  bool is_subset_of(const FeatureSet& other) const noexcept {
    return (mask_ & ~other.mask_) == 0;
  }

  bool operator==(const FeatureSet&) const = default;

 private:
  FeatureSet() = default;
  std::uint8_t mask_ = 0;
};

/// Dataset CSV header, exact.
inline constexpr std::string_view kCsvHeader =
    "timestamp,ds18s20_temp_c,sht10_temp_c,sht10_humidity_pct,yl69_raw,sen13322_raw,vwc_true";

/// Parses the dataset CSV. Errors carry the 1-based line number in detail().
Dataset parse_csv(std::istream& in, std::string source = "stream");
Dataset parse_csv_text(std::string_view text, std::string source = "text");
Dataset read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const Dataset& ds);
void write_csv_file(const std::string& path, const Dataset& ds);

struct FeatureTable {
  Matrix features;
  std::vector<double> target;
};

/// Column order follows the canonical channel order. Throws MissingTarget
/// (detail = 0-based row index) when a row lacks vwc_true.
FeatureTable select_features(const Dataset& ds, const FeatureSet& fs);
/// Same columns without requiring targets.
Matrix feature_matrix(const Dataset& ds, const FeatureSet& fs);

/// Per-column affine normalisation fitted on training rows.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> std;

  std::size_t dims() const noexcept { return mean.size(); }
  bool operator==(const Standardizer&) const = default;
};

/// Population mean/std per column; constant columns get std = 1.
/// Throws EmptyMatrix on fewer than two rows.
Standardizer standardize_fit(const Matrix& x);
Matrix standardize_apply(const Standardizer& s, const Matrix& x);
Matrix standardize_invert(const Standardizer& s, const Matrix& x);

enum class FoldMode : std::uint8_t { Contiguous, Shuffled };

struct FoldPlan {
  std::size_t k = 0;
  FoldMode mode = FoldMode::Contiguous;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignment;  // fold index per record

  std::size_t n() const noexcept { return assignment.size(); }
  /// Held-out indices of fold f, ascending.
  std::vector<std::size_t> test_indices(std::size_t f) const;
  /// Complement of fold f, ascending.
  std::vector<std::size_t> train_indices(std::size_t f) const;
  std::vector<std::size_t> fold_sizes() const;
};

/// Throws BadK unless 2 <= k <= n.
FoldPlan kfold_split(std::size_t n, std::size_t k, FoldMode mode = FoldMode::Contiguous,
                     std::uint64_t seed = 0);

/// Euro price of the physical sensors needed for `fs` (SHT10 counted once).
double sensor_cost(const FeatureSet& fs);

}  // namespace soilml
