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

#include "soilml/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "soilml/error.hpp"
#include "soilml/text.hpp"
#include "soilml/rng.hpp"

namespace soilml {

namespace {

constexpr std::array<std::string_view, kChannelCount> kColumnNames = {
    "ds18s20_temp_c", "sht10_temp_c", "sht10_humidity_pct", "yl69_raw", "sen13322_raw"};

constexpr std::string_view kTimestampColumn = "timestamp";
constexpr std::string_view kTargetColumn = "vwc_true";
constexpr std::size_t kCsvColumns = kChannelCount + 2;

std::string format_value(double v) { return text::shortest(v); }

void check_range(std::string_view column, double v, double lo, double hi) {
  if (!(v >= lo && v <= hi)) {
    fail(ErrorCode::RangeViolation, std::string(column) + "=" + format_value(v) + " outside [" +
                                        format_value(lo) + ", " + format_value(hi) + "]");
  }
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_int(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::int64_t infer_interval(const std::vector<SensorRecord>& records) {
  if (records.size() < 2) return 0;
  std::vector<std::int64_t> deltas;
  deltas.reserve(records.size() - 1);
  for (std::size_t i = 1; i < records.size(); ++i) {
    deltas.push_back(records[i].timestamp - records[i - 1].timestamp);
  }
  auto mid = deltas.begin() + static_cast<std::ptrdiff_t>(deltas.size() / 2);
  std::nth_element(deltas.begin(), mid, deltas.end());
  return *mid;
}

}  // namespace

std::string_view column_name(SensorChannel ch) noexcept {
  return kColumnNames[static_cast<std::size_t>(ch)];
}

std::optional<SensorChannel> channel_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kChannelCount; ++i) {
    if (kColumnNames[i] == name) return static_cast<SensorChannel>(i);
  }
  return std::nullopt;
}

PhysicalSensor sensor_of(SensorChannel ch) noexcept {
  switch (ch) {
    case SensorChannel::Ds18s20TempC: return PhysicalSensor::Ds18s20;
    case SensorChannel::Sht10TempC:
    case SensorChannel::Sht10HumidityPct: return PhysicalSensor::Sht10;
    case SensorChannel::Yl69Raw: return PhysicalSensor::Yl69;
    case SensorChannel::Sen13322Raw: return PhysicalSensor::Sen13322;
  }
  return PhysicalSensor::Decagon5tm;
}

std::int64_t unit_price_cents(PhysicalSensor s) noexcept {
  switch (s) {
    case PhysicalSensor::Ds18s20: return 1550;
    case PhysicalSensor::Sht10: return 5400;
    case PhysicalSensor::Yl69: return 130;
    case PhysicalSensor::Sen13322: return 490;
    case PhysicalSensor::Decagon5tm: return 18000;
  }
  return 0;
}

void validate_record(const SensorRecord& r) {
  for (std::size_t i = 0; i < kChannelCount; ++i) {
    const double v = r.channels[i];
    const auto ch = static_cast<SensorChannel>(i);
    switch (ch) {
      case SensorChannel::Yl69Raw:
      case SensorChannel::Sen13322Raw: check_range(column_name(ch), v, 0.0, 1023.0); break;
      case SensorChannel::Sht10HumidityPct: check_range(column_name(ch), v, 0.0, 100.0); break;
      default:
        if (!std::isfinite(v)) check_range(column_name(ch), v, -HUGE_VAL, HUGE_VAL);
    }
  }
  if (r.vwc_true) check_range(kTargetColumn, *r.vwc_true, 0.0, 1.0);
}

Dataset::Dataset(std::vector<SensorRecord> records, std::string source,
                 std::int64_t interval_seconds)
    : records_(std::move(records)), source_(std::move(source)), interval_(interval_seconds) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    validate_record(records_[i]);
    if (i > 0 && records_[i].timestamp <= records_[i - 1].timestamp) {
      fail(ErrorCode::NonMonotoneTimestamp,
           "record " + std::to_string(i) + " does not advance the timestamp",
           static_cast<long long>(i));
    }
  }
}

std::vector<std::int64_t> Dataset::timestamps() const {
  std::vector<std::int64_t> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.timestamp);
  return out;
}

bool Dataset::has_all_targets() const noexcept {
  return std::all_of(records_.begin(), records_.end(),
                     [](const SensorRecord& r) { return r.vwc_true.has_value(); });
}

// ---------------------------------------------------------------------------
// FeatureSet

FeatureSet::FeatureSet(std::span<const SensorChannel> channels) {
  if (channels.empty()) fail(ErrorCode::InvalidArgument, "feature set must not be empty");
  for (auto ch : channels) {
    const auto bit = static_cast<std::uint8_t>(1U << static_cast<int>(ch));
    if (mask_ & bit) {
      fail(ErrorCode::InvalidArgument,
           "duplicate feature '" + std::string(column_name(ch)) + "'");
    }
    mask_ |= bit;
  }
}

FeatureSet::FeatureSet(std::initializer_list<SensorChannel> channels)
    : FeatureSet(std::span<const SensorChannel>(channels.begin(), channels.size())) {}

FeatureSet FeatureSet::all() { return FeatureSet(kAllChannels); }

FeatureSet FeatureSet::parse(std::string_view list) {
  if (list == "all") return all();
  std::vector<SensorChannel> chans;
  for (auto token : split_fields(list)) {
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    const auto ch = channel_from_name(token);
    if (!ch) fail(ErrorCode::UnknownFeature, "unknown feature '" + std::string(token) + "'");
    chans.push_back(*ch);
  }
  return FeatureSet(chans);
}

std::vector<SensorChannel> FeatureSet::channels() const {
  std::vector<SensorChannel> out;
  for (auto ch : kAllChannels) {
    if (contains(ch)) out.push_back(ch);
  }
  return out;
}

std::size_t FeatureSet::size() const noexcept {
  std::size_t n = 0;
  for (auto ch : kAllChannels) n += contains(ch) ? 1 : 0;
  return n;
}

std::string FeatureSet::to_string() const {
  std::string out;
  for (auto ch : channels()) {
    if (!out.empty()) out += ',';
    out += column_name(ch);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

Dataset parse_csv(std::istream& in, std::string source) {
  std::string line;
  long long line_no = 0;
  std::array<int, kCsvColumns> column_of_field{};  // field position -> logical column

  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    std::array<bool, kCsvColumns> seen{};
    if (fields.size() != kCsvColumns) {
      for (auto f : fields) {
        if (f != kTimestampColumn && f != kTargetColumn && !channel_from_name(f)) {
          fail(ErrorCode::UnknownColumn, "unknown column '" + std::string(f) + "'", line_no);
        }
      }
      fail(ErrorCode::MalformedRow,
           "header has " + std::to_string(fields.size()) + " columns, expected " +
               std::to_string(kCsvColumns),
           line_no);
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      int col;
      if (fields[i] == kTimestampColumn) {
        col = 0;
      } else if (fields[i] == kTargetColumn) {
        col = static_cast<int>(kCsvColumns) - 1;
      } else if (auto ch = channel_from_name(fields[i])) {
        col = 1 + static_cast<int>(*ch);
      } else {
        fail(ErrorCode::UnknownColumn, "unknown column '" + std::string(fields[i]) + "'",
             line_no);
      }
      if (seen[static_cast<std::size_t>(col)]) {
        fail(ErrorCode::MalformedRow, "duplicate column '" + std::string(fields[i]) + "'",
             line_no);
      }
      seen[static_cast<std::size_t>(col)] = true;
      column_of_field[i] = col;
    }
    have_header = true;
  }
  if (!have_header) fail(ErrorCode::MalformedRow, "missing header row", line_no + 1);

  std::vector<SensorRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != kCsvColumns) {
      fail(ErrorCode::MalformedRow,
           "line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
               " fields",
           line_no);
    }
    SensorRecord rec;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const int col = column_of_field[i];
      const auto field = fields[i];
      if (col == 0) {
        if (!parse_int(field, rec.timestamp)) {
          fail(ErrorCode::MalformedRow,
               "line " + std::to_string(line_no) + ": bad timestamp '" + std::string(field) + "'",
               line_no);
        }
        continue;
      }
      if (col == static_cast<int>(kCsvColumns) - 1 && field.empty()) continue;
      double v;
      if (!parse_double(field, v)) {
        fail(ErrorCode::MalformedRow,
             "line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'",
             line_no);
      }
      if (col == static_cast<int>(kCsvColumns) - 1) {
        rec.vwc_true = v;
      } else {
        rec.channels[static_cast<std::size_t>(col - 1)] = v;
      }
    }
    try {
      validate_record(rec);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " (line " + std::to_string(line_no) + ")",
                  line_no);
    }
    if (!records.empty() && rec.timestamp <= records.back().timestamp) {
      fail(ErrorCode::NonMonotoneTimestamp,
           "line " + std::to_string(line_no) + ": timestamp " + std::to_string(rec.timestamp) +
               " does not increase",
           line_no);
    }
    records.push_back(rec);
  }
  const auto interval = infer_interval(records);
  return Dataset(std::move(records), std::move(source), interval);
}

Dataset parse_csv_text(std::string_view text, std::string source) {
  std::istringstream in{std::string(text)};
  return parse_csv(in, std::move(source));
}

Dataset read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "' for reading");
  return parse_csv(in, path);
}

void write_csv(std::ostream& out, const Dataset& ds) {
  out << kCsvHeader << '\n';
  std::string line;
  for (const auto& r : ds.records()) {
    line = std::to_string(r.timestamp);
    for (double v : r.channels) {
      line += ',';
      line += format_value(v);
    }
    line += ',';
    if (r.vwc_true) line += format_value(*r.vwc_true);
    line += '\n';
    out << line;
  }
}

void write_csv_file(const std::string& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  write_csv(out, ds);
  if (!out) fail(ErrorCode::Io, "write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Features

Matrix feature_matrix(const Dataset& ds, const FeatureSet& fs) {
  const auto chans = fs.channels();
  Matrix x(ds.size(), chans.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < chans.size(); ++j) x(i, j) = ds.records()[i].value(chans[j]);
  }
  return x;
}

FeatureTable select_features(const Dataset& ds, const FeatureSet& fs) {
  FeatureTable t;
  t.target.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& v = ds.records()[i].vwc_true;
    if (!v) {
      fail(ErrorCode::MissingTarget, "row " + std::to_string(i) + " has no vwc_true",
           static_cast<long long>(i));
    }
    t.target.push_back(*v);
  }
  t.features = feature_matrix(ds, fs);
  return t;
}

// ---------------------------------------------------------------------------
// Standardizer

Standardizer standardize_fit(const Matrix& x) {
  if (x.rows() < 2 || x.cols() == 0) {
    fail(ErrorCode::EmptyMatrix, "standardizer needs at least 2 rows and 1 column");
  }
  const auto n = static_cast<double>(x.rows());
  Standardizer s;
  s.mean.assign(x.cols(), 0.0);
  s.std.assign(x.cols(), 0.0);
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) sum += x(i, j);
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double d = x(i, j) - mean;
      ss += d * d;
    }
    double sd = std::sqrt(ss / n);
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) sd = 1.0;
    s.mean[j] = mean;
    s.std[j] = sd;
  }
  return s;
}

Matrix standardize_apply(const Standardizer& s, const Matrix& x) {
  if (x.cols() != s.dims()) fail(ErrorCode::DimensionMismatch, "standardizer width mismatch");
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = (x(i, j) - s.mean[j]) / s.std[j];
  }
  return out;
}

Matrix standardize_invert(const Standardizer& s, const Matrix& x) {
  if (x.cols() != s.dims()) fail(ErrorCode::DimensionMismatch, "standardizer width mismatch");
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j) * s.std[j] + s.mean[j];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Folds

FoldPlan kfold_split(std::size_t n, std::size_t k, FoldMode mode, std::uint64_t seed) {
  if (k < 2 || k > n) {
    fail(ErrorCode::BadK,
         "fold count " + std::to_string(k) + " invalid for " + std::to_string(n) + " records",
         static_cast<long long>(k));
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  if (mode == FoldMode::Shuffled) {
    Rng rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(order[i], order[rng.below(i + 1)]);
    }
  }
  FoldPlan plan;
  plan.k = k;
  plan.mode = mode;
  plan.seed = seed;
  plan.assignment.assign(n, 0);
  // The first n % k folds take one extra record.
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t len = base + (f < extra ? 1 : 0);
    for (std::size_t i = 0; i < len; ++i) plan.assignment[order[pos++]] = f;
  }
  return plan;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == f) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != f) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (auto f : assignment) ++sizes[f];
  return sizes;
}

double sensor_cost(const FeatureSet& fs) {
  std::array<bool, 5> used{};
  for (auto ch : fs.channels()) used[static_cast<std::size_t>(sensor_of(ch))] = true;
  std::int64_t cents = 0;
  for (std::size_t s = 0; s < used.size(); ++s) {
    if (used[s]) cents += unit_price_cents(static_cast<PhysicalSensor>(s));
  }
  return static_cast<double>(cents) / 100.0;
}

}  // namespace soilml
