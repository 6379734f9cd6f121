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

#include <stdexcept>
#include <string>

namespace soilml {

/// Broad failure category. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  Internal = 1,
  Config = 2,
  Io = 3,
  Training = 4,
  Estimation = 5,
};

/// Specific failure reasons raised by the core.
enum class ErrorCode {
  // dataset
  MalformedRow,
  UnknownColumn,
  NonMonotoneTimestamp,
  RangeViolation,
  MissingTarget,
  EmptyMatrix,
  BadK,
  UnknownFeature,
  // soilphys
  NonPhysical,
  OutOfRange,
  NoQuiescentWindow,
  // metrics / models
  LengthMismatch,
  Empty,
  DimensionMismatch,
  FamilyMismatch,
  NotConverged,
  BatchTooSmall,
  TooFewRows,
  // plumbing
  BadConfig,
  BadModelFile,
  Io,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;
ErrorKind kind_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, long long detail = -1);

  ErrorCode code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return kind_of(code_); }
  /// Line number, row index or count attached to the failure; -1 when absent.
  long long detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  long long detail_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message, long long detail = -1);

}  // namespace soilml
