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

#include "soilml/error.hpp"

namespace soilml {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::NonMonotoneTimestamp: return "NonMonotoneTimestamp";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::MissingTarget: return "MissingTarget";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::NonPhysical: return "NonPhysical";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NoQuiescentWindow: return "NoQuiescentWindow";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FamilyMismatch: return "FamilyMismatch";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::BatchTooSmall: return "BatchTooSmall";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::BadModelFile: return "BadModelFile";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ErrorKind kind_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Io:
      return ErrorKind::Io;
    case ErrorCode::NotConverged:
    case ErrorCode::BatchTooSmall:
    case ErrorCode::TooFewRows:
      return ErrorKind::Training;
    case ErrorCode::NoQuiescentWindow:
      return ErrorKind::Estimation;
    case ErrorCode::NonPhysical:
    case ErrorCode::OutOfRange:
    case ErrorCode::LengthMismatch:
    case ErrorCode::Empty:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::FamilyMismatch:
      return ErrorKind::Internal;
    default:
      // Bad input files and bad options are configuration problems.
      return ErrorKind::Config;
  }
}

Error::Error(ErrorCode code, const std::string& message, long long detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      detail_(detail) {}

void fail(ErrorCode code, const std::string& message, long long detail) {
  throw Error(code, message, detail);
}

}  // namespace soilml
