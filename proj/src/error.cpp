// Copyright 2026 The optbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "optbench/error.hpp"

namespace optbench {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateGroupName: return "DuplicateGroupName";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnknownGroupName: return "UnknownGroupName";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::DivisionHazard: return "DivisionHazard";
    case ErrorCode::UncoveredTag: return "UncoveredTag";
    case ErrorCode::OutOfRangeStep: return "OutOfRangeStep";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IndivisibleBatch: return "IndivisibleBatch";
    case ErrorCode::StaleCache: return "StaleCache";
    case ErrorCode::InvalidUnit: return "InvalidUnit";
    case ErrorCode::TooManyDims: return "TooManyDims";
    case ErrorCode::ConfigPathUnknown: return "ConfigPathUnknown";
    case ErrorCode::NoCompletedTrials: return "NoCompletedTrials";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::CorruptRecord: return "CorruptRecord";
    case ErrorCode::EmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace optbench
