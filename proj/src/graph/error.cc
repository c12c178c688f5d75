/* Copyright 2026 The memsched Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "memsched/error.h"

namespace memsched {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDocument: return "InvalidDocument";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kMultiOutputOperator: return "MultiOutputOperator";
    case ErrorCode::kNegativeSize: return "NegativeSize";
    case ErrorCode::kUnknownVertex: return "UnknownVertex";
    case ErrorCode::kIllegalSchedule: return "IllegalSchedule";
    case ErrorCode::kNegativeFootprint: return "NegativeFootprint";
    case ErrorCode::kNotLinear: return "NotLinear";
    case ErrorCode::kWouldCreateCycle: return "WouldCreateCycle";
    case ErrorCode::kCheckFailed: return "CheckFailed";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kInconsistentAssignment: return "InconsistentAssignment";
    case ErrorCode::kInfeasibleBalance: return "InfeasibleBalance";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace memsched
