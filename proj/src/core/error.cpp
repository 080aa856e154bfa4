// Copyright 2026 The Scriptor Authors
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

#include "scriptor/core/error.hpp"

namespace scriptor {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BoxOutOfBounds: return "BoxOutOfBounds";
    case ErrorCode::DuplicateAccepted: return "DuplicateAccepted";
    case ErrorCode::AlreadyDecided: return "AlreadyDecided";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::RoiOutOfBounds: return "RoiOutOfBounds";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::EmptyImage: return "EmptyImage";
    case ErrorCode::TemplateTooLarge: return "TemplateTooLarge";
    case ErrorCode::ConstantTemplate: return "ConstantTemplate";
    case ErrorCode::UndecidedAnnotation: return "UndecidedAnnotation";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::ConfidenceOutOfRange: return "ConfidenceOutOfRange";
    case ErrorCode::OverlapError: return "OverlapError";
    case ErrorCode::ModelLoadError: return "ModelLoadError";
    case ErrorCode::InferenceError: return "InferenceError";
    case ErrorCode::UnlabeledColumn: return "UnlabeledColumn";
    case ErrorCode::PreviousCycleOpen: return "PreviousCycleOpen";
    case ErrorCode::InvalidPhase: return "InvalidPhase";
    case ErrorCode::ColumnNotInInferenceSet: return "ColumnNotInInferenceSet";
    case ErrorCode::PendingReviewsRemain: return "PendingReviewsRemain";
  }
  return "Unknown";
}

}  // namespace scriptor
