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

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scriptor/core/types.hpp"

namespace scriptor::dataset {

/// One JSON object per line:
/// {"column":"avila_12r_c0","x":10,"y":20,"w":30,"h":40,"class":1,"confidence":0.8336,"model_id":"m"}
/// Confidence is written with 4 decimals.
std::string format_detection(const DetectionRecord& record);
std::string write_detections(std::span<const DetectionRecord> records);

/// Throws MalformedRecord (bad JSON, missing fields, class outside {0,1},
/// non-positive box) or ConfidenceOutOfRange. Blank lines are skipped.
std::vector<DetectionRecord> read_detections(std::string_view text);

std::vector<DetectionRecord> load_detections(const std::filesystem::path& path);
void save_detections(const std::filesystem::path& path, std::span<const DetectionRecord> records);

}  // namespace scriptor::dataset
