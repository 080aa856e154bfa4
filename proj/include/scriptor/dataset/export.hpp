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
#include <vector>

#include "scriptor/core/annotation_store.hpp"
#include "scriptor/dataset/manifest.hpp"

namespace scriptor::dataset {

/// Accepted or adjusted annotations on the manifest's training columns that
/// were produced before the manifest's cycle (bootstrap matches belong to
/// cycle 0, reviewed detections of cycle k become eligible in cycle k+1).
std::vector<Annotation> training_annotations(const AnnotationStore& store,
                                             const DatasetManifest& manifest);

struct ExportSummary {
  int train_images = 0;
  int val_images = 0;
  int label_lines = 0;
  int pending_skipped = 0;
};

/// Writes the detector training layout under `root`:
///   images/{train,val}/<column>.png, labels/{train,val}/<column>.txt,
///   manifest.json, inference.txt (one "<column> <image path>" per line).
ExportSummary export_dataset(const AnnotationStore& store, const DatasetManifest& manifest,
                             const std::filesystem::path& root);

}  // namespace scriptor::dataset
