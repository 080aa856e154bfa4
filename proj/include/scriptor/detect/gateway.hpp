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
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "scriptor/core/annotation_store.hpp"
#include "scriptor/preprocess/preprocess.hpp"

namespace scriptor::detect {

enum class DetectorKind { external_file, embedded_model };

struct DetectorHandle {
  DetectorKind kind = DetectorKind::external_file;
  std::string model_id;
  std::filesystem::path source;

  /// Detections produced elsewhere, in the detection-file schema.
  static DetectorHandle external_file(std::filesystem::path file, std::string model_id = {});
  /// An ONNX model with its sidecar metadata (<model>.json next to it).
  static DetectorHandle embedded_model(std::filesystem::path model);
};

/// Sidecar of a model artifact.
struct ModelMetadata {
  std::string model_id;
  std::vector<std::string> class_names;
  std::string manifest_hash;
  int input_size = 1280;
  int max_glyph_px = 64;

  static ModelMetadata load(const std::filesystem::path& sidecar);
};

std::filesystem::path sidecar_path(const std::filesystem::path& model);

/// Checks every record against the store's columns (UnknownColumn,
/// BoxOutOfBounds, ConfidenceOutOfRange) without writing anything.
void validate_detections(const AnnotationStore& store, std::span<const DetectionRecord> records);

/// Validates all records, then stores each as a pending detector
/// annotation of `cycle`. Nothing is written if any record is invalid.
std::vector<AnnotationId> ingest_records(AnnotationStore& store,
                                         std::span<const DetectionRecord> records, int cycle);

/// Reads the handle's detection file and ingests it.
std::vector<DetectionRecord> ingest(AnnotationStore& store, const DetectorHandle& handle,
                                    int cycle = 0);

/// Records with confidence >= tau, in input order.
std::vector<DetectionRecord> filter_by_confidence(std::span<const DetectionRecord> records,
                                                  double tau);

struct InferOptions {
  double conf_floor = 0.25;  // strict: only confidences above it survive
  double nms_iou = 0.45;
  int tile_overlap = 0;      // 0 = twice the model's max glyph height
};

/// True when the library was built with embedded ONNX inference.
bool embedded_inference_available() noexcept;

/// Runs an ONNX detector with YOLO-style output rows
/// (cx, cy, w, h, objectness, class scores...) over square tiles of a
/// column. Detections are clipped to the column, filtered by the floor and
/// suppressed class-agnostically. A loaded detector may be shared between
/// threads.
class EmbeddedDetector {
 public:
  explicit EmbeddedDetector(const DetectorHandle& handle);
  ~EmbeddedDetector();
  EmbeddedDetector(EmbeddedDetector&&) noexcept;
  EmbeddedDetector& operator=(EmbeddedDetector&&) noexcept;

  const ModelMetadata& metadata() const noexcept;
  std::vector<DetectionRecord> infer(const preprocess::ColumnImage& column,
                                     const InferOptions& options = {}) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<DetectionRecord> infer(const DetectorHandle& handle, const preprocess::ColumnImage& column,
                                   double conf_floor, double nms_iou);

}  // namespace scriptor::detect
