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

#include "scriptor/detect/gateway.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "scriptor/core/error.hpp"
#include "scriptor/dataset/detections_file.hpp"

namespace scriptor::detect {

DetectorHandle DetectorHandle::external_file(std::filesystem::path file, std::string model_id) {
  if (model_id.empty()) model_id = file.stem().string();
  if (model_id.empty()) throw Error(ErrorCode::InvalidArgument, "detector handle needs a model id");
  return {DetectorKind::external_file, std::move(model_id), std::move(file)};
}

DetectorHandle DetectorHandle::embedded_model(std::filesystem::path model) {
  if (!std::filesystem::exists(model)) {
    throw Error(ErrorCode::ModelLoadError, "no model artifact at " + model.string());
  }
  const auto meta = ModelMetadata::load(sidecar_path(model));
  return {DetectorKind::embedded_model, meta.model_id, std::move(model)};
}

std::filesystem::path sidecar_path(const std::filesystem::path& model) {
  auto p = model;
  p.replace_extension(".json");
  return p;
}

ModelMetadata ModelMetadata::load(const std::filesystem::path& sidecar) {
  std::ifstream in(sidecar);
  if (!in) throw Error(ErrorCode::ModelLoadError, "missing model sidecar " + sidecar.string());
  ModelMetadata m;
  try {
    const auto j = nlohmann::json::parse(in);
    m.model_id = j.at("model_id").get<std::string>();
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    m.manifest_hash = j.value("manifest_hash", std::string{});
    m.input_size = j.value("input_size", m.input_size);
    m.max_glyph_px = j.value("max_glyph_px", m.max_glyph_px);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ModelLoadError, sidecar.string() + ": " + e.what());
  }
  if (m.model_id.empty() || m.class_names.size() != 2 || m.input_size <= 0 || m.max_glyph_px <= 0) {
    throw Error(ErrorCode::ModelLoadError, sidecar.string() + ": incomplete metadata");
  }
  return m;
}

void validate_detections(const AnnotationStore& store, std::span<const DetectionRecord> records) {
  for (const auto& r : records) {
    const auto info = store.column(r.column);
    if (!info) throw Error(ErrorCode::UnknownColumn, "detection on unknown column " + r.column.str());
    if (!r.box.fits(info->width, info->height)) {
      throw Error(ErrorCode::BoxOutOfBounds, "detection box outside " + r.column.str());
    }
    if (!(r.confidence >= 0.0 && r.confidence <= 1.0)) {
      throw Error(ErrorCode::ConfidenceOutOfRange, "confidence outside [0,1] on " + r.column.str());
    }
  }
}

std::vector<AnnotationId> ingest_records(AnnotationStore& store,
                                         std::span<const DetectionRecord> records, int cycle) {
  validate_detections(store, records);
  std::vector<AnnotationId> ids;
  ids.reserve(records.size());
  for (const auto& r : records) {
    Annotation a;
    a.column = r.column;
    a.box = r.box;
    a.cls = r.cls;
    a.origin = Origin::detector;
    a.status = Status::pending;
    a.cycle = cycle;
    a.confidence = r.confidence;
    a.model_id = r.model_id;
    ids.push_back(store.put_annotation(a));
  }
  return ids;
}

std::vector<DetectionRecord> ingest(AnnotationStore& store, const DetectorHandle& handle, int cycle) {
  if (handle.kind != DetectorKind::external_file) {
    throw Error(ErrorCode::InvalidArgument, "ingest reads external detection files only");
  }
  auto records = dataset::load_detections(handle.source);
  ingest_records(store, records, cycle);
  return records;
}

std::vector<DetectionRecord> filter_by_confidence(std::span<const DetectionRecord> records,
                                                  double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidArgument, "tau must lie in [0,1]");
  std::vector<DetectionRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [tau](const DetectionRecord& r) { return r.confidence >= tau; });
  return out;
}

std::vector<DetectionRecord> infer(const DetectorHandle& handle, const preprocess::ColumnImage& column,
                                   double conf_floor, double nms_iou) {
  InferOptions opts;
  opts.conf_floor = conf_floor;
  opts.nms_iou = nms_iou;
  return EmbeddedDetector(handle).infer(column, opts);
}

}  // namespace scriptor::detect
