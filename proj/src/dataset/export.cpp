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

#include "scriptor/dataset/export.hpp"

#include <fstream>
#include <map>

#include "scriptor/core/error.hpp"
#include "scriptor/dataset/labels.hpp"

namespace scriptor::dataset {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

ColumnInfo require_column(const AnnotationStore& store, const std::string& id) {
  auto info = store.column(ColumnKey::parse(id));
  if (!info) throw Error(ErrorCode::UnknownColumn, "manifest names unknown column " + id);
  return *info;
}

}  // namespace

std::vector<Annotation> training_annotations(const AnnotationStore& store,
                                             const DatasetManifest& manifest) {
  std::vector<Annotation> out;
  for (const auto& id : manifest.training_columns()) {
    AnnotationFilter f;
    f.column = ColumnKey::parse(id);
    for (auto& a : store.query(f)) {
      if (is_positive(a.status) && a.cycle < manifest.cycle) out.push_back(std::move(a));
    }
  }
  return out;
}

ExportSummary export_dataset(const AnnotationStore& store, const DatasetManifest& manifest,
                             const fs::path& root) {
  manifest.validate();
  ExportSummary summary;

  const auto eligible = training_annotations(store, manifest);
  std::map<std::string, std::vector<Annotation>> by_column;
  for (const auto& a : eligible) by_column[a.column.str()].push_back(a);

  auto export_role = [&](const std::vector<std::string>& ids, const char* role, int& counter) {
    for (const auto& id : ids) {
      const auto info = require_column(store, id);
      if (info.image.empty() || !fs::exists(info.image)) {
        throw Error(ErrorCode::IoError, "column image missing for " + id);
      }
      fs::create_directories(root / "images" / role);
      fs::copy_file(info.image, root / "images" / role / (id + ".png"),
                    fs::copy_options::overwrite_existing);
      const auto& anns = by_column[id];
      write_text(root / "labels" / role / (id + ".txt"), write_labels(anns, info.width, info.height));
      summary.label_lines += static_cast<int>(anns.size());

      AnnotationFilter pending;
      pending.column = info.key;
      pending.status = Status::pending;
      summary.pending_skipped += static_cast<int>(store.query(pending).size());
      ++counter;
    }
  };
  export_role(manifest.train_columns, "train", summary.train_images);
  export_role(manifest.val_columns, "val", summary.val_images);

  std::string inference;
  for (const auto& id : manifest.inference_columns) {
    inference += id + " " + require_column(store, id).image + "\n";
  }
  write_text(root / "inference.txt", inference);
  write_text(root / "manifest.json", manifest.to_json().dump(2) + "\n");
  return summary;
}

}  // namespace scriptor::dataset
