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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scriptor/core/annotation_store.hpp"

namespace scriptor::dataset {

/// Column roles for one annotation cycle. Train and val together form the
/// training set; val is a stable hashed subset of it.
struct DatasetManifest {
  int cycle = 0;
  std::vector<std::string> train_columns;
  std::vector<std::string> val_columns;
  std::vector<std::string> inference_columns;
  std::vector<std::string> class_names{"other", "target"};

  /// train + val, sorted.
  std::vector<std::string> training_columns() const;
  bool is_training(std::string_view column_id) const;
  bool is_inference(std::string_view column_id) const;

  /// Throws OverlapError unless the three lists are pairwise disjoint.
  void validate() const;

  nlohmann::ordered_json to_json() const;
  static DatasetManifest from_json(const nlohmann::json& j);
};

/// `count` pages starting `offset` pages into the page order of one side
/// (or of both sides, page-major, when `side` is unset). A missing count
/// means "all remaining".
struct PageRange {
  std::optional<Side> side;
  int offset = 0;
  std::optional<int> count;
};

struct CycleSpec {
  int cycle = 1;
  ManuscriptId manuscript;
  std::optional<ScribeId> scribe;  // restrict to pages written by this hand
  std::vector<PageRange> train;
  std::vector<PageRange> inference;
  double val_fraction = 0.1;

  nlohmann::json to_json() const;
  static CycleSpec from_json(const nlohmann::json& j);
};

/// Three cycles: train on the first 60 recto pages and infer on the next
/// 150; train on 210 recto pages and infer on the remaining recto and all
/// verso pages; train on every page of the scribe.
std::vector<CycleSpec> standard_schedule(const ManuscriptId& manuscript, const ScribeId& scribe);

/// FNV-1a, stable across platforms and runs.
std::uint64_t stable_hash(std::string_view text) noexcept;
bool in_validation_split(std::string_view column_id, double fraction) noexcept;

/// Resolves the spec's page ranges against the columns registered in
/// `store`. Throws OverlapError when a column lands in both roles.
DatasetManifest build_manifest(const AnnotationStore& store, const CycleSpec& spec);

}  // namespace scriptor::dataset
