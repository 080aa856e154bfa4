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
#include <mutex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scriptor/core/annotation_store.hpp"
#include "scriptor/dataset/manifest.hpp"

namespace scriptor::loop {

enum class Phase { bootstrapped, exported, awaiting_detections, in_review, merged };

std::string_view to_string(Phase phase) noexcept;
Phase phase_from_string(std::string_view text);

struct CycleState {
  int cycle = 0;
  Phase phase = Phase::bootstrapped;
  dataset::DatasetManifest manifest;
  int pending_count = 0;
  std::optional<ScribeId> target_scribe;

  nlohmann::ordered_json to_json() const;
  static CycleState from_json(const nlohmann::json& j);

  bool operator==(const CycleState& other) const;
};

/// Drives export, detection intake, review and merge for one manuscript's
/// store. Cycle state lives in the store's log as cycle records, so a
/// store reopened from its file resumes exactly where it stopped.
///
/// Operations are serialized; the store itself may be read concurrently.
class Orchestrator {
 public:
  /// Datasets are exported to `workspace`/datasets/cycle_<k>.
  Orchestrator(AnnotationStore& store, std::filesystem::path workspace);

  AnnotationStore& store() noexcept { return store_; }
  const std::filesystem::path& workspace() const noexcept { return workspace_; }
  std::filesystem::path dataset_dir(int cycle) const;

  /// Latest persisted state; a store without cycle records is treated as
  /// a bootstrapped cycle 0.
  CycleState current() const;
  std::vector<CycleState> history() const;

  /// Records cycle 0 after the template-matching bootstrap.
  CycleState mark_bootstrapped();

  /// Builds and exports the manifest of `spec.cycle`, which must follow
  /// the latest cycle. Throws PreviousCycleOpen while that one is unmerged.
  CycleState start_cycle(const dataset::CycleSpec& spec);

  /// exported -> awaiting_detections (the operator is running the detector).
  CycleState mark_awaiting();

  /// Ingests detections on inference columns as pending annotations of the
  /// current cycle and moves it to in_review.
  CycleState submit_detections(std::span<const DetectionRecord> records);
  CycleState submit_detections(const std::filesystem::path& detection_file);

  /// Applies a review decision. Accepted detections default to class 1
  /// during cycles with a target scribe.
  Annotation decide(AnnotationId id, Decision decision);

  /// Pending annotations produced in the current cycle (matches for
  /// cycle 0, detections afterwards).
  int pending_count() const;

  /// in_review with nothing pending -> merged. Calling it again on a
  /// merged cycle changes nothing.
  CycleState merge_cycle();

 private:
  CycleState current_locked() const;
  int pending_locked(int cycle) const;
  void persist(const CycleState& state);

  AnnotationStore& store_;
  std::filesystem::path workspace_;
  mutable std::mutex mu_;
};

}  // namespace scriptor::loop
