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

#include "scriptor/loop/orchestrator.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "scriptor/core/error.hpp"
#include "scriptor/dataset/detections_file.hpp"
#include "scriptor/dataset/export.hpp"
#include "scriptor/detect/gateway.hpp"

namespace scriptor::loop {

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::bootstrapped: return "bootstrapped";
    case Phase::exported: return "exported";
    case Phase::awaiting_detections: return "awaiting_detections";
    case Phase::in_review: return "in_review";
    case Phase::merged: return "merged";
  }
  return "?";
}

Phase phase_from_string(std::string_view text) {
  for (auto p : {Phase::bootstrapped, Phase::exported, Phase::awaiting_detections, Phase::in_review,
                 Phase::merged})
    if (to_string(p) == text) return p;
  throw Error(ErrorCode::InvalidArgument, "unknown phase '" + std::string(text) + "'");
}

nlohmann::ordered_json CycleState::to_json() const {
  nlohmann::ordered_json j;
  j["cycle"] = cycle;
  j["phase"] = std::string(to_string(phase));
  j["manifest"] = manifest.to_json();
  j["pending_count"] = pending_count;
  j["target_scribe"] = target_scribe ? nlohmann::ordered_json(target_scribe->str()) : nullptr;
  return j;
}

CycleState CycleState::from_json(const nlohmann::json& j) {
  try {
    CycleState s;
    s.cycle = j.at("cycle").get<int>();
    s.phase = phase_from_string(j.at("phase").get<std::string>());
    s.manifest = dataset::DatasetManifest::from_json(j.at("manifest"));
    s.pending_count = j.at("pending_count").get<int>();
    if (j.contains("target_scribe") && !j["target_scribe"].is_null())
      s.target_scribe = ScribeId(j["target_scribe"].get<std::string>());
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("cycle state: ") + e.what());
  }
}

bool CycleState::operator==(const CycleState& o) const {
  return to_json() == o.to_json();
}

Orchestrator::Orchestrator(AnnotationStore& store, std::filesystem::path workspace)
    : store_(store), workspace_(std::move(workspace)) {}

std::filesystem::path Orchestrator::dataset_dir(int cycle) const {
  return workspace_ / "datasets" / ("cycle_" + std::to_string(cycle));
}

CycleState Orchestrator::current() const {
  std::lock_guard lock(mu_);
  return current_locked();
}

CycleState Orchestrator::current_locked() const {
  auto records = store_.cycle_records();
  if (records.empty()) return CycleState{};
  return CycleState::from_json(records.back().payload);
}

std::vector<CycleState> Orchestrator::history() const {
  std::vector<CycleState> out;
  for (const auto& r : store_.cycle_records()) out.push_back(CycleState::from_json(r.payload));
  return out;
}

void Orchestrator::persist(const CycleState& state) {
  store_.put_cycle_record(CycleRecord{state.cycle, state.to_json()});
}

CycleState Orchestrator::mark_bootstrapped() {
  std::lock_guard lock(mu_);
  auto cur = current_locked();
  if (cur.cycle != 0) throw Error(ErrorCode::InvalidPhase, "bootstrap happens before cycle 1");
  CycleState s;
  persist(s);
  return s;
}

CycleState Orchestrator::start_cycle(const dataset::CycleSpec& spec) {
  std::lock_guard lock(mu_);
  auto prev = current_locked();
  if (prev.cycle != 0 && prev.phase != Phase::merged)
    throw Error(ErrorCode::PreviousCycleOpen,
                "cycle " + std::to_string(prev.cycle) + " is " + std::string(to_string(prev.phase)));
  if (spec.cycle != prev.cycle + 1)
    throw Error(ErrorCode::InvalidPhase, "next cycle is " + std::to_string(prev.cycle + 1) +
                                             ", not " + std::to_string(spec.cycle));

  CycleState s;
  s.cycle = spec.cycle;
  s.phase = Phase::exported;
  s.target_scribe = spec.scribe;
  s.manifest = dataset::build_manifest(store_, spec);

  // The training set only ever grows.
  auto now = s.manifest.training_columns();
  std::set<std::string> now_set(now.begin(), now.end());
  for (const auto& c : prev.manifest.training_columns())
    if (!now_set.count(c))
      throw Error(ErrorCode::InvalidConfig,
                  "cycle " + std::to_string(spec.cycle) + " drops training column " + c);

  dataset::export_dataset(store_, s.manifest, dataset_dir(spec.cycle));
  persist(s);
  return s;
}

CycleState Orchestrator::mark_awaiting() {
  std::lock_guard lock(mu_);
  auto s = current_locked();
  if (s.phase == Phase::awaiting_detections) return s;
  if (s.phase != Phase::exported)
    throw Error(ErrorCode::InvalidPhase, "cycle " + std::to_string(s.cycle) + " is " +
                                             std::string(to_string(s.phase)));
  s.phase = Phase::awaiting_detections;
  persist(s);
  return s;
}

CycleState Orchestrator::submit_detections(std::span<const DetectionRecord> records) {
  std::lock_guard lock(mu_);
  auto s = current_locked();
  if (s.phase != Phase::exported && s.phase != Phase::awaiting_detections)
    throw Error(ErrorCode::InvalidPhase, "cycle " + std::to_string(s.cycle) + " is " +
                                             std::string(to_string(s.phase)));
  for (const auto& r : records) {
    auto id = r.column.str();
    if (!s.manifest.is_inference(id))
      throw Error(ErrorCode::ColumnNotInInferenceSet, id + " is not an inference column of cycle " +
                                                          std::to_string(s.cycle));
  }
  detect::ingest_records(store_, records, s.cycle);
  s.phase = Phase::in_review;
  s.pending_count = pending_locked(s.cycle);
  persist(s);
  return s;
}

CycleState Orchestrator::submit_detections(const std::filesystem::path& detection_file) {
  auto records = dataset::load_detections(detection_file);
  return submit_detections(std::span<const DetectionRecord>(records));
}

Annotation Orchestrator::decide(AnnotationId id, Decision decision) {
  std::lock_guard lock(mu_);
  if (decision.action != DecisionAction::reject && !decision.cls) {
    auto a = store_.get(id);
    auto s = current_locked();
    if (a.origin == Origin::detector && a.status == Status::pending && s.target_scribe &&
        a.cycle == s.cycle)
      decision.cls = ClassId::target;
  }
  return store_.decide(id, decision);
}

int Orchestrator::pending_locked(int cycle) const {
  AnnotationFilter f;
  f.status = Status::pending;
  f.cycle = cycle;
  return static_cast<int>(store_.query(f).size());
}

int Orchestrator::pending_count() const {
  std::lock_guard lock(mu_);
  return pending_locked(current_locked().cycle);
}

CycleState Orchestrator::merge_cycle() {
  std::lock_guard lock(mu_);
  auto s = current_locked();
  if (s.phase == Phase::merged) return s;
  if (s.phase != Phase::in_review)
    throw Error(ErrorCode::InvalidPhase, "cycle " + std::to_string(s.cycle) + " is " +
                                             std::string(to_string(s.phase)));
  int pending = pending_locked(s.cycle);
  if (pending > 0)
    throw Error(ErrorCode::PendingReviewsRemain,
                std::to_string(pending) + " detections of cycle " + std::to_string(s.cycle) +
                    " await review");
  // Reviewed detections carry cycle k and become training material for
  // every manifest of cycle k+1 onwards; merging only seals the cycle.
  s.phase = Phase::merged;
  s.pending_count = 0;
  persist(s);
  return s;
}

}  // namespace scriptor::loop
