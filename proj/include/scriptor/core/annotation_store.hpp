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

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "scriptor/core/types.hpp"

namespace scriptor {

struct AnnotationFilter {
  std::optional<ManuscriptId> manuscript;
  std::optional<ScribeId> scribe;
  std::optional<Status> status;
  std::optional<ClassId> cls;
  std::optional<int> cycle;
  std::optional<Origin> origin;
  std::optional<ColumnKey> column;
};

enum class DecisionAction { accept, reject, adjust };

std::string_view to_string(DecisionAction action) noexcept;
DecisionAction decision_action_from_string(std::string_view text);

struct Decision {
  DecisionAction action = DecisionAction::accept;
  std::optional<BBox> box;       // required for adjust
  std::optional<ClassId> cls;    // optional class correction

  static Decision accept(std::optional<ClassId> cls = std::nullopt) {
    return {DecisionAction::accept, std::nullopt, cls};
  }
  static Decision reject() { return {DecisionAction::reject, std::nullopt, std::nullopt}; }
  static Decision adjust(BBox box, std::optional<ClassId> cls = std::nullopt) {
    return {DecisionAction::adjust, box, cls};
  }
};

/// Opaque per-cycle state persisted alongside the annotations.
struct CycleRecord {
  int cycle = 0;
  nlohmann::ordered_json payload;
};

/// Append-only annotation log with an in-memory current-state index.
///
/// Every mutation appends exactly one line to the log (and to the backing
/// file when the store was opened on one). Replaying the log into a fresh
/// store reproduces the index exactly. Mutations are serialized; readers
/// may run concurrently with each other.
///
/// Log lines are JSON objects with a fixed key order, see docs/FORMATS.md.
class AnnotationStore {
 public:
  using Clock = std::function<std::string()>;

  AnnotationStore();
  explicit AnnotationStore(Clock clock);
  ~AnnotationStore();

  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  /// Opens (or creates) a log file, replaying any records already in it.
  static std::unique_ptr<AnnotationStore> open(const std::filesystem::path& log_path,
                                               Clock clock = {});

  /// Replays log lines produced by another store into this (empty) store.
  void replay(const std::vector<std::string>& lines);

  /// Registers a column. Re-registering an identical column is a no-op.
  void register_column(const ColumnInfo& column);

  AnnotationId put_annotation(const Annotation& annotation);

  /// Applies a review decision to a pending annotation. Repeating the
  /// decision that produced the current state returns it unchanged.
  Annotation decide(AnnotationId id, const Decision& decision);

  void put_cycle_record(const CycleRecord& record);

  Annotation get(AnnotationId id) const;
  std::optional<ColumnInfo> column(const ColumnKey& key) const;
  std::vector<ColumnInfo> columns(const std::optional<ManuscriptId>& manuscript = {}) const;

  /// Matches every supplied filter field; ordered by (manuscript, page,
  /// side, column, y, x, id) using each entry's effective box.
  std::vector<Annotation> query(const AnnotationFilter& filter = {}) const;

  /// Latest record per cycle, ascending by cycle.
  std::vector<CycleRecord> cycle_records() const;

  std::size_t size() const;
  std::size_t log_size() const;
  std::vector<std::string> log_lines() const;

  /// Canonical text of the current state (columns, annotations, cycles).
  std::string serialize_state() const;

 private:
  struct Entry {
    Annotation annotation;
    std::string timestamp;
  };

  void apply_line(const std::string& line);
  void append(const nlohmann::ordered_json& record);
  void check_duplicate(const Annotation& candidate) const;
  std::string now() const;

  Clock clock_;
  mutable std::shared_mutex mutex_;
  std::map<ColumnKey, std::pair<ColumnInfo, std::string>> columns_;
  std::map<AnnotationId, Entry> annotations_;
  std::map<ColumnKey, std::vector<AnnotationId>> by_column_;
  std::map<int, std::pair<CycleRecord, std::string>> cycles_;
  std::vector<std::string> log_;
  std::uint64_t next_id_ = 1;
  std::ofstream file_;
};

}  // namespace scriptor
