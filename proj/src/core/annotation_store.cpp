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

#include "scriptor/core/annotation_store.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <mutex>
#include <sstream>

#include "scriptor/core/error.hpp"

namespace scriptor {

using nlohmann::ordered_json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void put_column_key(ordered_json& j, const ColumnKey& key) {
  j["manuscript"] = key.manuscript.str();
  j["page"] = key.page;
  j["side"] = std::string(to_string(key.side));
  j["column"] = key.column;
}

ColumnKey column_key_from(const ordered_json& j) {
  ColumnKey key;
  key.manuscript = ManuscriptId(j.at("manuscript").get<std::string>());
  key.page = j.at("page").get<int>();
  key.side = side_from_string(j.at("side").get<std::string>());
  key.column = j.at("column").get<int>();
  return key;
}

// Field order: record_type, id, manuscript, page, side, column, x, y, w, h,
// class, origin, status, cycle, confidence?, model_id?, timestamp.
ordered_json annotation_record(std::string_view type, const Annotation& a, const BBox& box,
                               const std::string& timestamp) {
  ordered_json j;
  j["record_type"] = std::string(type);
  j["id"] = a.id.value;
  put_column_key(j, a.column);
  j["x"] = box.x;
  j["y"] = box.y;
  j["w"] = box.w;
  j["h"] = box.h;
  j["class"] = to_int(a.cls);
  j["origin"] = std::string(to_string(a.origin));
  j["status"] = std::string(to_string(a.status));
  j["cycle"] = a.cycle;
  if (a.confidence) j["confidence"] = *a.confidence;
  if (a.model_id) j["model_id"] = *a.model_id;
  j["timestamp"] = timestamp;
  return j;
}

ordered_json column_record(const ColumnInfo& c, const std::string& timestamp) {
  ordered_json j;
  j["record_type"] = "column";
  j["id"] = c.key.str();
  put_column_key(j, c.key);
  j["width"] = c.width;
  j["height"] = c.height;
  j["layout"] = std::string(to_string(c.layout));
  j["scribe"] = c.scribe ? ordered_json(c.scribe->str()) : ordered_json(nullptr);
  j["image"] = c.image;
  j["timestamp"] = timestamp;
  return j;
}

ordered_json cycle_record(const CycleRecord& r, const std::string& timestamp) {
  ordered_json j;
  j["record_type"] = "cycle";
  j["id"] = r.cycle;
  j["state"] = r.payload;
  j["timestamp"] = timestamp;
  return j;
}

BBox box_from(const ordered_json& j) {
  return {j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(), j.at("h").get<int>()};
}

bool decision_matches(const Annotation& a, const Decision& d) {
  if (d.cls && *d.cls != a.cls) return false;
  switch (d.action) {
    case DecisionAction::accept: return a.status == Status::accepted;
    case DecisionAction::reject: return a.status == Status::rejected;
    case DecisionAction::adjust:
      return a.status == Status::adjusted && d.box && a.adjusted_box == d.box;
  }
  return false;
}

}  // namespace

std::string_view to_string(DecisionAction action) noexcept {
  switch (action) {
    case DecisionAction::accept: return "accept";
    case DecisionAction::reject: return "reject";
    case DecisionAction::adjust: return "adjust";
  }
  return "accept";
}

DecisionAction decision_action_from_string(std::string_view text) {
  if (text == "accept") return DecisionAction::accept;
  if (text == "reject") return DecisionAction::reject;
  if (text == "adjust") return DecisionAction::adjust;
  throw Error(ErrorCode::InvalidArgument, "bad decision action '" + std::string(text) + "'");
}

AnnotationStore::AnnotationStore() : AnnotationStore(Clock{}) {}

AnnotationStore::AnnotationStore(Clock clock) : clock_(std::move(clock)) {}

AnnotationStore::~AnnotationStore() = default;

std::unique_ptr<AnnotationStore> AnnotationStore::open(const std::filesystem::path& log_path,
                                                       Clock clock) {
  auto store = std::make_unique<AnnotationStore>(std::move(clock));
  if (std::filesystem::exists(log_path)) {
    std::ifstream in(log_path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + log_path.string());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) lines.push_back(std::move(line));
    }
    store->replay(lines);
  } else if (log_path.has_parent_path()) {
    std::filesystem::create_directories(log_path.parent_path());
  }
  store->file_.open(log_path, std::ios::app);
  if (!store->file_) throw Error(ErrorCode::IoError, "cannot append to " + log_path.string());
  return store;
}

std::string AnnotationStore::now() const { return clock_ ? clock_() : utc_now(); }

void AnnotationStore::replay(const std::vector<std::string>& lines) {
  std::unique_lock lock(mutex_);
  for (const auto& line : lines) {
    apply_line(line);
    log_.push_back(line);
  }
}

void AnnotationStore::append(const ordered_json& record) {
  auto line = record.dump();
  apply_line(line);
  if (file_.is_open()) {
    file_ << line << '\n';
    file_.flush();
  }
  log_.push_back(std::move(line));
}

void AnnotationStore::apply_line(const std::string& line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("unparseable log line: ") + e.what());
  }
  try {
    const auto type = j.at("record_type").get<std::string>();
    const auto timestamp = j.at("timestamp").get<std::string>();
    if (type == "column") {
      ColumnInfo c;
      c.key = column_key_from(j);
      c.width = j.at("width").get<int>();
      c.height = j.at("height").get<int>();
      c.layout = layout_from_string(j.at("layout").get<std::string>());
      if (!j.at("scribe").is_null()) c.scribe = ScribeId(j.at("scribe").get<std::string>());
      c.image = j.at("image").get<std::string>();
      columns_[c.key] = {c, timestamp};
    } else if (type == "annotation") {
      Annotation a;
      a.id = AnnotationId{j.at("id").get<std::uint64_t>()};
      a.column = column_key_from(j);
      a.box = box_from(j);
      a.cls = class_from_int(j.at("class").get<int>());
      a.origin = origin_from_string(j.at("origin").get<std::string>());
      a.status = status_from_string(j.at("status").get<std::string>());
      a.cycle = j.at("cycle").get<int>();
      if (j.contains("confidence")) a.confidence = j["confidence"].get<double>();
      if (j.contains("model_id")) a.model_id = j["model_id"].get<std::string>();
      if (!annotations_.count(a.id)) by_column_[a.column].push_back(a.id);
      annotations_[a.id] = {a, timestamp};
      next_id_ = std::max(next_id_, a.id.value + 1);
    } else if (type == "decision") {
      const AnnotationId id{j.at("id").get<std::uint64_t>()};
      auto it = annotations_.find(id);
      if (it == annotations_.end()) {
        throw Error(ErrorCode::UnknownId, "decision for unknown annotation " + std::to_string(id.value));
      }
      auto& a = it->second.annotation;
      a.status = status_from_string(j.at("status").get<std::string>());
      a.cls = class_from_int(j.at("class").get<int>());
      if (a.status == Status::adjusted) a.adjusted_box = box_from(j);
      it->second.timestamp = timestamp;
    } else if (type == "cycle") {
      CycleRecord r;
      r.cycle = j.at("id").get<int>();
      r.payload = j.at("state");
      cycles_[r.cycle] = {r, timestamp};
    } else {
      throw Error(ErrorCode::MalformedRecord, "unknown record_type '" + type + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("bad log record: ") + e.what());
  }
}

void AnnotationStore::register_column(const ColumnInfo& column) {
  if (column.width <= 0 || column.height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "column " + column.key.str() + " has no area");
  }
  if (column.key.column >= column_count(column.layout)) {
    throw Error(ErrorCode::InvalidArgument,
                "column index out of range for layout: " + column.key.str());
  }
  std::unique_lock lock(mutex_);
  if (auto it = columns_.find(column.key); it != columns_.end()) {
    if (it->second.first == column) return;
    throw Error(ErrorCode::InvalidArgument,
                "column " + column.key.str() + " already registered with different metadata");
  }
  append(column_record(column, now()));
}

void AnnotationStore::check_duplicate(const Annotation& candidate) const {
  auto ids = by_column_.find(candidate.column);
  if (ids == by_column_.end()) return;
  for (const auto id : ids->second) {
    const auto& a = annotations_.at(id).annotation;
    if (id == candidate.id || !is_positive(a.status)) continue;
    if (a.cls == candidate.cls &&
        a.effective_box() == candidate.effective_box()) {
      throw Error(ErrorCode::DuplicateAccepted,
                  "annotation " + std::to_string(id.value) + " already holds this box on " +
                      a.column.str());
    }
  }
}

AnnotationId AnnotationStore::put_annotation(const Annotation& annotation) {
  std::unique_lock lock(mutex_);
  auto col = columns_.find(annotation.column);
  if (col == columns_.end()) {
    throw Error(ErrorCode::UnknownColumn, "column " + annotation.column.str() + " is not registered");
  }
  const auto& info = col->second.first;
  if (!annotation.box.fits(info.width, info.height)) {
    throw Error(ErrorCode::BoxOutOfBounds, "box outside " + annotation.column.str());
  }
  if (annotation.adjusted_box) {
    throw Error(ErrorCode::InvalidArgument, "new annotations cannot carry a replacement box");
  }
  if (annotation.status != Status::pending && annotation.origin != Origin::manual) {
    throw Error(ErrorCode::InvalidArgument, "only manual annotations may be stored decided");
  }
  if (annotation.status == Status::adjusted) {
    throw Error(ErrorCode::InvalidArgument, "adjusted status requires a review decision");
  }
  if (annotation.confidence && !(*annotation.confidence >= 0.0 && *annotation.confidence <= 1.0)) {
    throw Error(ErrorCode::ConfidenceOutOfRange, "confidence outside [0,1]");
  }

  Annotation a = annotation;
  a.id = AnnotationId{next_id_};
  if (is_positive(a.status)) check_duplicate(a);
  append(annotation_record("annotation", a, a.box, now()));
  return a.id;
}

Annotation AnnotationStore::decide(AnnotationId id, const Decision& decision) {
  std::unique_lock lock(mutex_);
  auto it = annotations_.find(id);
  if (it == annotations_.end()) {
    throw Error(ErrorCode::UnknownId, "no annotation " + std::to_string(id.value));
  }
  const Annotation& current = it->second.annotation;
  if (is_decided(current.status)) {
    if (decision_matches(current, decision)) return current;
    throw Error(ErrorCode::AlreadyDecided, "annotation " + std::to_string(id.value) + " is " +
                                               std::string(to_string(current.status)));
  }

  Annotation next = current;
  if (decision.cls) next.cls = *decision.cls;
  switch (decision.action) {
    case DecisionAction::accept: next.status = Status::accepted; break;
    case DecisionAction::reject: next.status = Status::rejected; break;
    case DecisionAction::adjust: {
      if (!decision.box) throw Error(ErrorCode::InvalidArgument, "adjust requires a box");
      const auto& info = columns_.at(current.column).first;
      if (!decision.box->fits(info.width, info.height)) {
        throw Error(ErrorCode::BoxOutOfBounds, "adjusted box outside " + current.column.str());
      }
      next.status = Status::adjusted;
      next.adjusted_box = *decision.box;
      break;
    }
  }
  if (is_positive(next.status)) check_duplicate(next);
  append(annotation_record("decision", next, next.effective_box(), now()));
  return annotations_.at(id).annotation;
}

void AnnotationStore::put_cycle_record(const CycleRecord& record) {
  std::unique_lock lock(mutex_);
  append(cycle_record(record, now()));
}

Annotation AnnotationStore::get(AnnotationId id) const {
  std::shared_lock lock(mutex_);
  auto it = annotations_.find(id);
  if (it == annotations_.end()) {
    throw Error(ErrorCode::UnknownId, "no annotation " + std::to_string(id.value));
  }
  return it->second.annotation;
}

std::optional<ColumnInfo> AnnotationStore::column(const ColumnKey& key) const {
  std::shared_lock lock(mutex_);
  auto it = columns_.find(key);
  if (it == columns_.end()) return std::nullopt;
  return it->second.first;
}

std::vector<ColumnInfo> AnnotationStore::columns(const std::optional<ManuscriptId>& manuscript) const {
  std::shared_lock lock(mutex_);
  std::vector<ColumnInfo> out;
  for (const auto& [key, entry] : columns_) {
    if (!manuscript || key.manuscript == *manuscript) out.push_back(entry.first);
  }
  return out;
}

std::vector<Annotation> AnnotationStore::query(const AnnotationFilter& f) const {
  std::shared_lock lock(mutex_);
  std::vector<Annotation> out;
  for (const auto& [id, entry] : annotations_) {
    const auto& a = entry.annotation;
    if (f.manuscript && a.column.manuscript != *f.manuscript) continue;
    if (f.status && a.status != *f.status) continue;
    if (f.cls && a.cls != *f.cls) continue;
    if (f.cycle && a.cycle != *f.cycle) continue;
    if (f.origin && a.origin != *f.origin) continue;
    if (f.column && a.column != *f.column) continue;
    if (f.scribe) {
      auto col = columns_.find(a.column);
      if (col == columns_.end() || col->second.first.scribe != f.scribe) continue;
    }
    out.push_back(a);
  }
  std::stable_sort(out.begin(), out.end(), [](const Annotation& l, const Annotation& r) {
    const auto& lb = l.effective_box();
    const auto& rb = r.effective_box();
    return std::tie(l.column, lb.y, lb.x, l.id) < std::tie(r.column, rb.y, rb.x, r.id);
  });
  return out;
}

std::vector<CycleRecord> AnnotationStore::cycle_records() const {
  std::shared_lock lock(mutex_);
  std::vector<CycleRecord> out;
  for (const auto& [cycle, entry] : cycles_) out.push_back(entry.first);
  return out;
}

std::size_t AnnotationStore::size() const {
  std::shared_lock lock(mutex_);
  return annotations_.size();
}

std::size_t AnnotationStore::log_size() const {
  std::shared_lock lock(mutex_);
  return log_.size();
}

std::vector<std::string> AnnotationStore::log_lines() const {
  std::shared_lock lock(mutex_);
  return log_;
}

std::string AnnotationStore::serialize_state() const {
  std::shared_lock lock(mutex_);
  std::ostringstream out;
  for (const auto& [key, entry] : columns_) {
    out << column_record(entry.first, entry.second).dump() << '\n';
  }
  for (const auto& [id, entry] : annotations_) {
    auto j = annotation_record("annotation", entry.annotation, entry.annotation.box, entry.timestamp);
    if (entry.annotation.adjusted_box) {
      const auto& b = *entry.annotation.adjusted_box;
      j["adjusted"] = ordered_json{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}};
    }
    out << j.dump() << '\n';
  }
  for (const auto& [cycle, entry] : cycles_) {
    out << cycle_record(entry.first, entry.second).dump() << '\n';
  }
  return out.str();
}

}  // namespace scriptor
