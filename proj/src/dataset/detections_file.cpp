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

#include "scriptor/dataset/detections_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scriptor/core/error.hpp"

namespace scriptor::dataset {

namespace {

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::MalformedRecord, "detection line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

std::string format_detection(const DetectionRecord& r) {
  if (!(r.confidence >= 0.0 && r.confidence <= 1.0)) {
    throw Error(ErrorCode::ConfidenceOutOfRange, "confidence outside [0,1]");
  }
  char conf[16];
  std::snprintf(conf, sizeof conf, "%.4f", r.confidence);
  std::string out = "{\"column\":" + nlohmann::json(r.column.str()).dump();
  out += ",\"x\":" + std::to_string(r.box.x);
  out += ",\"y\":" + std::to_string(r.box.y);
  out += ",\"w\":" + std::to_string(r.box.w);
  out += ",\"h\":" + std::to_string(r.box.h);
  out += ",\"class\":" + std::to_string(to_int(r.cls));
  out += ",\"confidence\":";
  out += conf;
  out += ",\"model_id\":" + nlohmann::json(r.model_id).dump() + "}";
  return out;
}

std::string write_detections(std::span<const DetectionRecord> records) {
  std::string out;
  for (const auto& r : records) out += format_detection(r) + "\n";
  return out;
}

std::vector<DetectionRecord> read_detections(std::string_view text) {
  std::vector<DetectionRecord> out;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      malformed(line_no, "not a JSON object");
    }
    if (!j.is_object()) malformed(line_no, "not a JSON object");

    DetectionRecord r;
    try {
      r.column = ColumnKey::parse(j.at("column").get<std::string>());
      r.box = {j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(), j.at("h").get<int>()};
      const auto cls = j.at("class").get<long long>();
      if (cls != 0 && cls != 1) malformed(line_no, "class " + std::to_string(cls) + " is not 0 or 1");
      r.cls = static_cast<ClassId>(cls);
      r.confidence = j.at("confidence").get<double>();
      r.model_id = j.at("model_id").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      malformed(line_no, e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MalformedRecord) throw;
      malformed(line_no, e.what());
    }
    if (!r.box.positive()) malformed(line_no, "box must have positive size and non-negative origin");
    if (!(r.confidence >= 0.0 && r.confidence <= 1.0)) {
      throw Error(ErrorCode::ConfidenceOutOfRange,
                  "detection line " + std::to_string(line_no) + ": confidence outside [0,1]");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<DetectionRecord> load_detections(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_detections(buf.str());
}

void save_detections(const std::filesystem::path& path, std::span<const DetectionRecord> records) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << write_detections(records);
}

}  // namespace scriptor::dataset
