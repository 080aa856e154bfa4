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

#include "scriptor/core/scribe_aliases.hpp"

#include <algorithm>
#include <string>

#include "scriptor/core/error.hpp"

namespace scriptor {

ScribeRef ScribeRef::parse(std::string_view text) {
  const auto sep = text.find(':');
  if (sep == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument, "scribe ref must be manuscript:letter, got '" +
                                                std::string(text) + "'");
  }
  return {ManuscriptId(std::string(text.substr(0, sep))), ScribeId(std::string(text.substr(sep + 1)))};
}

void ScribeAliasTable::add_group(std::vector<ScribeRef> group) {
  for (const auto& ref : group) {
    for (const auto& existing : groups_) {
      if (std::find(existing.begin(), existing.end(), ref) != existing.end()) {
        throw Error(ErrorCode::InvalidConfig, ref.manuscript.str() + ":" + ref.scribe.str() +
                                                  " appears in two alias groups");
      }
    }
  }
  groups_.push_back(std::move(group));
}

std::optional<ScribeId> ScribeAliasTable::resolve(const ScribeRef& ref,
                                                  const ManuscriptId& manuscript) const {
  if (ref.manuscript == manuscript) return ref.scribe;
  for (const auto& group : groups_) {
    if (std::find(group.begin(), group.end(), ref) == group.end()) continue;
    for (const auto& other : group) {
      if (other.manuscript == manuscript) return other.scribe;
    }
  }
  return std::nullopt;
}

ScribeAliasTable ScribeAliasTable::from_json(const nlohmann::json& j) {
  ScribeAliasTable table;
  try {
    for (const auto& group : j.at("aliases")) {
      std::vector<ScribeRef> refs;
      for (const auto& item : group) refs.push_back(ScribeRef::parse(item.get<std::string>()));
      table.add_group(std::move(refs));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("bad alias table: ") + e.what());
  }
  return table;
}

nlohmann::json ScribeAliasTable::to_json() const {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& group : groups_) {
    nlohmann::json g = nlohmann::json::array();
    for (const auto& ref : group) g.push_back(ref.manuscript.str() + ":" + ref.scribe.str());
    groups.push_back(std::move(g));
  }
  return {{"aliases", groups}};
}

}  // namespace scriptor
