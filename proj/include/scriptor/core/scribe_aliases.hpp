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

#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scriptor/core/types.hpp"

namespace scriptor {

/// A scribe named within one manuscript, written "manuscript:letter".
struct ScribeRef {
  ManuscriptId manuscript;
  ScribeId scribe;

  static ScribeRef parse(std::string_view text);
  auto operator<=>(const ScribeRef&) const = default;
};

/// Cross-manuscript identity of scribal hands. The same person can carry a
/// different letter in each manuscript, so the mapping is configuration.
///
/// JSON form: {"aliases": [["trento:B", "avila:F"], ...]}
class ScribeAliasTable {
 public:
  void add_group(std::vector<ScribeRef> group);

  /// The letter `ref` carries in `manuscript`, if known. A ref that already
  /// names `manuscript` resolves to itself.
  std::optional<ScribeId> resolve(const ScribeRef& ref, const ManuscriptId& manuscript) const;

  static ScribeAliasTable from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  std::vector<std::vector<ScribeRef>> groups_;
};

}  // namespace scriptor
