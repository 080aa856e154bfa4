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
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scriptor/core/annotation_store.hpp"
#include "scriptor/preprocess/preprocess.hpp"

namespace scriptor::preprocess {

struct PageEntry {
  int page = 1;
  Side side = Side::recto;
  Layout layout = Layout::two_column;
  std::optional<ScribeId> scribe;
  std::filesystem::path image;
};

/// Per-manuscript preprocessing configuration. Schema in docs/FORMATS.md.
struct ManuscriptConfig {
  ManuscriptId manuscript;
  std::vector<ScribeId> scribes;
  RedRule red_rule;
  std::map<Layout, RoiConfig> layouts;
  std::set<std::pair<int, Side>> excluded;
  std::vector<PageEntry> pages;

  /// Image paths in the file are resolved against `base_dir`.
  static ManuscriptConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static ManuscriptConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  bool is_excluded(int page, Side side) const { return excluded.count({page, side}) > 0; }
  const RoiConfig& roi(Layout layout) const;
};

/// Column PNG file name: {manuscript}_{page}{r|v}_c{index}.png
std::string column_file_name(const ColumnKey& key);

/// Reads a registered column's binarized raster back from its PNG.
ColumnImage load_column(const ColumnInfo& info);

struct PreprocessSummary {
  int pages = 0;
  int skipped = 0;
  int columns = 0;
};

/// Runs preprocess_page over every non-excluded page, writes binary column
/// PNGs into `out_dir` and registers the columns in `store`. Pages are
/// processed on `threads` workers (0 = hardware concurrency).
PreprocessSummary preprocess_manuscript(const ManuscriptConfig& cfg, AnnotationStore& store,
                                        const std::filesystem::path& out_dir, unsigned threads = 0);

}  // namespace scriptor::preprocess
