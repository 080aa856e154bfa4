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

#include "scriptor/preprocess/manuscript_config.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>

#include "scriptor/core/error.hpp"
#include "scriptor/core/parallel.hpp"
#include "scriptor/preprocess/image_io.hpp"

namespace scriptor::preprocess {

namespace {

BBox box_from_array(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::InvalidConfig, "roi must be [x, y, w, h]");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

std::pair<int, Side> parse_page_label(const std::string& label) {
  if (label.size() < 2) throw Error(ErrorCode::InvalidConfig, "bad page label '" + label + "'");
  const Side side = side_from_string(std::string(1, label.back()));
  return {std::stoi(label.substr(0, label.size() - 1)), side};
}

}  // namespace

ManuscriptConfig ManuscriptConfig::from_json(const nlohmann::json& j,
                                             const std::filesystem::path& base_dir) {
  ManuscriptConfig cfg;
  try {
    cfg.manuscript = ManuscriptId(j.at("manuscript").get<std::string>());
    for (const auto& s : j.at("scribes")) cfg.scribes.emplace_back(s.get<std::string>());
    if (j.contains("red_rule")) {
      cfg.red_rule.red_min = j["red_rule"].value("red_min", cfg.red_rule.red_min);
      cfg.red_rule.dominance_margin =
          j["red_rule"].value("dominance_margin", cfg.red_rule.dominance_margin);
    }
    cfg.red_rule.validate();
    for (const auto& [name, rois] : j.at("layouts").items()) {
      RoiConfig roi{cfg.manuscript, layout_from_string(name), {}};
      for (const auto& r : rois) roi.rois.push_back(box_from_array(r));
      roi.validate();
      cfg.layouts[roi.layout] = std::move(roi);
    }
    for (const auto& e : j.value("exclude", nlohmann::json::array())) {
      cfg.excluded.insert(parse_page_label(e.get<std::string>()));
    }
    for (const auto& p : j.value("pages", nlohmann::json::array())) {
      PageEntry entry;
      entry.page = p.at("page").get<int>();
      entry.side = side_from_string(p.at("side").get<std::string>());
      entry.layout = layout_from_string(p.value("layout", std::string("two_column")));
      if (p.contains("scribe") && !p["scribe"].is_null()) {
        entry.scribe = ScribeId(p["scribe"].get<std::string>());
        if (std::find(cfg.scribes.begin(), cfg.scribes.end(), *entry.scribe) == cfg.scribes.end()) {
          throw Error(ErrorCode::InvalidConfig, "scribe " + entry.scribe->str() +
                                                    " is not in the manuscript's scribe set");
        }
      }
      entry.image = base_dir / p.at("image").get<std::string>();
      if (entry.page < 1) throw Error(ErrorCode::InvalidConfig, "page numbers start at 1");
      if (!cfg.layouts.count(entry.layout)) {
        throw Error(ErrorCode::InvalidConfig, "no rois configured for " +
                                                  std::string(to_string(entry.layout)));
      }
      cfg.pages.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("manuscript config: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::InvalidConfig, "manuscript config: bad page label");
  }
  return cfg;
}

ManuscriptConfig ManuscriptConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

nlohmann::json ManuscriptConfig::to_json() const {
  nlohmann::json j;
  j["manuscript"] = manuscript.str();
  j["scribes"] = nlohmann::json::array();
  for (const auto& s : scribes) j["scribes"].push_back(s.str());
  j["red_rule"] = {{"red_min", red_rule.red_min}, {"dominance_margin", red_rule.dominance_margin}};
  j["layouts"] = nlohmann::json::object();
  for (const auto& [layout, roi] : layouts) {
    auto& arr = j["layouts"][std::string(to_string(layout))] = nlohmann::json::array();
    for (const auto& b : roi.rois) arr.push_back({b.x, b.y, b.w, b.h});
  }
  j["exclude"] = nlohmann::json::array();
  for (const auto& [page, side] : excluded) {
    j["exclude"].push_back(std::to_string(page) + side_letter(side));
  }
  j["pages"] = nlohmann::json::array();
  for (const auto& p : pages) {
    nlohmann::json e{{"page", p.page},
                     {"side", std::string(to_string(p.side))},
                     {"layout", std::string(to_string(p.layout))},
                     {"image", p.image.generic_string()}};
    e["scribe"] = p.scribe ? nlohmann::json(p.scribe->str()) : nlohmann::json(nullptr);
    j["pages"].push_back(std::move(e));
  }
  return j;
}

const RoiConfig& ManuscriptConfig::roi(Layout layout) const {
  auto it = layouts.find(layout);
  if (it == layouts.end()) {
    throw Error(ErrorCode::InvalidConfig, "no rois configured for " + std::string(to_string(layout)));
  }
  return it->second;
}

std::string column_file_name(const ColumnKey& key) { return key.str() + ".png"; }

ColumnImage load_column(const ColumnInfo& info) {
  if (info.image.empty()) throw Error(ErrorCode::IoError, "column " + info.key.str() + " has no image");
  ColumnImage col;
  col.page.manuscript = info.key.manuscript;
  col.page.page_number = info.key.page;
  col.page.side = info.key.side;
  col.page.scribe = info.scribe;
  col.column_index = info.key.column;
  col.layout = info.layout;
  col.stage = Stage::binary;
  col.pixels = io::read_gray(info.image);
  if (col.width() != info.width || col.height() != info.height)
    throw Error(ErrorCode::LayoutMismatch, "image size of " + info.key.str() + " differs from its record");
  return col;
}

PreprocessSummary preprocess_manuscript(const ManuscriptConfig& cfg, AnnotationStore& store,
                                        const std::filesystem::path& out_dir, unsigned threads) {
  std::vector<const PageEntry*> todo;
  PreprocessSummary summary;
  for (const auto& page : cfg.pages) {
    if (cfg.is_excluded(page.page, page.side)) {
      ++summary.skipped;
    } else {
      todo.push_back(&page);
    }
  }

  std::vector<std::vector<ColumnInfo>> produced(todo.size());
  parallel_for(todo.size(), threads, [&](std::size_t i) {
    const auto& entry = *todo[i];
    const RgbImage raster = io::read_rgb(entry.image);
    PageRef ref{cfg.manuscript, entry.page, entry.side, entry.scribe, raster.width(), raster.height()};
    auto columns = preprocess_page(raster, ref, entry.layout, cfg.roi(entry.layout), cfg.red_rule);
    for (const auto& col : columns) {
      const auto path = out_dir / column_file_name(col.key());
      io::write_png(path, col.gray());
      produced[i].push_back({col.key(), col.width(), col.height(), entry.layout, entry.scribe,
                             path.generic_string()});
    }
  });

  // registration stays on the calling thread: the store has a single writer
  for (const auto& cols : produced) {
    for (const auto& info : cols) store.register_column(info);
    summary.columns += static_cast<int>(cols.size());
  }
  summary.pages = static_cast<int>(todo.size());
  return summary;
}

}  // namespace scriptor::preprocess
