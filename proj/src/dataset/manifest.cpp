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

#include "scriptor/dataset/manifest.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "scriptor/core/error.hpp"

namespace scriptor::dataset {

namespace {

std::vector<std::string> sorted_union(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool contains(const std::vector<std::string>& v, std::string_view id) {
  return std::find(v.begin(), v.end(), id) != v.end();
}

nlohmann::json range_to_json(const PageRange& r) {
  nlohmann::json j;
  j["side"] = r.side ? nlohmann::json(std::string(to_string(*r.side))) : nlohmann::json("any");
  j["offset"] = r.offset;
  j["count"] = r.count ? nlohmann::json(*r.count) : nlohmann::json(nullptr);
  return j;
}

PageRange range_from_json(const nlohmann::json& j) {
  PageRange r;
  const auto side = j.value("side", std::string("any"));
  if (side != "any") r.side = side_from_string(side);
  r.offset = j.value("offset", 0);
  if (j.contains("count") && !j["count"].is_null()) r.count = j["count"].get<int>();
  if (r.offset < 0 || (r.count && *r.count < 0)) {
    throw Error(ErrorCode::InvalidConfig, "page ranges need non-negative offset and count");
  }
  return r;
}

using PageKey = std::pair<int, Side>;

std::set<PageKey> select_pages(const std::vector<PageKey>& pages, const std::vector<PageRange>& ranges) {
  std::set<PageKey> out;
  for (const auto& r : ranges) {
    std::vector<PageKey> ordered;
    for (const auto& p : pages) {
      if (!r.side || p.second == *r.side) ordered.push_back(p);
    }
    const auto begin = std::min<std::size_t>(static_cast<std::size_t>(r.offset), ordered.size());
    const auto end = r.count ? std::min<std::size_t>(begin + static_cast<std::size_t>(*r.count), ordered.size())
                             : ordered.size();
    out.insert(ordered.begin() + static_cast<std::ptrdiff_t>(begin),
               ordered.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

}  // namespace

std::vector<std::string> DatasetManifest::training_columns() const {
  return sorted_union(train_columns, val_columns);
}

bool DatasetManifest::is_training(std::string_view id) const {
  return contains(train_columns, id) || contains(val_columns, id);
}

bool DatasetManifest::is_inference(std::string_view id) const { return contains(inference_columns, id); }

void DatasetManifest::validate() const {
  const std::vector<const std::vector<std::string>*> roles{&train_columns, &val_columns,
                                                           &inference_columns};
  std::set<std::string> seen;
  for (const auto* role : roles) {
    for (const auto& id : *role) {
      if (!seen.insert(id).second) {
        throw Error(ErrorCode::OverlapError, "column " + id + " appears in two roles");
      }
    }
  }
  if (class_names.size() != 2) {
    throw Error(ErrorCode::InvalidConfig, "manifests carry exactly two class names");
  }
}

nlohmann::ordered_json DatasetManifest::to_json() const {
  nlohmann::ordered_json j;
  j["cycle"] = cycle;
  j["class_names"] = class_names;
  j["train"] = train_columns;
  j["val"] = val_columns;
  j["inference"] = inference_columns;
  return j;
}

DatasetManifest DatasetManifest::from_json(const nlohmann::json& j) {
  DatasetManifest m;
  try {
    m.cycle = j.at("cycle").get<int>();
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    m.train_columns = j.at("train").get<std::vector<std::string>>();
    m.val_columns = j.at("val").get<std::vector<std::string>>();
    m.inference_columns = j.at("inference").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("manifest: ") + e.what());
  }
  m.validate();
  return m;
}

nlohmann::json CycleSpec::to_json() const {
  nlohmann::json j;
  j["cycle"] = cycle;
  j["manuscript"] = manuscript.str();
  j["scribe"] = scribe ? nlohmann::json(scribe->str()) : nlohmann::json(nullptr);
  j["val_fraction"] = val_fraction;
  j["train"] = nlohmann::json::array();
  for (const auto& r : train) j["train"].push_back(range_to_json(r));
  j["inference"] = nlohmann::json::array();
  for (const auto& r : inference) j["inference"].push_back(range_to_json(r));
  return j;
}

CycleSpec CycleSpec::from_json(const nlohmann::json& j) {
  CycleSpec s;
  try {
    s.cycle = j.at("cycle").get<int>();
    s.manuscript = ManuscriptId(j.at("manuscript").get<std::string>());
    if (j.contains("scribe") && !j["scribe"].is_null()) s.scribe = ScribeId(j["scribe"].get<std::string>());
    s.val_fraction = j.value("val_fraction", 0.1);
    for (const auto& r : j.value("train", nlohmann::json::array())) s.train.push_back(range_from_json(r));
    for (const auto& r : j.value("inference", nlohmann::json::array())) {
      s.inference.push_back(range_from_json(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("cycle spec: ") + e.what());
  }
  if (s.cycle < 1) throw Error(ErrorCode::InvalidConfig, "cycles are numbered from 1");
  if (!(s.val_fraction >= 0.0 && s.val_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "val_fraction must lie in [0,1)");
  }
  return s;
}

std::vector<CycleSpec> standard_schedule(const ManuscriptId& manuscript, const ScribeId& scribe) {
  std::vector<CycleSpec> out(3);
  for (int i = 0; i < 3; ++i) {
    out[i].cycle = i + 1;
    out[i].manuscript = manuscript;
    out[i].scribe = scribe;
  }
  out[0].train = {{Side::recto, 0, 60}};
  out[0].inference = {{Side::recto, 60, 150}};
  out[1].train = {{Side::recto, 0, 210}};
  out[1].inference = {{Side::recto, 210, std::nullopt}, {Side::verso, 0, std::nullopt}};
  out[2].train = {{Side::recto, 0, std::nullopt}, {Side::verso, 0, std::nullopt}};
  return out;
}

std::uint64_t stable_hash(std::string_view text) noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

bool in_validation_split(std::string_view column_id, double fraction) noexcept {
  return static_cast<double>(stable_hash(column_id) % 10000) < fraction * 10000.0;
}

DatasetManifest build_manifest(const AnnotationStore& store, const CycleSpec& spec) {
  // page -> its columns, restricted to the requested hand
  std::map<PageKey, std::vector<std::string>> page_columns;
  for (const auto& col : store.columns(spec.manuscript)) {
    if (spec.scribe && col.scribe != spec.scribe) continue;
    page_columns[{col.key.page, col.key.side}].push_back(col.key.str());
  }
  std::vector<PageKey> pages;
  for (const auto& [page, cols] : page_columns) pages.push_back(page);

  auto columns_of = [&](const std::set<PageKey>& selected) {
    std::vector<std::string> out;
    for (const auto& p : selected) {
      const auto& cols = page_columns.at(p);
      out.insert(out.end(), cols.begin(), cols.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  DatasetManifest m;
  m.cycle = spec.cycle;
  for (auto& id : columns_of(select_pages(pages, spec.train))) {
    (in_validation_split(id, spec.val_fraction) ? m.val_columns : m.train_columns).push_back(std::move(id));
  }
  m.inference_columns = columns_of(select_pages(pages, spec.inference));
  m.validate();
  return m;
}

}  // namespace scriptor::dataset
