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
#include <span>
#include <vector>

#include "scriptor/core/image.hpp"
#include "scriptor/core/types.hpp"
#include "scriptor/preprocess/preprocess.hpp"

namespace scriptor::match {

/// Reference image of the target character as written by one scribe.
struct Template {
  GrayImage pixels;
  ScribeId scribe;
  ClassId label = ClassId::target;
};

/// Dense correlation scores; entry (u, v) belongs to the window whose
/// top-left corner is (u, v).
struct ScoreMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int u, int v) const noexcept { return values[static_cast<std::size_t>(v) * width + u]; }
};

struct MatchCandidate {
  BBox box;
  double score = 0.0;
};

inline const BBox& box_of(const MatchCandidate& c) noexcept { return c.box; }
inline double score_of(const MatchCandidate& c) noexcept { return c.score; }

/// Zero-mean normalized cross-correlation of `tmpl` against every window of
/// `image`. Output is (W - w + 1) x (H - h + 1); windows with zero variance
/// score 0. Rows are evaluated on `threads` workers (0 = all cores).
ScoreMap ncc_map(const GrayImage& image, const GrayImage& tmpl, unsigned threads = 0);

/// Every map location scoring >= tau as a template-sized box, best first
/// (ties by y, then x).
std::vector<MatchCandidate> match_candidates(const ScoreMap& map, double tau, int tmpl_w,
                                             int tmpl_h);

/// Matches every template against the column, suppresses overlapping
/// candidates jointly across templates and returns pending annotations
/// labelled with the winning template's class.
std::vector<Annotation> bootstrap_annotate(const preprocess::ColumnImage& column,
                                           std::span<const Template> templates, double tau,
                                           double iou_thresh, unsigned threads = 0);

/// Loads templates/*.png listed in the sidecar templates.json:
/// [{"file": "b_a.png", "scribe": "B", "class": 1}, ...]
std::vector<Template> load_templates(const std::filesystem::path& dir);

}  // namespace scriptor::match
