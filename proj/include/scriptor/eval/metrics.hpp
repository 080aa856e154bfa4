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

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "scriptor/core/annotation_store.hpp"

namespace scriptor::eval {

struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const noexcept { return tp + fp + fn + tn; }
  bool operator==(const Confusion&) const = default;
};

// Ratios with a vanishing denominator are 0.
double accuracy(const Confusion& c) noexcept;
double precision(const Confusion& c) noexcept;
double recall(const Confusion& c) noexcept;
double f_score(const Confusion& c) noexcept;

struct SweepPoint {
  double tau = 0.0;
  Confusion confusion;
  double accuracy = 0.0;
  double f_score = 0.0;
};

SweepPoint make_point(double tau, const Confusion& c) noexcept;

/// One detection's confidence and whether it truly belongs to the target.
struct LabeledScore {
  double confidence = 0.0;
  bool truth = false;
};

/// Greedy matching by descending confidence (ties by y, then x). A
/// prediction is a true positive when its best unmatched ground truth
/// overlaps it with IoU >= iou_min. tn is always 0.
Confusion match_detections(std::span<const DetectionRecord> preds, std::span<const Annotation> gts,
                           double iou_min);

/// Predicted positive iff confidence >= tau, for every tau in the grid.
std::vector<SweepPoint> sweep(std::span<const LabeledScore> samples, std::span<const double> taus);

/// "start:stop:step" inclusive of both ends, e.g. "0.70:0.85:0.01".
std::vector<double> parse_tau_grid(std::string_view text);

struct ScribeStats {
  std::string scribe;  // letter, or "Total" for the summary row
  std::int64_t occurrences = 0;
  std::int64_t columns = 0;
  double occ_per_column = 0.0;
  double mean_confidence = 0.0;
};

/// Per-scribe extraction statistics plus a summary row. The summary sums
/// occurrences and columns, and averages occ_per_column and
/// mean_confidence over the scribes (unweighted).
struct StatsTable {
  std::vector<ScribeStats> rows;
  ScribeStats total;
};

/// Groups detections by their column's scribe label. Throws
/// UnlabeledColumn for detections on unknown or unlabelled columns.
StatsTable scribe_stats(const AnnotationStore& store, const ManuscriptId& manuscript,
                        std::span<const DetectionRecord> detections);

enum class AttributionKind { any_above, fraction_above, majority_vote };

std::string_view to_string(AttributionKind kind) noexcept;
AttributionKind attribution_kind_from_string(std::string_view text);

struct AttributionRule {
  AttributionKind kind = AttributionKind::any_above;
  double tau = 0.5;
  double fraction = 0.5;  // fraction_above only

  void validate() const;
};

enum class Attribution { target_scribe, other, abstain };

std::string_view to_string(Attribution a) noexcept;

/// Decision for one page or column. any_above: some detection >= tau;
/// fraction_above: share of detections >= tau reaches `fraction`;
/// majority_vote: class-1 detections outnumber class-0. No detections:
/// abstain.
Attribution attribute(std::span<const DetectionRecord> detections, const AttributionRule& rule);

/// Detector annotations of a manuscript as (confidence, page-is-target)
/// samples. Throws UnlabeledColumn when a column has no scribe label.
std::vector<LabeledScore> corpus_samples(const AnnotationStore& store, const ManuscriptId& manuscript,
                                         const ScribeId& target);

/// Per-detection attribution of the corpus at one threshold.
SweepPoint classify_corpus(const AnnotationStore& store, const ManuscriptId& manuscript,
                           const ScribeId& target, double tau);

struct PageAttribution {
  int page = 1;
  Side side = Side::recto;
  std::optional<ScribeId> truth;
  Attribution decision = Attribution::abstain;
  int detections = 0;
};

/// Applies `rule` to the detector annotations of every page of a
/// manuscript. Pages without detections abstain.
std::vector<PageAttribution> attribute_pages(const AnnotationStore& store,
                                             const ManuscriptId& manuscript,
                                             const AttributionRule& rule);

/// Page-level confusion: positive prediction = target_scribe decision,
/// truth = page label equals target. Abstentions count as negatives.
Confusion page_confusion(std::span<const PageAttribution> pages, const ScribeId& target);

}  // namespace scriptor::eval
