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

#include "scriptor/eval/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "scriptor/core/error.hpp"

namespace scriptor::eval {
namespace {

double ratio(std::int64_t num, std::int64_t den) noexcept {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double parse_real(std::string_view text) {
  try {
    std::size_t used = 0;
    std::string s(text);
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "not a number: '" + std::string(text) + "'");
  }
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace

double accuracy(const Confusion& c) noexcept { return ratio(c.tp + c.tn, c.total()); }
double precision(const Confusion& c) noexcept { return ratio(c.tp, c.tp + c.fp); }
double recall(const Confusion& c) noexcept { return ratio(c.tp, c.tp + c.fn); }
double f_score(const Confusion& c) noexcept { return ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn); }

SweepPoint make_point(double tau, const Confusion& c) noexcept {
  return SweepPoint{tau, c, accuracy(c), f_score(c)};
}

Confusion match_detections(std::span<const DetectionRecord> preds, std::span<const Annotation> gts,
                           double iou_min) {
  if (!preds.empty() || !gts.empty()) {
    const ColumnKey& key = preds.empty() ? gts.front().column : preds.front().column;
    for (const auto& p : preds)
      if (p.column != key) throw Error(ErrorCode::InvalidArgument, "predictions span several columns");
    for (const auto& g : gts)
      if (g.column != key) throw Error(ErrorCode::InvalidArgument, "ground truth spans several columns");
  }

  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = preds[a];
    const auto& pb = preds[b];
    if (pa.confidence != pb.confidence) return pa.confidence > pb.confidence;
    if (pa.box.y != pb.box.y) return pa.box.y < pb.box.y;
    return pa.box.x < pb.box.x;
  });

  std::vector<bool> used(gts.size(), false);
  Confusion c;
  for (std::size_t i : order) {
    double best = -1.0;
    std::size_t best_j = gts.size();
    for (std::size_t j = 0; j < gts.size(); ++j) {
      if (used[j]) continue;
      double v = iou(preds[i].box, gts[j].effective_box());
      if (v > best) {
        best = v;
        best_j = j;
      }
    }
    if (best_j < gts.size() && best >= iou_min) {
      used[best_j] = true;
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = static_cast<std::int64_t>(std::count(used.begin(), used.end(), false));
  return c;
}

std::vector<SweepPoint> sweep(std::span<const LabeledScore> samples, std::span<const double> taus) {
  // Sorted confidences per truth class; counts >= tau by binary search.
  std::vector<double> pos;
  std::vector<double> neg;
  for (const auto& s : samples) (s.truth ? pos : neg).push_back(s.confidence);
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  auto at_least = [](const std::vector<double>& v, double tau) {
    return static_cast<std::int64_t>(v.end() - std::lower_bound(v.begin(), v.end(), tau));
  };

  std::vector<SweepPoint> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    Confusion c;
    c.tp = at_least(pos, tau);
    c.fn = static_cast<std::int64_t>(pos.size()) - c.tp;
    c.fp = at_least(neg, tau);
    c.tn = static_cast<std::int64_t>(neg.size()) - c.fp;
    out.push_back(make_point(tau, c));
  }
  return out;
}

std::vector<double> parse_tau_grid(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() == 1) return {parse_real(parts[0])};
  if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "tau grid must be start:stop:step");
  double lo = parse_real(parts[0]);
  double hi = parse_real(parts[1]);
  double step = parse_real(parts[2]);
  if (!(step > 0.0) || hi < lo || lo < 0.0 || hi > 1.0)
    throw Error(ErrorCode::InvalidArgument, "bad tau grid '" + std::string(text) + "'");
  auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> taus;
  for (long k = 0; k <= n; ++k) taus.push_back(round6(lo + static_cast<double>(k) * step));
  return taus;
}

StatsTable scribe_stats(const AnnotationStore& store, const ManuscriptId& manuscript,
                        std::span<const DetectionRecord> detections) {
  std::map<ColumnKey, ScribeId> labels;
  for (const auto& info : store.columns(manuscript))
    if (info.scribe) labels.emplace(info.key, *info.scribe);

  struct Acc {
    std::int64_t n = 0;
    std::set<ColumnKey> cols;
    double conf = 0.0;
  };
  std::map<ScribeId, Acc> acc;
  for (const auto& d : detections) {
    if (d.column.manuscript != manuscript) continue;
    auto it = labels.find(d.column);
    if (it == labels.end())
      throw Error(ErrorCode::UnlabeledColumn, "column " + d.column.str() + " has no scribe label");
    auto& a = acc[it->second];
    ++a.n;
    a.cols.insert(d.column);
    a.conf += d.confidence;
  }

  StatsTable table;
  table.total.scribe = "Total";
  double sum_ratio = 0.0;
  double sum_conf = 0.0;
  for (const auto& [scribe, a] : acc) {
    ScribeStats row;
    row.scribe = scribe.str();
    row.occurrences = a.n;
    row.columns = static_cast<std::int64_t>(a.cols.size());
    row.occ_per_column = ratio(row.occurrences, row.columns);
    row.mean_confidence = a.n == 0 ? 0.0 : a.conf / static_cast<double>(a.n);
    table.total.occurrences += row.occurrences;
    table.total.columns += row.columns;
    sum_ratio += row.occ_per_column;
    sum_conf += row.mean_confidence;
    table.rows.push_back(std::move(row));
  }
  if (!table.rows.empty()) {
    auto k = static_cast<double>(table.rows.size());
    table.total.occ_per_column = sum_ratio / k;
    table.total.mean_confidence = sum_conf / k;
  }
  return table;
}

std::string_view to_string(AttributionKind kind) noexcept {
  switch (kind) {
    case AttributionKind::any_above: return "any_above";
    case AttributionKind::fraction_above: return "fraction_above";
    case AttributionKind::majority_vote: return "majority_vote";
  }
  return "?";
}

AttributionKind attribution_kind_from_string(std::string_view text) {
  if (text == "any_above") return AttributionKind::any_above;
  if (text == "fraction_above") return AttributionKind::fraction_above;
  if (text == "majority_vote") return AttributionKind::majority_vote;
  throw Error(ErrorCode::InvalidArgument, "unknown attribution rule '" + std::string(text) + "'");
}

void AttributionRule::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidConfig, "tau must lie in [0,1]");
  if (kind == AttributionKind::fraction_above && !(fraction > 0.0 && fraction <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "fraction must lie in (0,1]");
}

std::string_view to_string(Attribution a) noexcept {
  switch (a) {
    case Attribution::target_scribe: return "target_scribe";
    case Attribution::other: return "other";
    case Attribution::abstain: return "abstain";
  }
  return "?";
}

Attribution attribute(std::span<const DetectionRecord> detections, const AttributionRule& rule) {
  rule.validate();
  if (detections.empty()) return Attribution::abstain;
  auto above = std::count_if(detections.begin(), detections.end(),
                             [&](const DetectionRecord& d) { return d.confidence >= rule.tau; });
  bool target = false;
  switch (rule.kind) {
    case AttributionKind::any_above:
      target = above > 0;
      break;
    case AttributionKind::fraction_above:
      // Small slack so 6 of 10 still reaches a fraction of 0.6.
      target = static_cast<double>(above) >=
               rule.fraction * static_cast<double>(detections.size()) - 1e-9;
      break;
    case AttributionKind::majority_vote: {
      auto ones = std::count_if(detections.begin(), detections.end(),
                                [](const DetectionRecord& d) { return d.cls == ClassId::target; });
      target = ones > static_cast<std::ptrdiff_t>(detections.size()) - ones;
      break;
    }
  }
  return target ? Attribution::target_scribe : Attribution::other;
}

std::vector<LabeledScore> corpus_samples(const AnnotationStore& store, const ManuscriptId& manuscript,
                                         const ScribeId& target) {
  std::map<ColumnKey, std::optional<ScribeId>> labels;
  for (const auto& info : store.columns(manuscript)) labels.emplace(info.key, info.scribe);

  AnnotationFilter filter;
  filter.manuscript = manuscript;
  filter.origin = Origin::detector;
  std::vector<LabeledScore> samples;
  for (const auto& a : store.query(filter)) {
    auto it = labels.find(a.column);
    if (it == labels.end() || !it->second)
      throw Error(ErrorCode::UnlabeledColumn, "column " + a.column.str() + " has no scribe label");
    samples.push_back({a.confidence.value_or(0.0), *it->second == target});
  }
  return samples;
}

SweepPoint classify_corpus(const AnnotationStore& store, const ManuscriptId& manuscript,
                           const ScribeId& target, double tau) {
  auto samples = corpus_samples(store, manuscript, target);
  const double taus[] = {tau};
  return sweep(samples, taus).front();
}

std::vector<PageAttribution> attribute_pages(const AnnotationStore& store,
                                             const ManuscriptId& manuscript,
                                             const AttributionRule& rule) {
  rule.validate();
  std::map<std::pair<int, Side>, PageAttribution> pages;
  for (const auto& info : store.columns(manuscript)) {
    auto& p = pages[{info.key.page, info.key.side}];
    p.page = info.key.page;
    p.side = info.key.side;
    if (info.scribe) p.truth = info.scribe;
  }

  AnnotationFilter filter;
  filter.manuscript = manuscript;
  filter.origin = Origin::detector;
  std::map<std::pair<int, Side>, std::vector<DetectionRecord>> dets;
  for (const auto& a : store.query(filter)) {
    if (a.status == Status::rejected) continue;
    dets[{a.column.page, a.column.side}].push_back(DetectionRecord{
        a.column, a.effective_box(), a.cls, a.confidence.value_or(0.0), a.model_id.value_or("")});
  }

  std::vector<PageAttribution> out;
  for (auto& [key, p] : pages) {
    auto it = dets.find(key);
    std::span<const DetectionRecord> d;
    if (it != dets.end()) d = it->second;
    p.detections = static_cast<int>(d.size());
    p.decision = attribute(d, rule);
    out.push_back(p);
  }
  return out;
}

Confusion page_confusion(std::span<const PageAttribution> pages, const ScribeId& target) {
  Confusion c;
  for (const auto& p : pages) {
    bool truth = p.truth && *p.truth == target;
    bool pred = p.decision == Attribution::target_scribe;
    if (truth && pred) ++c.tp;
    else if (!truth && pred) ++c.fp;
    else if (truth) ++c.fn;
    else ++c.tn;
  }
  return c;
}

}  // namespace scriptor::eval
