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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "scriptor/core/error.hpp"
#include "scriptor/eval/metrics.hpp"
#include "scriptor/eval/report.hpp"
#include "testing.hpp"

using namespace scriptor;
using namespace scriptor::eval;
namespace st = scriptor::testing;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no scriptor::Error thrown";
  return ErrorCode::InvalidArgument;
}

const ColumnKey kCol{ManuscriptId("m"), 1, Side::recto, 0};

DetectionRecord pred(BBox box, double conf, ClassId cls = ClassId::target, ColumnKey col = kCol) {
  return {col, box, cls, conf, "m1"};
}

Annotation truth(BBox box, ColumnKey col = kCol) {
  Annotation a;
  a.column = col;
  a.box = box;
  a.status = Status::accepted;
  return a;
}

// Brute-force counts, independent of the sorted-search implementation.
Confusion brute(const std::vector<LabeledScore>& s, double tau) {
  Confusion c;
  for (const auto& x : s) {
    bool p = x.confidence >= tau;
    if (p && x.truth) ++c.tp;
    else if (p) ++c.fp;
    else if (x.truth) ++c.fn;
    else ++c.tn;
  }
  return c;
}

}  // namespace

TEST(Metrics, RatiosAndZeroDenominators) {
  Confusion c{2, 1, 1, 2};
  EXPECT_DOUBLE_EQ(accuracy(c), 4.0 / 6.0);
  EXPECT_DOUBLE_EQ(precision(c), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(recall(c), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(f_score(c), 4.0 / 6.0);
  Confusion z;
  EXPECT_EQ(accuracy(z), 0.0);
  EXPECT_EQ(f_score(z), 0.0);
  EXPECT_EQ(precision(Confusion{0, 0, 3, 0}), 0.0);
}

TEST(MatchDetections, Examples) {
  std::vector<Annotation> gts{truth({0, 0, 10, 10}), truth({50, 50, 10, 10})};
  std::vector<DetectionRecord> preds{pred({0, 0, 10, 10}, 0.9), pred({1, 0, 10, 10}, 0.8),
                                     pred({100, 100, 5, 5}, 0.7)};
  auto c = match_detections(preds, gts, 0.5);
  EXPECT_EQ(c, (Confusion{1, 2, 1, 0}));
  EXPECT_EQ(match_detections({}, gts, 0.5), (Confusion{0, 0, 2, 0}));
  EXPECT_EQ(match_detections(preds, {}, 0.5), (Confusion{0, 3, 0, 0}));
  // The higher-confidence prediction claims the box.
  std::vector<DetectionRecord> two{pred({2, 0, 10, 10}, 0.6), pred({0, 0, 10, 10}, 0.95)};
  std::vector<Annotation> one{truth({0, 0, 10, 10})};
  EXPECT_EQ(match_detections(two, one, 0.9), (Confusion{1, 1, 0, 0}));
  // Adjusted truth boxes count with their replacement.
  auto adj = truth({0, 0, 4, 4});
  adj.status = Status::adjusted;
  adj.adjusted_box = BBox{50, 50, 10, 10};
  std::vector<Annotation> adjusted{adj};
  std::vector<DetectionRecord> at{pred({50, 50, 10, 10}, 0.5)};
  EXPECT_EQ(match_detections(at, adjusted, 0.5).tp, 1);
}

TEST(MatchDetections, RejectsMixedColumns) {
  std::vector<DetectionRecord> preds{pred({0, 0, 5, 5}, 0.5),
                                     pred({0, 0, 5, 5}, 0.5, ClassId::target, ColumnKey{ManuscriptId("m"), 2, Side::recto, 0})};
  EXPECT_EQ(code_of([&] { match_detections(preds, {}, 0.5); }), ErrorCode::InvalidArgument);
}

TEST(MatchDetections, CountInvariants) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<DetectionRecord> preds;
    std::vector<Annotation> gts;
    auto rbox = [&] {
      return BBox{static_cast<int>(rng() % 60), static_cast<int>(rng() % 60), 5 + static_cast<int>(rng() % 10),
                  5 + static_cast<int>(rng() % 10)};
    };
    for (int i = static_cast<int>(rng() % 15); i > 0; --i) preds.push_back(pred(rbox(), (rng() % 100) / 100.0));
    for (int i = static_cast<int>(rng() % 15); i > 0; --i) gts.push_back(truth(rbox()));
    auto c = match_detections(preds, gts, 0.5);
    EXPECT_EQ(c.tp + c.fp, static_cast<std::int64_t>(preds.size()));
    EXPECT_EQ(c.tp + c.fn, static_cast<std::int64_t>(gts.size()));
    EXPECT_EQ(c.tn, 0);
    auto loose = match_detections(preds, gts, 0.1);
    EXPECT_GE(loose.tp, c.tp);
  }
}

TEST(Sweep, SixSampleExample) {
  std::vector<LabeledScore> s{{0.9, true}, {0.8, true}, {0.7, false}, {0.3, true}, {0.2, false}, {0.1, false}};
  std::vector<double> taus{0.5};
  auto pts = sweep(s, taus);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].confusion, (Confusion{2, 1, 1, 2}));
  EXPECT_DOUBLE_EQ(pts[0].accuracy, 4.0 / 6.0);
  EXPECT_DOUBLE_EQ(pts[0].f_score, 4.0 / 6.0);
}

TEST(Sweep, ThresholdIsInclusive) {
  std::vector<LabeledScore> s{{0.83, true}, {0.8299, false}};
  std::vector<double> taus{0.83};
  EXPECT_EQ(sweep(s, taus)[0].confusion, (Confusion{1, 0, 0, 1}));
}

TEST(Sweep, RandomSetsAgreeWithBruteForce) {
  std::mt19937_64 rng(77);
  auto taus = parse_tau_grid("0:1:0.05");
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LabeledScore> s;
    for (int i = static_cast<int>(rng() % 300); i > 0; --i)
      s.push_back({static_cast<double>(rng() % 101) / 100.0, rng() % 3 == 0});
    auto pts = sweep(s, taus);
    ASSERT_EQ(pts.size(), taus.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_EQ(pts[i].confusion, brute(s, taus[i]));
      EXPECT_EQ(pts[i].confusion.total(), static_cast<std::int64_t>(s.size()));
      if (i > 0) {
        EXPECT_LE(pts[i].confusion.tp, pts[i - 1].confusion.tp);
        EXPECT_LE(pts[i].confusion.fp, pts[i - 1].confusion.fp);
      }
    }
  }
}

TEST(Sweep, TauGrid) {
  auto g = parse_tau_grid("0.70:0.85:0.01");
  ASSERT_EQ(g.size(), 16u);
  EXPECT_DOUBLE_EQ(g.front(), 0.70);
  EXPECT_DOUBLE_EQ(g[13], 0.83);
  EXPECT_DOUBLE_EQ(g.back(), 0.85);
  EXPECT_EQ(parse_tau_grid("0.5"), std::vector<double>{0.5});
  EXPECT_EQ(code_of([] { parse_tau_grid("0.9:0.1:0.1"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { parse_tau_grid("a:b"); }), ErrorCode::InvalidArgument);
}

TEST(Sweep, ReproducesPublishedCurve) {
  auto fx = st::build_sweep_fixture();
  auto pts = sweep(fx.samples, st::kCurveTaus);
  ASSERT_EQ(pts.size(), 16u);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(pts[i].confusion, fx.confusions[i]) << "tau " << pts[i].tau;
    EXPECT_NEAR(pts[i].accuracy * 100.0, st::kCurveAccuracy[i], 0.5) << "tau " << pts[i].tau;
    EXPECT_NEAR(pts[i].f_score * 100.0, st::kCurveFScore[i], 0.5) << "tau " << pts[i].tau;
  }
  // Best F at 0.83, best accuracy at 0.83 as well.
  auto best_f = std::max_element(pts.begin(), pts.end(),
                                 [](const SweepPoint& a, const SweepPoint& b) { return a.f_score < b.f_score; });
  EXPECT_DOUBLE_EQ(best_f->tau, 0.83);
}

TEST(Stats, ReproducesPublishedTable) {
  AnnotationStore store(st::fixed_clock);
  auto dets = st::populate_scribe_table(store);
  auto table = scribe_stats(store, ManuscriptId("avila"), dets);
  ASSERT_EQ(table.rows.size(), st::kScribeTable.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& want = st::kScribeTable[i];
    const auto& got = table.rows[i];
    EXPECT_EQ(got.scribe, want.scribe);
    EXPECT_EQ(got.occurrences, want.occurrences);
    EXPECT_EQ(got.columns, want.columns);
    EXPECT_NEAR(got.occ_per_column, want.occ_per_column, 0.01) << want.scribe;
    EXPECT_NEAR(got.mean_confidence, want.mean_confidence, 0.01) << want.scribe;
  }
  EXPECT_EQ(table.total.occurrences, st::kTableOccurrences);
  EXPECT_EQ(table.total.columns, st::kTableColumns);
  EXPECT_NEAR(table.total.occ_per_column, st::kTableOccPerColumn, 0.01);
  EXPECT_NEAR(table.total.mean_confidence, st::kTableMeanConfidence, 0.01);
}

TEST(Stats, UnlabeledColumn) {
  AnnotationStore store(st::fixed_clock);
  store.register_column({kCol, 100, 100, Layout::two_column, std::nullopt, ""});
  std::vector<DetectionRecord> d{pred({0, 0, 5, 5}, 0.5)};
  EXPECT_EQ(code_of([&] { scribe_stats(store, ManuscriptId("m"), d); }), ErrorCode::UnlabeledColumn);
}

TEST(Attribute, Rules) {
  std::vector<DetectionRecord> d;
  for (int i = 0; i < 10; ++i) d.push_back(pred({i * 10, 0, 5, 5}, i < 6 ? 0.9 : 0.2));
  AttributionRule frac{AttributionKind::fraction_above, 0.5, 0.5};
  EXPECT_EQ(attribute(d, frac), Attribution::target_scribe);
  frac.fraction = 0.6;
  EXPECT_EQ(attribute(d, frac), Attribution::target_scribe);
  frac.fraction = 0.7;
  EXPECT_EQ(attribute(d, frac), Attribution::other);
  AttributionRule any{AttributionKind::any_above, 0.95, 0.5};
  EXPECT_EQ(attribute(d, any), Attribution::other);
  any.tau = 0.9;
  EXPECT_EQ(attribute(d, any), Attribution::target_scribe);
  EXPECT_EQ(attribute({}, any), Attribution::abstain);
  AttributionRule bad{AttributionKind::fraction_above, 0.5, 1.5};
  EXPECT_EQ(code_of([&] { attribute(d, bad); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(attribution_kind_from_string(to_string(AttributionKind::majority_vote)), AttributionKind::majority_vote);
}

TEST(Attribute, MajorityIgnoresOrder) {
  std::mt19937_64 rng(5);
  AttributionRule maj{AttributionKind::majority_vote, 0.5, 0.5};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<DetectionRecord> d;
    for (int i = 1 + static_cast<int>(rng() % 12); i > 0; --i)
      d.push_back(pred({i, 0, 3, 3}, 0.5, rng() % 2 ? ClassId::target : ClassId::other));
    auto first = attribute(d, maj);
    std::shuffle(d.begin(), d.end(), rng);
    EXPECT_EQ(attribute(d, maj), first);
  }
  std::vector<DetectionRecord> tie{pred({0, 0, 3, 3}, 0.5, ClassId::target), pred({5, 0, 3, 3}, 0.5, ClassId::other)};
  EXPECT_EQ(attribute(tie, maj), Attribution::other);
}

namespace {

// Two hands, pages 1-4. Pages 1-2 by A, 3-4 by B; page 4 has no detections.
void corpus(AnnotationStore& store) {
  for (int p = 1; p <= 4; ++p)
    store.register_column({ColumnKey{ManuscriptId("m"), p, Side::recto, 0}, 100, 100, Layout::two_column,
                           ScribeId(p <= 2 ? "A" : "B"), ""});
  auto det = [&](int page, double conf, Status st = Status::pending) {
    Annotation a;
    a.column = ColumnKey{ManuscriptId("m"), page, Side::recto, 0};
    a.box = {static_cast<int>(conf * 50), 10, 8, 8};
    a.origin = Origin::detector;
    a.cycle = 1;
    a.confidence = conf;
    auto id = store.put_annotation(a);
    if (st == Status::rejected) store.decide(id, Decision::reject());
  };
  det(1, 0.9);
  det(1, 0.8);
  det(2, 0.6);
  det(3, 0.85, Status::rejected);
  det(3, 0.4);
}

}  // namespace

TEST(Corpus, ClassifyAndAttributePages) {
  AnnotationStore store(st::fixed_clock);
  corpus(store);
  auto samples = corpus_samples(store, ManuscriptId("m"), ScribeId("A"));
  EXPECT_EQ(samples.size(), 5u);
  auto pt = classify_corpus(store, ManuscriptId("m"), ScribeId("A"), 0.7);
  // A: 0.9, 0.8 above, 0.6 below. B: 0.85 above, 0.4 below.
  EXPECT_EQ(pt.confusion, (Confusion{2, 1, 1, 1}));

  AttributionRule rule{AttributionKind::any_above, 0.7, 0.5};
  auto pages = attribute_pages(store, ManuscriptId("m"), rule);
  ASSERT_EQ(pages.size(), 4u);
  EXPECT_EQ(pages[0].decision, Attribution::target_scribe);
  EXPECT_EQ(pages[1].decision, Attribution::other);
  EXPECT_EQ(pages[2].decision, Attribution::other);  // the rejected 0.85 is ignored
  EXPECT_EQ(pages[2].detections, 1);
  EXPECT_EQ(pages[3].decision, Attribution::abstain);
  EXPECT_EQ(page_confusion(pages, ScribeId("A")), (Confusion{1, 0, 1, 2}));
}

TEST(Corpus, UnlabeledColumnFails) {
  AnnotationStore store(st::fixed_clock);
  store.register_column({kCol, 100, 100, Layout::two_column, std::nullopt, ""});
  Annotation a;
  a.column = kCol;
  a.box = {0, 0, 5, 5};
  a.origin = Origin::detector;
  a.confidence = 0.5;
  store.put_annotation(a);
  EXPECT_EQ(code_of([&] { corpus_samples(store, ManuscriptId("m"), ScribeId("A")); }), ErrorCode::UnlabeledColumn);
}

TEST(Report, SweepCsvRoundTrip) {
  std::vector<LabeledScore> s{{0.9, true}, {0.75, false}, {0.8, true}, {0.1, false}};
  auto taus = parse_tau_grid("0.70:0.85:0.05");
  auto pts = sweep(s, taus);
  auto csv = sweep_csv(pts);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "tau,tp,fp,fn,tn,accuracy,f_score");
  EXPECT_NE(csv.find("\n0.7000,2,1,0,1,0.750000,0.800000\n"), std::string::npos);
  auto back = parse_sweep_csv(csv);
  ASSERT_EQ(back.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(back[i].confusion, pts[i].confusion);
    EXPECT_NEAR(back[i].tau, pts[i].tau, 1e-9);
    EXPECT_NEAR(back[i].f_score, pts[i].f_score, 1e-6);
  }
}

TEST(Report, StatsCsvAndSvg) {
  StatsTable t;
  t.rows.push_back({"A", 10, 2, 5.0, 0.78541});
  t.total = {"Total", 10, 2, 5.0, 0.78541};
  auto csv = stats_csv(t);
  EXPECT_EQ(csv, "scribe,occurrences,columns,occ_per_column,mean_confidence\n"
                 "A,10,2,5.00,0.7854\n"
                 "Total,10,2,5.00,0.79\n");
  std::vector<LabeledScore> s{{0.9, true}, {0.1, false}};
  auto taus = parse_tau_grid("0:1:0.25");
  auto svg = sweep_svg(sweep(s, taus), "demo");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("demo"), std::string::npos);
}
