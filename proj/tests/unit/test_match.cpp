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

#include <fstream>
#include <random>

#include "scriptor/core/error.hpp"
#include "scriptor/match/nms.hpp"
#include "scriptor/match/template_matcher.hpp"
#include "scriptor/preprocess/image_io.hpp"
#include "scriptor/synth/synthetic.hpp"
#include "testing.hpp"

using namespace scriptor;
using namespace scriptor::match;
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

void paste(GrayImage& dst, const GrayImage& src, int x, int y) {
  for (int yy = 0; yy < src.height(); ++yy)
    for (int xx = 0; xx < src.width(); ++xx) dst.at(x + xx, y + yy) = src.at(xx, yy);
}

preprocess::ColumnImage binary_column(GrayImage raster) {
  preprocess::ColumnImage col;
  col.page.manuscript = ManuscriptId("m");
  col.page.page_number = 1;
  col.stage = preprocess::Stage::binary;
  col.pixels = std::move(raster);
  return col;
}

struct ScoredBox {
  BBox box;
  double score;
};
const BBox& box_of(const ScoredBox& s) noexcept { return s.box; }
double score_of(const ScoredBox& s) noexcept { return s.score; }

}  // namespace

TEST(Ncc, SelfMatchIsOne) {
  std::mt19937_64 rng(3);
  auto img = st::random_gray(rng, 20, 20);
  auto map = ncc_map(img, img);
  ASSERT_EQ(map.width, 1);
  ASSERT_EQ(map.height, 1);
  EXPECT_NEAR(map.at(0, 0), 1.0, 1e-9);
}

TEST(Ncc, InvertedTemplateIsMinusOne) {
  std::mt19937_64 rng(5);
  auto img = st::random_gray(rng, 10, 10);
  GrayImage inv(10, 10);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) inv.at(x, y) = static_cast<std::uint8_t>(255 - img.at(x, y));
  EXPECT_NEAR(ncc_map(img, inv).at(0, 0), -1.0, 1e-9);
}

TEST(Ncc, MatchesDirectFormula) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto img = st::random_gray(rng, 12, 12);
    auto tmpl = st::random_gray(rng, 4, 4);
    auto map = ncc_map(img, tmpl);
    ASSERT_EQ(map.width, 9);
    ASSERT_EQ(map.height, 9);
    for (int v = 0; v < 9; ++v)
      for (int u = 0; u < 9; ++u) {
        EXPECT_NEAR(map.at(u, v), st::ncc_oracle(img, tmpl, u, v), 1e-9);
        EXPECT_GE(map.at(u, v), -1.0);
        EXPECT_LE(map.at(u, v), 1.0);
      }
  }
}

TEST(Ncc, FlatWindowScoresZero) {
  GrayImage img(10, 10, 200);
  auto tmpl = synth::glyph_template(synth::GlyphShape::bar);
  GrayImage big(30, 30, 255);
  paste(big, tmpl, 14, 14);
  auto map = ncc_map(big, tmpl);
  EXPECT_EQ(map.at(0, 0), 0.0);
  EXPECT_NEAR(map.at(14, 14), 1.0, 1e-9);
}

TEST(Ncc, ArgmaxFollowsTranslation) {
  std::mt19937_64 rng(23);
  auto tmpl = synth::glyph_template(synth::GlyphShape::angular);
  for (int trial = 0; trial < 5; ++trial) {
    GrayImage img = st::random_gray(rng, 60, 50);
    int dx = static_cast<int>(rng() % 44), dy = static_cast<int>(rng() % 34);
    paste(img, tmpl, dx, dy);
    auto map = ncc_map(img, tmpl);
    auto best = std::max_element(map.values.begin(), map.values.end()) - map.values.begin();
    EXPECT_EQ(best % map.width, dx);
    EXPECT_EQ(best / map.width, dy);
  }
}

TEST(Ncc, ThreadCountDoesNotChangeScores) {
  std::mt19937_64 rng(2);
  auto img = st::random_gray(rng, 90, 70);
  auto tmpl = st::random_gray(rng, 9, 7);
  EXPECT_EQ(ncc_map(img, tmpl, 1).values, ncc_map(img, tmpl, 8).values);
}

TEST(Ncc, Errors) {
  GrayImage img(10, 10, 1);
  GrayImage big(11, 5, 1);
  big.at(0, 0) = 9;
  EXPECT_EQ(code_of([&] { ncc_map(img, big); }), ErrorCode::TemplateTooLarge);
  GrayImage flat(4, 4, 7);
  EXPECT_EQ(code_of([&] { ncc_map(img, flat); }), ErrorCode::ConstantTemplate);
}

TEST(Candidates, ThresholdAndOrder) {
  ScoreMap map{3, 1, {0.9, 0.85, 0.7}};
  auto c = match_candidates(map, 0.8, 5, 6);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].box, (BBox{0, 0, 5, 6}));
  EXPECT_DOUBLE_EQ(c[0].score, 0.9);
  EXPECT_EQ(c[1].box, (BBox{1, 0, 5, 6}));
  EXPECT_TRUE(match_candidates(map, 1.0, 5, 6).empty());
  EXPECT_EQ(match_candidates(map, 0.85, 5, 6).size(), 2u);  // inclusive
  EXPECT_EQ(code_of([&] { match_candidates(map, 0.0, 5, 6); }), ErrorCode::InvalidArgument);
}

TEST(Nms, HandCases) {
  // Offset by half a width: IoU is exactly 1/3.
  std::vector<ScoredBox> two{{{0, 0, 10, 10}, 0.9}, {{5, 0, 10, 10}, 0.8}};
  auto kept = nms(two, 0.3);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_DOUBLE_EQ(kept[0].score, 0.9);
  EXPECT_EQ(nms(two, 0.35).size(), 2u);
  EXPECT_TRUE(nms(std::vector<ScoredBox>{}, 0.5).empty());
  EXPECT_EQ(code_of([&] { nms(two, 1.0); }), ErrorCode::InvalidArgument);
}

TEST(Nms, RandomSetProperties) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ScoredBox> items;
    const int n = static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      items.push_back({{static_cast<int>(rng() % 80), static_cast<int>(rng() % 80),
                        4 + static_cast<int>(rng() % 20), 4 + static_cast<int>(rng() % 20)},
                       static_cast<double>(rng() % 1000) / 1000.0});
    }
    const double t = 0.1 + 0.1 * static_cast<double>(trial % 8);
    auto kept = nms(items, t);
    EXPECT_LE(kept.size(), items.size());
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (std::size_t j = i + 1; j < kept.size(); ++j) EXPECT_LT(iou(kept[i].box, kept[j].box), t);
    // Every dropped item is covered by a kept item scoring at least as high.
    for (const auto& it : items) {
      bool in_kept = std::any_of(kept.begin(), kept.end(), [&](const ScoredBox& k) {
        return k.box == it.box && k.score == it.score;
      });
      if (in_kept) continue;
      bool covered = std::any_of(kept.begin(), kept.end(), [&](const ScoredBox& k) {
        return k.score >= it.score && iou(k.box, it.box) >= t;
      });
      EXPECT_TRUE(covered);
    }
    auto again = nms(kept, t);
    EXPECT_EQ(again.size(), kept.size());
  }
}

TEST(Bootstrap, RecoversPlantedGlyphs) {
  auto tmpl = synth::glyph_template(synth::GlyphShape::bowl_stem);
  GrayImage raster(120, 200, 255);
  std::vector<BBox> planted{{10, 10, 16, 16}, {60, 30, 16, 16}, {20, 90, 16, 16},
                            {80, 120, 16, 16}, {40, 170, 16, 16}};
  for (const auto& b : planted) paste(raster, tmpl, b.x, b.y);
  std::vector<Template> templates{{tmpl, ScribeId("A"), ClassId::target}};
  auto anns = bootstrap_annotate(binary_column(raster), templates, 0.8, 0.3);
  ASSERT_EQ(anns.size(), planted.size());
  for (const auto& b : planted) {
    bool found = std::any_of(anns.begin(), anns.end(), [&](const Annotation& a) {
      return iou(a.box, b) >= 0.9 && a.cls == ClassId::target;
    });
    EXPECT_TRUE(found);
  }
  for (const auto& a : anns) {
    EXPECT_EQ(a.origin, Origin::template_match);
    EXPECT_EQ(a.status, Status::pending);
    EXPECT_EQ(a.cycle, 0);
    ASSERT_TRUE(a.confidence);
    EXPECT_GE(*a.confidence, 0.8);
  }
  auto again = bootstrap_annotate(binary_column(raster), templates, 0.8, 0.3, 4);
  EXPECT_EQ(again, anns);
}

TEST(Bootstrap, BlankColumnAndStrictTau) {
  auto tmpl = synth::glyph_template(synth::GlyphShape::crossbar);
  std::vector<Template> templates{{tmpl, ScribeId("A"), ClassId::target}};
  EXPECT_TRUE(bootstrap_annotate(binary_column(GrayImage(80, 80, 255)), templates, 0.5, 0.3).empty());

  // A glyph with one pixel flipped no longer reaches 0.999.
  auto damaged = tmpl;
  damaged.at(7, 7) = static_cast<std::uint8_t>(255 - damaged.at(7, 7));
  GrayImage raster(80, 80, 255);
  paste(raster, tmpl, 5, 5);
  paste(raster, damaged, 50, 50);
  auto anns = bootstrap_annotate(binary_column(raster), templates, 0.999, 0.3);
  ASSERT_EQ(anns.size(), 1u);
  EXPECT_EQ(anns[0].box, (BBox{5, 5, 16, 16}));
}

TEST(Bootstrap, TwoTemplatesKeepTheirLabels) {
  auto t1 = synth::glyph_template(synth::GlyphShape::bowl_stem);
  auto t0 = synth::glyph_template(synth::GlyphShape::bar);
  GrayImage raster(100, 40, 255);
  paste(raster, t1, 4, 4);
  paste(raster, t0, 60, 10);
  std::vector<Template> templates{{t1, ScribeId("A"), ClassId::target},
                                  {t0, ScribeId("B"), ClassId::other}};
  auto anns = bootstrap_annotate(binary_column(raster), templates, 0.95, 0.3);
  ASSERT_EQ(anns.size(), 2u);
  EXPECT_EQ(anns[0].cls, ClassId::target);
  EXPECT_EQ(anns[1].cls, ClassId::other);
}

TEST(Templates, LoadFromSidecar) {
  st::TempDir dir;
  io::write_png(dir / "a.png", synth::glyph_template(synth::GlyphShape::angular));
  std::ofstream(dir / "templates.json") << R"([{"file": "a.png", "scribe": "A", "class": 1}])";
  auto ts = load_templates(dir.path());
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(ts[0].scribe, ScribeId("A"));
  EXPECT_EQ(ts[0].label, ClassId::target);
  EXPECT_EQ(ts[0].pixels.width(), synth::kTemplateSize);
  EXPECT_EQ(code_of([&] { load_templates(dir / "nowhere"); }), ErrorCode::IoError);
}
