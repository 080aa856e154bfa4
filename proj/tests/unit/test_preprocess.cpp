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
#include <set>

#include "scriptor/core/error.hpp"
#include "scriptor/preprocess/image_io.hpp"
#include "scriptor/preprocess/manuscript_config.hpp"
#include "scriptor/preprocess/preprocess.hpp"
#include "testing.hpp"

using namespace scriptor;
namespace st = scriptor::testing;
using namespace scriptor::preprocess;

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

RgbImage solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      img.at(x, y, 0) = r;
      img.at(x, y, 1) = g;
      img.at(x, y, 2) = b;
    }
  return img;
}

PageRef page_ref(int w, int h) {
  PageRef p;
  p.manuscript = ManuscriptId("trento");
  p.page_number = 3;
  p.width_px = w;
  p.height_px = h;
  return p;
}

RoiConfig two_cols(int w, int h) {
  RoiConfig cfg{ManuscriptId("trento"), Layout::two_column,
                {BBox{10, 10, w / 2 - 20, h - 20}, BBox{w / 2 + 10, 10, w / 2 - 20, h - 20}}};
  return cfg;
}

}  // namespace

TEST(Crop, TrentoPageGivesTwoColumns) {
  RgbImage page(2832, 4256, 200);
  RoiConfig cfg{ManuscriptId("trento"), Layout::two_column,
                {BBox{200, 300, 1150, 3700}, BBox{1480, 300, 1150, 3700}}};
  auto cols = crop_columns(page, page_ref(2832, 4256), Layout::two_column, cfg);
  ASSERT_EQ(cols.size(), 2u);
  EXPECT_EQ(cols[0].column_index, 0);
  EXPECT_EQ(cols[1].column_index, 1);
  EXPECT_EQ(cols[0].width(), 1150);
  EXPECT_EQ(cols[1].height(), 3700);
  EXPECT_EQ(cols[0].stage, Stage::raw_rgb);
}

TEST(Crop, ThreeColumnLayout) {
  RgbImage page(300, 100, 255);
  RoiConfig cfg{ManuscriptId("avila"), Layout::three_column,
                {BBox{0, 0, 90, 100}, BBox{100, 0, 90, 100}, BBox{200, 0, 100, 100}}};
  auto cols = crop_columns(page, page_ref(300, 100), Layout::three_column, cfg);
  ASSERT_EQ(cols.size(), 3u);
  EXPECT_EQ(cols[2].width(), 100);
}

TEST(Crop, RoiOnePixelPastEdge) {
  RgbImage page(100, 100, 255);
  RoiConfig cfg{ManuscriptId("trento"), Layout::two_column, {BBox{0, 0, 40, 100}, BBox{50, 0, 51, 100}}};
  EXPECT_EQ(code_of([&] { crop_columns(page, page_ref(100, 100), Layout::two_column, cfg); }),
            ErrorCode::RoiOutOfBounds);
}

TEST(Crop, LayoutMismatch) {
  RgbImage page(100, 100, 255);
  auto cfg = two_cols(100, 100);
  EXPECT_EQ(code_of([&] { crop_columns(page, page_ref(100, 100), Layout::three_column, cfg); }),
            ErrorCode::LayoutMismatch);
}

TEST(Crop, ConfigValidation) {
  RoiConfig overlap{ManuscriptId("t"), Layout::two_column, {BBox{0, 0, 60, 10}, BBox{50, 0, 40, 10}}};
  EXPECT_EQ(code_of([&] { overlap.validate(); }), ErrorCode::InvalidConfig);
  RoiConfig count{ManuscriptId("t"), Layout::three_column, {BBox{0, 0, 10, 10}, BBox{20, 0, 10, 10}}};
  EXPECT_EQ(code_of([&] { count.validate(); }), ErrorCode::InvalidConfig);
  RoiConfig order{ManuscriptId("t"), Layout::two_column, {BBox{50, 0, 10, 10}, BBox{0, 0, 10, 10}}};
  EXPECT_EQ(code_of([&] { order.validate(); }), ErrorCode::InvalidConfig);
}

TEST(RemoveRed, Examples) {
  RedRule rule;
  auto red = remove_red(solid(2, 2, 255, 0, 0), rule);
  EXPECT_EQ(red, solid(2, 2, 255, 255, 255));
  auto black = solid(2, 2, 0, 0, 0);
  EXPECT_EQ(remove_red(black, rule), black);
  // Boundary: R = 120, margin exactly 40 is red; 39 is not.
  EXPECT_TRUE(rule.is_red(120, 80, 80));
  EXPECT_FALSE(rule.is_red(120, 81, 10));
  EXPECT_FALSE(rule.is_red(119, 0, 0));
}

TEST(RemoveRed, IdentityWithoutRedAndIdempotent) {
  std::mt19937_64 rng(4);
  RgbImage img(40, 30);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng() % 256);
  RedRule rule;
  auto once = remove_red(img, rule);
  EXPECT_EQ(remove_red(once, rule), once);
  auto gray = solid(5, 5, 128, 128, 128);
  EXPECT_EQ(remove_red(gray, rule), gray);
  EXPECT_EQ(once.width(), img.width());
  EXPECT_EQ(once.height(), img.height());
}

TEST(Gray, LumaExamples) {
  EXPECT_EQ(to_gray(solid(1, 1, 255, 255, 255)).at(0, 0), 255);
  EXPECT_EQ(to_gray(solid(1, 1, 255, 0, 0)).at(0, 0), 76);
  EXPECT_EQ(to_gray(solid(1, 1, 0, 128, 0)).at(0, 0), 75);
  EXPECT_EQ(to_gray(solid(1, 1, 0, 0, 255)).at(0, 0), 29);
}

TEST(Otsu, BimodalHalfAndHalf) {
  GrayImage img(10, 10);
  for (int i = 0; i < 100; ++i) img.data()[static_cast<std::size_t>(i)] = i < 50 ? 30 : 220;
  auto r = otsu_binarize(img);
  EXPECT_GE(r.threshold, 30);
  EXPECT_LT(r.threshold, 220);
  int zeros = 0;
  for (auto v : r.binary.data()) {
    EXPECT_TRUE(v == 0 || v == 255);
    zeros += v == 0;
  }
  EXPECT_EQ(zeros, 50);
}

TEST(Otsu, ConstantImage) {
  GrayImage img(8, 8, 128);
  auto r = otsu_binarize(img);
  EXPECT_EQ(r.threshold, 128);
  for (auto v : r.binary.data()) EXPECT_EQ(v, 0);
}

TEST(Otsu, EmptyImage) {
  EXPECT_EQ(code_of([] { otsu_binarize(GrayImage{}); }), ErrorCode::EmptyImage);
}

TEST(Otsu, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    auto img = i % 2 ? st::random_gray(rng, 64, 64) : st::bimodal_gray(rng, 64, 64);
    EXPECT_EQ(otsu_threshold(img), st::otsu_oracle(img)) << "raster " << i;
  }
}

TEST(Otsu, TwoLevelTieGoesToSmallest) {
  // Every t in [40, 199] splits {40, 200} identically.
  GrayImage img(4, 1);
  img.at(0, 0) = 40;
  img.at(1, 0) = 40;
  img.at(2, 0) = 200;
  img.at(3, 0) = 200;
  EXPECT_EQ(otsu_threshold(img), 40);
}

namespace {

// Parchment page with dark glyph blocks and one red initial per column.
RgbImage synthetic_page(int w, int h, std::vector<BBox>& red_boxes) {
  auto page = solid(w, h, 225, 210, 180);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 40; ++i) {
    int x = static_cast<int>(rng() % static_cast<unsigned>(w - 10));
    int y = static_cast<int>(rng() % static_cast<unsigned>(h - 10));
    for (int yy = 0; yy < 6; ++yy)
      for (int xx = 0; xx < 6; ++xx) {
        auto* p = page.pixel(x + xx, y + yy);
        p[0] = 40;
        p[1] = 30;
        p[2] = 25;
      }
  }
  for (int c = 0; c < 2; ++c) {
    BBox b{c * w / 2 + 15, 15, 12, 12};
    red_boxes.push_back(b);
    for (int yy = 0; yy < b.h; ++yy)
      for (int xx = 0; xx < b.w; ++xx) {
        auto* p = page.pixel(b.x + xx, b.y + yy);
        p[0] = 190;
        p[1] = 20;
        p[2] = 30;
      }
  }
  return page;
}

}  // namespace

TEST(PreprocessPage, RedInitialsVanish) {
  std::vector<BBox> reds;
  auto page = synthetic_page(200, 150, reds);
  auto cfg = two_cols(200, 150);
  auto cols = preprocess_page(page, page_ref(200, 150), Layout::two_column, cfg, RedRule{});
  ASSERT_EQ(cols.size(), 2u);
  for (std::size_t c = 0; c < 2; ++c) {
    EXPECT_EQ(cols[c].stage, Stage::binary);
    const auto& roi = cfg.rois[c];
    const auto& bin = cols[c].gray();
    for (auto v : bin.data()) EXPECT_TRUE(v == 0 || v == 255);
    const auto& r = reds[c];
    for (int y = r.y; y < r.y + r.h; ++y)
      for (int x = r.x; x < r.x + r.w; ++x) EXPECT_EQ(bin.at(x - roi.x, y - roi.y), 255);
  }
}

TEST(PreprocessPage, AllWhitePage) {
  auto page = solid(100, 80, 255, 255, 255);
  auto cols = preprocess_page(page, page_ref(100, 80), Layout::two_column, two_cols(100, 80), RedRule{});
  // A constant column maps to ink by the degenerate rule; downstream sees
  // it as an empty (featureless) column either way.
  for (const auto& c : cols) {
    std::set<int> values(c.gray().data().begin(), c.gray().data().end());
    EXPECT_EQ(values.size(), 1u);
  }
}

TEST(PreprocessPage, EqualsPerColumnComposition) {
  std::vector<BBox> reds;
  auto page = synthetic_page(200, 150, reds);
  auto cfg = two_cols(200, 150);
  RedRule rule;
  auto cols = preprocess_page(page, page_ref(200, 150), Layout::two_column, cfg, rule);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    auto direct = otsu_binarize(to_gray(remove_red(page.crop(cfg.rois[c]), rule))).binary;
    EXPECT_EQ(cols[c].gray(), direct);
  }
}

TEST(ImageIo, PngRoundTrip) {
  st::TempDir dir;
  std::mt19937_64 rng(1);
  auto gray = st::random_gray(rng, 31, 17);
  io::write_png(dir / "g.png", gray);
  EXPECT_EQ(io::read_gray(dir / "g.png"), gray);
  RgbImage rgb(5, 4);
  for (auto& v : rgb.data()) v = static_cast<std::uint8_t>(rng() % 256);
  io::write_png(dir / "sub/c.png", rgb);
  EXPECT_EQ(io::read_rgb(dir / "sub/c.png"), rgb);
  EXPECT_EQ(code_of([&] { io::read_rgb(dir / "missing.png"); }), ErrorCode::IoError);
}

TEST(ManuscriptConfigTest, LoadResolvesAndProcesses) {
  st::TempDir dir;
  std::vector<BBox> reds;
  io::write_png(dir / "p1r.png", synthetic_page(200, 150, reds));
  io::write_png(dir / "p1v.png", synthetic_page(200, 150, reds));
  io::write_png(dir / "p2r.png", synthetic_page(200, 150, reds));
  std::ofstream(dir / "ms.json") << R"({
    "manuscript": "trento", "scribes": ["A", "B"],
    "red_rule": {"red_min": 120, "dominance_margin": 40},
    "layouts": {"two_column": [[10, 10, 80, 130], [110, 10, 80, 130]]},
    "exclude": ["1v"],
    "pages": [
      {"page": 1, "side": "recto", "scribe": "B", "image": "p1r.png"},
      {"page": 1, "side": "verso", "scribe": "B", "image": "p1v.png"},
      {"page": 2, "side": "r", "scribe": "A", "image": "p2r.png"}
    ]})";
  auto cfg = ManuscriptConfig::load(dir / "ms.json");
  EXPECT_TRUE(cfg.is_excluded(1, Side::verso));
  EXPECT_EQ(cfg.pages[0].image, dir / "p1r.png");
  auto again = ManuscriptConfig::from_json(cfg.to_json(), "/");
  EXPECT_EQ(again.pages.size(), 3u);
  EXPECT_EQ(again.roi(Layout::two_column).rois, cfg.roi(Layout::two_column).rois);

  AnnotationStore store(st::fixed_clock);
  auto summary = preprocess_manuscript(cfg, store, dir / "cols", 2);
  EXPECT_EQ(summary.pages, 2);
  EXPECT_EQ(summary.skipped, 1);
  EXPECT_EQ(summary.columns, 4);
  auto cols = store.columns();
  ASSERT_EQ(cols.size(), 4u);
  EXPECT_EQ(cols[0].scribe, ScribeId("B"));
  EXPECT_TRUE(std::filesystem::exists(dir / "cols" / "trento_1r_c0.png"));
  auto col = load_column(cols[0]);
  EXPECT_EQ(col.stage, Stage::binary);
  EXPECT_EQ(col.width(), 80);
}

TEST(ManuscriptConfigTest, RejectsUnknownScribe) {
  auto j = nlohmann::json::parse(R"({"manuscript": "t", "scribes": ["A"],
    "layouts": {"two_column": [[0, 0, 10, 10], [20, 0, 10, 10]]},
    "pages": [{"page": 1, "side": "recto", "scribe": "Q", "image": "x.png"}]})");
  EXPECT_EQ(code_of([&] { ManuscriptConfig::from_json(j, "."); }), ErrorCode::InvalidConfig);
}
