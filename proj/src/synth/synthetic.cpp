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

#include "scriptor/synth/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

#include "scriptor/core/error.hpp"
#include "scriptor/preprocess/image_io.hpp"

namespace scriptor::synth {
namespace {

constexpr int kCell = 24;
constexpr int kMargin = 4;

// splitmix64, so pages do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  int uniform(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

std::uint8_t clamp8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

void ink(GrayImage& m, int x, int y) {
  if (x >= 0 && y >= 0 && x < m.width() && y < m.height()) m.at(x, y) = 0;
}

}  // namespace

GrayImage glyph_mask(GlyphShape shape) {
  GrayImage m(kGlyphSize, kGlyphSize, 255);
  const int n = kGlyphSize;
  switch (shape) {
    case GlyphShape::bowl_stem: {
      // Ring on the left with a full-height stem on the right.
      const double cx = 5.5, cy = 8.0;
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
          double r = std::hypot(x - cx, y - cy);
          if (r >= 3.2 && r <= 5.2) ink(m, x, y);
        }
      for (int y = 1; y < n; ++y) {
        ink(m, 11, y);
        ink(m, 12, y);
      }
      break;
    }
    case GlyphShape::angular: {
      // Pointed arch with a crossbar.
      for (int y = 0; y < n; ++y) {
        int half = y / 2;
        ink(m, 6 - half, y);
        ink(m, 7 - half, y);
        ink(m, 6 + half, y);
        ink(m, 7 + half, y);
      }
      for (int x = 3; x <= 10; ++x) {
        ink(m, x, 8);
        ink(m, x, 9);
      }
      break;
    }
    case GlyphShape::bar:
      for (int y = 0; y < n; ++y) {
        ink(m, 6, y);
        ink(m, 7, y);
      }
      for (int x = 3; x <= 10; ++x) {
        ink(m, x, n - 1);
        ink(m, x, n - 2);
      }
      break;
    case GlyphShape::crossbar:
      for (int x = 1; x < n - 1; ++x) {
        ink(m, x, 3);
        ink(m, x, 4);
        ink(m, x, 9);
        ink(m, x, 10);
      }
      for (int y = 3; y <= 10; ++y) {
        ink(m, 1, y);
        ink(m, 2, y);
      }
      break;
  }
  return m;
}

GrayImage glyph_template(GlyphShape shape) {
  auto mask = glyph_mask(shape);
  GrayImage t(kTemplateSize, kTemplateSize, 255);
  for (int y = 0; y < kGlyphSize; ++y)
    for (int x = 0; x < kGlyphSize; ++x) t.at(x + 1, y + 1) = mask.at(x, y);
  return t;
}

std::vector<BBox> column_rois(const SynthOptions& o) {
  const int top = 40;
  const int h = o.page_height - 2 * top;
  const int w = (o.page_width - 80) / 2;
  return {BBox{30, top, w, h}, BBox{50 + w, top, w, h}};
}

const ScribeId& scribe_of_page(const SynthOptions& o, int page) {
  return o.other_every > 0 && page % o.other_every == 0 ? o.other_scribe : o.target_scribe;
}

RgbImage render_page(const SynthOptions& o, int page, Side side, std::vector<PlantedGlyph>* truth) {
  Rng rng(o.seed * 1000003ULL + static_cast<std::uint64_t>(page) * 2 + (side == Side::verso));
  RgbImage img(o.page_width, o.page_height);

  // Parchment: warm base with low-frequency shading and pixel noise.
  const double phase = rng.unit() * 6.28;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      int shade = static_cast<int>(8.0 * std::sin(phase + x * 0.013 + y * 0.007));
      int noise = rng.uniform(-9, 9);
      auto* p = img.pixel(x, y);
      p[0] = clamp8(226 + shade + noise);
      p[1] = clamp8(211 + shade + noise);
      p[2] = clamp8(182 + shade + noise);
    }

  const ScribeId& scribe = scribe_of_page(o, page);
  const bool is_target_hand = scribe == o.target_scribe;
  const auto letter = glyph_mask(is_target_hand ? GlyphShape::bowl_stem : GlyphShape::angular);
  const auto bar = glyph_mask(GlyphShape::bar);
  const auto crossbar = glyph_mask(GlyphShape::crossbar);

  auto stamp = [&](const GrayImage& mask, int px, int py) {
    const int tone = rng.uniform(35, 70);
    for (int y = 0; y < mask.height(); ++y)
      for (int x = 0; x < mask.width(); ++x) {
        if (mask.at(x, y) != 0) continue;
        if (rng.unit() < 0.04) continue;  // faded ink
        auto* p = img.pixel(px + x, py + y);
        int n = rng.uniform(-8, 8);
        p[0] = clamp8(tone + 20 + n);
        p[1] = clamp8(tone + 5 + n);
        p[2] = clamp8(tone + n);
      }
  };

  const auto rois = column_rois(o);
  for (int c = 0; c < static_cast<int>(rois.size()); ++c) {
    const BBox& roi = rois[c];
    const int gx = roi.w / kCell;
    const int gy = roi.h / kCell;
    std::vector<int> cells(static_cast<std::size_t>(gx * gy));
    std::iota(cells.begin(), cells.end(), 0);
    for (std::size_t i = cells.size(); i > 1; --i)
      std::swap(cells[i - 1], cells[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(i) - 1))]);
    const int needed = o.letters_per_column + o.others_per_column + o.red_per_column;
    if (needed > static_cast<int>(cells.size()))
      throw Error(ErrorCode::InvalidConfig, "too many glyphs for the column size");

    std::size_t next = 0;
    auto place = [&](int cell) {
      int cx = roi.x + (cell % gx) * kCell + kMargin + rng.uniform(0, kMargin);
      int cy = roi.y + (cell / gx) * kCell + kMargin + rng.uniform(0, kMargin);
      return std::pair{cx, cy};
    };
    ColumnKey key{o.manuscript, page, side, c};
    for (int i = 0; i < o.letters_per_column; ++i) {
      auto [x, y] = place(cells[next++]);
      stamp(letter, x, y);
      if (truth)
        truth->push_back(PlantedGlyph{key, BBox{x - 1 - roi.x, y - 1 - roi.y, kTemplateSize, kTemplateSize},
                                      is_target_hand ? ClassId::target : ClassId::other, scribe});
    }
    for (int i = 0; i < o.others_per_column; ++i) {
      auto [x, y] = place(cells[next++]);
      stamp(i % 2 == 0 ? bar : crossbar, x, y);
    }
    for (int i = 0; i < o.red_per_column; ++i) {
      // Rubricated initial: a filled red block with a darker red outline.
      auto [x, y] = place(cells[next++]);
      for (int yy = 0; yy < kGlyphSize + 2; ++yy)
        for (int xx = 0; xx < kGlyphSize + 2; ++xx) {
          bool edge = xx < 2 || yy < 2 || xx >= kGlyphSize || yy >= kGlyphSize;
          auto* p = img.pixel(x - 1 + xx, y - 1 + yy);
          int n = rng.uniform(-10, 10);
          p[0] = clamp8((edge ? 180 : 205) + n);
          p[1] = clamp8((edge ? 25 : 45) + n);
          p[2] = clamp8((edge ? 30 : 40) + n);
        }
    }
  }

  // Stray specks anywhere on the leaf.
  for (int i = 0; i < 120; ++i) {
    int x = rng.uniform(0, o.page_width - 1);
    int y = rng.uniform(0, o.page_height - 1);
    auto* p = img.pixel(x, y);
    p[0] = 90;
    p[1] = 70;
    p[2] = 60;
  }
  return img;
}

SynthManuscript generate(const SynthOptions& o, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  if (o.pages < 1) throw Error(ErrorCode::InvalidConfig, "need at least one page");
  fs::create_directories(out_dir / "pages");
  fs::create_directories(out_dir / "templates");

  preprocess::ManuscriptConfig cfg;
  cfg.manuscript = o.manuscript;
  cfg.scribes = {o.target_scribe, o.other_scribe};
  preprocess::RoiConfig roi;
  roi.manuscript = o.manuscript;
  roi.layout = Layout::two_column;
  roi.rois = column_rois(o);
  cfg.layouts[Layout::two_column] = roi;

  std::vector<PlantedGlyph> truth;
  for (int page = 1; page <= o.pages; ++page)
    for (Side side : {Side::recto, Side::verso}) {
      auto img = render_page(o, page, side, &truth);
      auto rel = fs::path("pages") / (std::to_string(page) + side_letter(side) + ".png");
      io::write_png(out_dir / rel, img);
      cfg.pages.push_back(preprocess::PageEntry{page, side, Layout::two_column,
                                                scribe_of_page(o, page), rel});
    }

  const auto config_path = out_dir / "manuscript.json";
  {
    std::ofstream out(config_path);
    out << cfg.to_json().dump(2) << "\n";
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + config_path.string());
  }

  const auto tdir = out_dir / "templates";
  io::write_png(tdir / "letter_target.png", glyph_template(GlyphShape::bowl_stem));
  io::write_png(tdir / "letter_other.png", glyph_template(GlyphShape::angular));
  nlohmann::json sidecar = nlohmann::json::array();
  sidecar.push_back({{"file", "letter_target.png"}, {"scribe", o.target_scribe.str()}, {"class", 1}});
  sidecar.push_back({{"file", "letter_other.png"}, {"scribe", o.other_scribe.str()}, {"class", 0}});
  {
    std::ofstream out(tdir / "templates.json");
    out << sidecar.dump(2) << "\n";
  }

  nlohmann::json tj = nlohmann::json::array();
  for (const auto& g : truth)
    tj.push_back({{"column", g.column.str()},
                  {"x", g.box.x},
                  {"y", g.box.y},
                  {"w", g.box.w},
                  {"h", g.box.h},
                  {"class", to_int(g.cls)},
                  {"scribe", g.scribe.str()}});
  {
    std::ofstream out(out_dir / "truth.json");
    out << tj.dump() << "\n";
  }

  SynthManuscript m;
  m.config = preprocess::ManuscriptConfig::load(config_path);
  m.config_path = config_path;
  m.template_dir = tdir;
  m.truth = std::move(truth);
  return m;
}

}  // namespace scriptor::synth
