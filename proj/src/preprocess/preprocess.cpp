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

#include "scriptor/preprocess/preprocess.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "scriptor/core/error.hpp"

namespace scriptor::preprocess {

namespace {

using u128 = unsigned __int128;

// 128 x 64 -> 192 bit product, compared lexicographically as (hi, lo).
struct Wide {
  std::uint64_t hi = 0;
  u128 lo = 0;
};

Wide mul(u128 a, std::uint64_t b) {
  const u128 a_lo = static_cast<std::uint64_t>(a);
  const u128 a_hi = a >> 64;
  const u128 p_lo = a_lo * b;
  const u128 p_hi = a_hi * b + (p_lo >> 64);
  Wide w;
  w.lo = (p_hi << 64) | static_cast<std::uint64_t>(p_lo);
  w.hi = static_cast<std::uint64_t>(p_hi >> 64);
  return w;
}

bool greater(const Wide& a, const Wide& b) {
  return a.hi != b.hi ? a.hi > b.hi : a.lo > b.lo;
}

// Between-class variance for a split is proportional to
// (n1*s0 - n0*s1)^2 / (n0*n1). Candidates are compared exactly by
// cross-multiplying, so ties are genuine ties.
struct Split {
  u128 numerator = 0;        // (n1*s0 - n0*s1)^2
  std::uint64_t denominator = 1;  // n0*n1, 1 for empty classes
};

}  // namespace

int ColumnImage::width() const {
  return std::visit([](const auto& img) { return img.width(); }, pixels);
}

int ColumnImage::height() const {
  return std::visit([](const auto& img) { return img.height(); }, pixels);
}

const GrayImage& ColumnImage::gray() const {
  if (const auto* g = std::get_if<GrayImage>(&pixels)) return *g;
  throw Error(ErrorCode::InvalidArgument, "column " + key().str() + " is not a gray raster");
}

void RoiConfig::validate() const {
  if (static_cast<int>(rois.size()) != column_count(layout)) {
    throw Error(ErrorCode::InvalidConfig,
                std::string(to_string(layout)) + " needs " + std::to_string(column_count(layout)) +
                    " rois, got " + std::to_string(rois.size()));
  }
  for (std::size_t i = 0; i < rois.size(); ++i) {
    if (!rois[i].positive()) throw Error(ErrorCode::InvalidConfig, "roi with non-positive extent");
    if (i > 0 && rois[i].x <= rois[i - 1].x) {
      throw Error(ErrorCode::InvalidConfig, "rois must be ordered left to right");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (intersection_area(rois[i], rois[j]) > 0) {
        throw Error(ErrorCode::InvalidConfig, "rois overlap");
      }
    }
  }
}

void RedRule::validate() const {
  if (red_min < 0 || red_min > 255 || dominance_margin < 0 || dominance_margin > 255) {
    throw Error(ErrorCode::InvalidConfig, "red rule parameters must lie in [0,255]");
  }
}

bool RedRule::is_red(std::uint8_t r, std::uint8_t g, std::uint8_t b) const noexcept {
  return r >= red_min && r - std::max(g, b) >= dominance_margin;
}

std::vector<ColumnImage> crop_columns(const RgbImage& page_raster, const PageRef& page,
                                      Layout page_layout, const RoiConfig& cfg) {
  cfg.validate();
  if (page_layout != cfg.layout) {
    throw Error(ErrorCode::LayoutMismatch, "page is " + std::string(to_string(page_layout)) +
                                               ", config is " + std::string(to_string(cfg.layout)));
  }
  for (const auto& roi : cfg.rois) {
    if (!roi.fits(page_raster.width(), page_raster.height())) {
      throw Error(ErrorCode::RoiOutOfBounds,
                  "roi (" + std::to_string(roi.x) + "," + std::to_string(roi.y) + "," +
                      std::to_string(roi.w) + "," + std::to_string(roi.h) + ") exceeds " +
                      std::to_string(page_raster.width()) + "x" + std::to_string(page_raster.height()));
    }
  }
  std::vector<ColumnImage> out;
  out.reserve(cfg.rois.size());
  for (std::size_t i = 0; i < cfg.rois.size(); ++i) {
    ColumnImage col;
    col.page = page;
    col.column_index = static_cast<int>(i);
    col.layout = page_layout;
    col.stage = Stage::raw_rgb;
    col.pixels = page_raster.crop(cfg.rois[i]);
    out.push_back(std::move(col));
  }
  return out;
}

RgbImage remove_red(const RgbImage& img, const RedRule& rule) {
  RgbImage out = img;
  auto data = out.data();
  for (std::size_t i = 0; i < data.size(); i += 3) {
    if (rule.is_red(data[i], data[i + 1], data[i + 2])) {
      data[i] = data[i + 1] = data[i + 2] = 255;
    }
  }
  return out;
}

GrayImage to_gray(const RgbImage& img) {
  GrayImage out(img.width(), img.height());
  const auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0, j = 0; j < dst.size(); i += 3, ++j) {
    const int luma = (299 * src[i] + 587 * src[i + 1] + 114 * src[i + 2] + 500) / 1000;
    dst[j] = static_cast<std::uint8_t>(std::min(luma, 255));
  }
  return out;
}

int otsu_threshold(const GrayImage& img) {
  if (img.empty()) throw Error(ErrorCode::EmptyImage, "cannot binarize an empty raster");

  std::array<std::uint64_t, 256> hist{};
  for (auto v : img.data()) ++hist[v];

  const auto first = std::find_if(hist.begin(), hist.end(), [](auto c) { return c > 0; });
  const auto last = std::find_if(hist.rbegin(), hist.rend(), [](auto c) { return c > 0; });
  if (first == last.base() - 1) return static_cast<int>(first - hist.begin());

  std::uint64_t n_total = 0;
  std::uint64_t s_total = 0;
  for (int v = 0; v < 256; ++v) {
    n_total += hist[v];
    s_total += hist[v] * static_cast<std::uint64_t>(v);
  }
  // keeps (n1*s0 - n0*s1)^2 within 128 bits
  if (n_total >= (std::uint64_t{1} << 28)) {
    throw Error(ErrorCode::InvalidArgument, "raster too large for exact Otsu search");
  }

  int best_t = 0;
  Split best;
  std::uint64_t n0 = 0;
  std::uint64_t s0 = 0;
  for (int t = 0; t < 256; ++t) {
    n0 += hist[t];
    s0 += hist[t] * static_cast<std::uint64_t>(t);
    const std::uint64_t n1 = n_total - n0;
    const std::uint64_t s1 = s_total - s0;
    Split cur;
    if (n0 > 0 && n1 > 0) {
      const __int128 diff = static_cast<__int128>(n1) * s0 - static_cast<__int128>(n0) * s1;
      const u128 mag = static_cast<u128>(diff < 0 ? -diff : diff);
      cur.numerator = mag * mag;
      cur.denominator = n0 * n1;
    }
    // cur > best  <=>  cur.num * best.den > best.num * cur.den
    if (greater(mul(cur.numerator, best.denominator), mul(best.numerator, cur.denominator))) {
      best = cur;
      best_t = t;
    }
  }
  return best_t;
}

OtsuResult otsu_binarize(const GrayImage& img) {
  OtsuResult result;
  result.threshold = otsu_threshold(img);
  result.binary = GrayImage(img.width(), img.height());
  const auto src = img.data();
  auto dst = result.binary.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = src[i] <= result.threshold ? 0 : 255;
  }
  return result;
}

std::vector<ColumnImage> preprocess_page(const RgbImage& page_raster, const PageRef& page,
                                         Layout page_layout, const RoiConfig& cfg,
                                         const RedRule& rule) {
  rule.validate();
  auto columns = crop_columns(page_raster, page, page_layout, cfg);
  for (auto& col : columns) {
    const auto& rgb = std::get<RgbImage>(col.pixels);
    col.pixels = otsu_binarize(to_gray(remove_red(rgb, rule))).binary;
    col.stage = Stage::binary;
  }
  return columns;
}

}  // namespace scriptor::preprocess
