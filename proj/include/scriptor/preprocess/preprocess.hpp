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
#include <variant>
#include <vector>

#include "scriptor/core/image.hpp"
#include "scriptor/core/types.hpp"

namespace scriptor::preprocess {

enum class Stage { raw_rgb, red_removed, gray, binary };

/// One cropped text column and the page it came from.
struct ColumnImage {
  PageRef page;
  int column_index = 0;
  Layout layout = Layout::two_column;
  Stage stage = Stage::raw_rgb;
  std::variant<RgbImage, GrayImage> pixels;

  ColumnKey key() const { return {page.manuscript, page.page_number, page.side, column_index}; }
  int width() const;
  int height() const;
  /// The raster of a gray or binary column; throws for RGB stages.
  const GrayImage& gray() const;
};

/// Manually chosen column regions for one manuscript layout, left to right.
struct RoiConfig {
  ManuscriptId manuscript;
  Layout layout = Layout::two_column;
  std::vector<BBox> rois;

  /// Count matches the layout, boxes are positive, ordered left to right
  /// and pairwise disjoint. Throws InvalidConfig.
  void validate() const;
};

/// A pixel is red when R >= red_min and R - max(G, B) >= dominance_margin.
struct RedRule {
  int red_min = 120;
  int dominance_margin = 40;

  void validate() const;
  bool is_red(std::uint8_t r, std::uint8_t g, std::uint8_t b) const noexcept;
};

struct OtsuResult {
  GrayImage binary;
  int threshold = 0;
};

/// Crops the configured regions. `page_layout` is the layout the page was
/// catalogued with; it must equal the config's.
std::vector<ColumnImage> crop_columns(const RgbImage& page_raster, const PageRef& page,
                                      Layout page_layout, const RoiConfig& cfg);

RgbImage remove_red(const RgbImage& img, const RedRule& rule);

/// Luma round(0.299 R + 0.587 G + 0.114 B).
GrayImage to_gray(const RgbImage& img);

/// Threshold maximizing between-class variance over the 256-bin histogram,
/// ties resolved to the smallest threshold. Constant images yield the
/// constant as threshold.
int otsu_threshold(const GrayImage& img);

/// Pixels <= threshold become ink (0), the rest background (255).
OtsuResult otsu_binarize(const GrayImage& img);

/// crop_columns, then remove_red, to_gray and otsu_binarize per column.
std::vector<ColumnImage> preprocess_page(const RgbImage& page_raster, const PageRef& page,
                                         Layout page_layout, const RoiConfig& cfg,
                                         const RedRule& rule);

}  // namespace scriptor::preprocess
