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

#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

#include "scriptor/core/types.hpp"

namespace scriptor {

/// Row-major 8-bit raster with interleaved channels.
template <int Channels>
class Image {
 public:
  static_assert(Channels == 1 || Channels == 3);
  static constexpr int channels = Channels;

  Image() = default;
  Image(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * height * Channels, fill) {
    assert(width >= 0 && height >= 0);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return width_ == 0 || height_ == 0; }

  std::uint8_t* pixel(int x, int y) noexcept { return data_.data() + offset(x, y); }
  const std::uint8_t* pixel(int x, int y) const noexcept { return data_.data() + offset(x, y); }

  std::uint8_t& at(int x, int y, int c = 0) noexcept { return data_[offset(x, y) + c]; }
  std::uint8_t at(int x, int y, int c = 0) const noexcept { return data_[offset(x, y) + c]; }

  std::span<std::uint8_t> row(int y) noexcept {
    return {data_.data() + offset(0, y), static_cast<std::size_t>(width_) * Channels};
  }
  std::span<const std::uint8_t> row(int y) const noexcept {
    return {data_.data() + offset(0, y), static_cast<std::size_t>(width_) * Channels};
  }

  std::span<std::uint8_t> data() noexcept { return data_; }
  std::span<const std::uint8_t> data() const noexcept { return data_; }

  /// Copies the region `box`, which must lie inside the image.
  Image crop(const BBox& box) const {
    assert(box.fits(width_, height_));
    Image out(box.w, box.h);
    for (int y = 0; y < box.h; ++y) {
      const auto src = row(box.y + y).subspan(static_cast<std::size_t>(box.x) * Channels,
                                              static_cast<std::size_t>(box.w) * Channels);
      std::copy(src.begin(), src.end(), out.row(y).begin());
    }
    return out;
  }

  bool operator==(const Image&) const = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * Channels;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

using GrayImage = Image<1>;
using RgbImage = Image<3>;

}  // namespace scriptor
