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

#include "scriptor/preprocess/image_io.hpp"

#include <algorithm>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "scriptor/core/error.hpp"

namespace scriptor::io {

namespace {

cv::Mat load(const std::filesystem::path& path, int flags) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::IoError, "no such image: " + path.string());
  }
  cv::Mat m = cv::imread(path.string(), flags);
  if (m.empty()) throw Error(ErrorCode::IoError, "cannot decode image: " + path.string());
  return m;
}

void ensure_parent(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
}

}  // namespace

RgbImage read_rgb(const std::filesystem::path& path) {
  cv::Mat bgr = load(path, cv::IMREAD_COLOR);
  RgbImage out(bgr.cols, bgr.rows);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* src = bgr.ptr<std::uint8_t>(y);
    auto dst = out.row(y);
    for (int x = 0; x < bgr.cols; ++x) {
      dst[3 * x] = src[3 * x + 2];
      dst[3 * x + 1] = src[3 * x + 1];
      dst[3 * x + 2] = src[3 * x];
    }
  }
  return out;
}

GrayImage read_gray(const std::filesystem::path& path) {
  cv::Mat gray = load(path, cv::IMREAD_GRAYSCALE);
  GrayImage out(gray.cols, gray.rows);
  for (int y = 0; y < gray.rows; ++y) {
    const auto* src = gray.ptr<std::uint8_t>(y);
    std::copy(src, src + gray.cols, out.row(y).begin());
  }
  return out;
}

void write_png(const std::filesystem::path& path, const GrayImage& img) {
  ensure_parent(path);
  cv::Mat m(img.height(), img.width(), CV_8UC1, const_cast<std::uint8_t*>(img.data().data()));
  if (!cv::imwrite(path.string(), m)) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

void write_png(const std::filesystem::path& path, const RgbImage& img) {
  ensure_parent(path);
  cv::Mat bgr(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    const auto src = img.row(y);
    auto* dst = bgr.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) {
      dst[3 * x] = src[3 * x + 2];
      dst[3 * x + 1] = src[3 * x + 1];
      dst[3 * x + 2] = src[3 * x];
    }
  }
  if (!cv::imwrite(path.string(), bgr)) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
  cv::Mat m(img.height(), img.width(), CV_8UC1, const_cast<std::uint8_t*>(img.data().data()));
  std::vector<std::uint8_t> buf;
  if (!cv::imencode(".png", m, buf)) throw Error(ErrorCode::IoError, "png encoding failed");
  return buf;
}

}  // namespace scriptor::io
