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

#include <algorithm>
#include <concepts>
#include <numeric>
#include <vector>

#include "scriptor/core/error.hpp"
#include "scriptor/core/types.hpp"

namespace scriptor {

inline const BBox& box_of(const DetectionRecord& d) noexcept { return d.box; }
inline double score_of(const DetectionRecord& d) noexcept { return d.confidence; }

template <typename T>
concept Scored = requires(const T& t) {
  { box_of(t) } -> std::convertible_to<BBox>;
  { score_of(t) } -> std::convertible_to<double>;
};

/// Greedy non-maximum suppression. Items are visited by descending score
/// (ties by top-left y, then x, then input position); an item is dropped
/// when its IoU with any kept item is >= iou_thresh. Survivors keep their
/// input order.
template <Scored T>
std::vector<T> nms(const std::vector<T>& items, double iou_thresh) {
  if (!(iou_thresh >= 0.0 && iou_thresh < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "nms iou threshold must lie in [0,1)");
  }
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double sa = score_of(items[a]);
    const double sb = score_of(items[b]);
    if (sa != sb) return sa > sb;
    const BBox& ba = box_of(items[a]);
    const BBox& bb = box_of(items[b]);
    return std::tie(ba.y, ba.x) < std::tie(bb.y, bb.x);
  });

  std::vector<char> keep(items.size(), 0);
  std::vector<std::size_t> kept;
  for (const auto idx : order) {
    const BBox& box = box_of(items[idx]);
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return iou(box, box_of(items[k])) >= iou_thresh;
    });
    if (!suppressed) {
      keep[idx] = 1;
      kept.push_back(idx);
    }
  }

  std::vector<T> out;
  out.reserve(kept.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (keep[i]) out.push_back(items[i]);
  }
  return out;
}

}  // namespace scriptor
