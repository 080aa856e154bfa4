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

#include "scriptor/core/types.hpp"

#include <algorithm>
#include <charconv>

#include "scriptor/core/error.hpp"

namespace scriptor {

ManuscriptId::ManuscriptId(std::string name) : name_(std::move(name)) {
  const bool ok = !name_.empty() && std::all_of(name_.begin(), name_.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
  });
  if (!ok) throw Error(ErrorCode::InvalidArgument, "bad manuscript id '" + name_ + "'");
}

ScribeId::ScribeId(std::string code) : code_(std::move(code)) {
  if (code_.size() != 1 || code_[0] < 'A' || code_[0] > 'Z') {
    throw Error(ErrorCode::InvalidArgument, "bad scribe id '" + code_ + "'");
  }
}

std::string_view to_string(Side side) noexcept {
  return side == Side::recto ? "recto" : "verso";
}

Side side_from_string(std::string_view text) {
  if (text == "recto" || text == "r") return Side::recto;
  if (text == "verso" || text == "v") return Side::verso;
  throw Error(ErrorCode::InvalidArgument, "bad page side '" + std::string(text) + "'");
}

char side_letter(Side side) noexcept { return side == Side::recto ? 'r' : 'v'; }

std::string_view to_string(Layout layout) noexcept {
  return layout == Layout::two_column ? "two_column" : "three_column";
}

Layout layout_from_string(std::string_view text) {
  if (text == "two_column") return Layout::two_column;
  if (text == "three_column") return Layout::three_column;
  throw Error(ErrorCode::InvalidArgument, "bad layout '" + std::string(text) + "'");
}

int column_count(Layout layout) noexcept { return layout == Layout::two_column ? 2 : 3; }

std::string ColumnKey::str() const {
  return manuscript.str() + "_" + std::to_string(page) + side_letter(side) + "_c" +
         std::to_string(column);
}

ColumnKey ColumnKey::parse(std::string_view text) {
  auto fail = [&]() -> ColumnKey {
    throw Error(ErrorCode::InvalidArgument, "bad column id '" + std::string(text) + "'");
  };
  const auto col_sep = text.rfind("_c");
  if (col_sep == std::string_view::npos || col_sep == 0) return fail();
  const auto page_sep = text.rfind('_', col_sep - 1);
  if (page_sep == std::string_view::npos || page_sep == 0) return fail();

  const auto page_part = text.substr(page_sep + 1, col_sep - page_sep - 1);
  const auto col_part = text.substr(col_sep + 2);
  if (page_part.size() < 2 || col_part.empty()) return fail();

  ColumnKey key;
  key.manuscript = ManuscriptId(std::string(text.substr(0, page_sep)));
  const char side = page_part.back();
  if (side != 'r' && side != 'v') return fail();
  key.side = side == 'r' ? Side::recto : Side::verso;

  const auto digits = page_part.substr(0, page_part.size() - 1);
  auto [p1, e1] = std::from_chars(digits.data(), digits.data() + digits.size(), key.page);
  auto [p2, e2] = std::from_chars(col_part.data(), col_part.data() + col_part.size(), key.column);
  if (e1 != std::errc{} || p1 != digits.data() + digits.size() || e2 != std::errc{} ||
      p2 != col_part.data() + col_part.size() || key.page < 1 || key.column < 0) {
    return fail();
  }
  return key;
}

std::int64_t intersection_area(const BBox& a, const BBox& b) noexcept {
  const std::int64_t x0 = std::max(a.x, b.x);
  const std::int64_t y0 = std::max(a.y, b.y);
  const std::int64_t x1 = std::min<std::int64_t>(std::int64_t{a.x} + a.w, std::int64_t{b.x} + b.w);
  const std::int64_t y1 = std::min<std::int64_t>(std::int64_t{a.y} + a.h, std::int64_t{b.y} + b.h);
  if (x1 <= x0 || y1 <= y0) return 0;
  return (x1 - x0) * (y1 - y0);
}

double iou(const BBox& a, const BBox& b) noexcept {
  const auto inter = intersection_area(a, b);
  const auto uni = a.area() + b.area() - inter;
  if (uni <= 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

ClassId class_from_int(long long value) {
  if (value != 0 && value != 1) {
    throw Error(ErrorCode::InvalidArgument, "class id must be 0 or 1, got " + std::to_string(value));
  }
  return static_cast<ClassId>(value);
}

std::string_view to_string(Origin origin) noexcept {
  switch (origin) {
    case Origin::template_match: return "template_match";
    case Origin::detector: return "detector";
    case Origin::manual: return "manual";
  }
  return "manual";
}

std::string_view to_string(Status status) noexcept {
  switch (status) {
    case Status::pending: return "pending";
    case Status::accepted: return "accepted";
    case Status::rejected: return "rejected";
    case Status::adjusted: return "adjusted";
  }
  return "pending";
}

Origin origin_from_string(std::string_view text) {
  if (text == "template_match") return Origin::template_match;
  if (text == "detector") return Origin::detector;
  if (text == "manual") return Origin::manual;
  throw Error(ErrorCode::InvalidArgument, "bad origin '" + std::string(text) + "'");
}

Status status_from_string(std::string_view text) {
  if (text == "pending") return Status::pending;
  if (text == "accepted") return Status::accepted;
  if (text == "rejected") return Status::rejected;
  if (text == "adjusted") return Status::adjusted;
  throw Error(ErrorCode::InvalidArgument, "bad status '" + std::string(text) + "'");
}

}  // namespace scriptor
