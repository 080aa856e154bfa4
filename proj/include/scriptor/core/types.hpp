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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace scriptor {

/// Lowercase manuscript identifier such as "trento" or "avila".
class ManuscriptId {
 public:
  ManuscriptId() = default;
  explicit ManuscriptId(std::string name);

  const std::string& str() const noexcept { return name_; }
  bool empty() const noexcept { return name_.empty(); }

  auto operator<=>(const ManuscriptId&) const = default;

 private:
  std::string name_;
};

/// Single uppercase letter naming a scribal hand within one manuscript.
class ScribeId {
 public:
  ScribeId() = default;
  explicit ScribeId(std::string code);

  const std::string& str() const noexcept { return code_; }

  auto operator<=>(const ScribeId&) const = default;

 private:
  std::string code_;
};

enum class Side { recto, verso };

std::string_view to_string(Side side) noexcept;
Side side_from_string(std::string_view text);
char side_letter(Side side) noexcept;

enum class Layout { two_column, three_column };

std::string_view to_string(Layout layout) noexcept;
Layout layout_from_string(std::string_view text);
int column_count(Layout layout) noexcept;

struct PageRef {
  ManuscriptId manuscript;
  int page_number = 1;
  Side side = Side::recto;
  std::optional<ScribeId> scribe;
  int width_px = 0;
  int height_px = 0;
};

/// Identity of one text column: manuscript, page, side and 0-based column
/// index. Renders as "{manuscript}_{page}{r|v}_c{index}".
struct ColumnKey {
  ManuscriptId manuscript;
  int page = 1;
  Side side = Side::recto;
  int column = 0;

  std::string str() const;
  static ColumnKey parse(std::string_view text);

  auto operator<=>(const ColumnKey&) const = default;
};

/// Axis-aligned pixel box, origin at the image top-left, y down.
struct BBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  std::int64_t area() const noexcept { return static_cast<std::int64_t>(w) * h; }
  bool positive() const noexcept { return w > 0 && h > 0 && x >= 0 && y >= 0; }
  bool fits(int width, int height) const noexcept {
    return positive() && static_cast<std::int64_t>(x) + w <= width &&
           static_cast<std::int64_t>(y) + h <= height;
  }

  auto operator<=>(const BBox&) const = default;
};

std::int64_t intersection_area(const BBox& a, const BBox& b) noexcept;

/// Intersection over union; 0 when both boxes have zero area.
double iou(const BBox& a, const BBox& b) noexcept;

/// 1 = target character by the target scribe, 0 = any other hand.
enum class ClassId : int { other = 0, target = 1 };

ClassId class_from_int(long long value);
inline int to_int(ClassId c) noexcept { return static_cast<int>(c); }

enum class Origin { template_match, detector, manual };
enum class Status { pending, accepted, rejected, adjusted };

std::string_view to_string(Origin origin) noexcept;
std::string_view to_string(Status status) noexcept;
Origin origin_from_string(std::string_view text);
Status status_from_string(std::string_view text);

inline bool is_decided(Status s) noexcept { return s != Status::pending; }
inline bool is_positive(Status s) noexcept {
  return s == Status::accepted || s == Status::adjusted;
}

struct AnnotationId {
  std::uint64_t value = 0;
  auto operator<=>(const AnnotationId&) const = default;
};

struct Annotation {
  AnnotationId id;
  ColumnKey column;
  BBox box;
  ClassId cls = ClassId::target;
  Origin origin = Origin::template_match;
  Status status = Status::pending;
  int cycle = 0;
  std::optional<BBox> adjusted_box;
  std::optional<double> confidence;
  std::optional<std::string> model_id;

  /// The replacement box for adjusted entries, the original otherwise.
  const BBox& effective_box() const noexcept { return adjusted_box ? *adjusted_box : box; }

  bool operator==(const Annotation&) const = default;
};

struct DetectionRecord {
  ColumnKey column;
  BBox box;
  ClassId cls = ClassId::target;
  double confidence = 0.0;
  std::string model_id;

  bool operator==(const DetectionRecord&) const = default;
};

/// A registered column raster: its geometry, layout and scribe label.
struct ColumnInfo {
  ColumnKey key;
  int width = 0;
  int height = 0;
  Layout layout = Layout::two_column;
  std::optional<ScribeId> scribe;
  std::string image;  // path of the binarized column PNG, may be empty

  bool operator==(const ColumnInfo&) const = default;
};

}  // namespace scriptor
