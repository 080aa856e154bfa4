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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scriptor/core/types.hpp"

namespace scriptor::dataset {

/// One "class cx cy w h" line, coordinates normalized by the image size.
struct LabelLine {
  ClassId cls = ClassId::target;
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
};

struct LabelledBox {
  ClassId cls = ClassId::target;
  BBox box;

  bool operator==(const LabelledBox&) const = default;
};

LabelLine normalize(const LabelledBox& box, int img_w, int img_h);

/// Accepted or adjusted annotations of one column as detector label text,
/// one line per annotation with 6 decimals, ordered by (y, x). Throws
/// UndecidedAnnotation for pending or rejected input.
std::string write_labels(std::span<const Annotation> annotations, int img_w, int img_h);

/// Inverse of write_labels; pixel boxes are rounded to the nearest integer.
/// Throws MalformedLine on bad field counts, values outside [0,1] or an
/// unknown class.
std::vector<LabelledBox> read_labels(std::string_view text, int img_w, int img_h);

}  // namespace scriptor::dataset
