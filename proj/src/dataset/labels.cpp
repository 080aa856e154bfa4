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

#include "scriptor/dataset/labels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "scriptor/core/error.hpp"

namespace scriptor::dataset {

namespace {

constexpr double kSlack = 1e-6;

std::string format_line(const LabelLine& l) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d %.6f %.6f %.6f %.6f\n", to_int(l.cls), l.cx, l.cy, l.w, l.h);
  return buf;
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::MalformedLine, "label line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

LabelLine normalize(const LabelledBox& b, int img_w, int img_h) {
  const double W = img_w;
  const double H = img_h;
  return {b.cls, (b.box.x + b.box.w / 2.0) / W, (b.box.y + b.box.h / 2.0) / H, b.box.w / W,
          b.box.h / H};
}

std::string write_labels(std::span<const Annotation> annotations, int img_w, int img_h) {
  if (img_w <= 0 || img_h <= 0) throw Error(ErrorCode::InvalidArgument, "image has no area");
  std::vector<LabelledBox> boxes;
  boxes.reserve(annotations.size());
  for (const auto& a : annotations) {
    if (!is_positive(a.status)) {
      throw Error(ErrorCode::UndecidedAnnotation, "annotation " + std::to_string(a.id.value) +
                                                      " is " + std::string(to_string(a.status)));
    }
    if (!a.effective_box().fits(img_w, img_h)) {
      throw Error(ErrorCode::BoxOutOfBounds, "annotation " + std::to_string(a.id.value) +
                                                 " exceeds the image");
    }
    boxes.push_back({a.cls, a.effective_box()});
  }
  std::sort(boxes.begin(), boxes.end(), [](const LabelledBox& l, const LabelledBox& r) {
    return std::tie(l.box.y, l.box.x, l.box.w, l.box.h, l.cls) <
           std::tie(r.box.y, r.box.x, r.box.w, r.box.h, r.cls);
  });
  std::string out;
  for (const auto& b : boxes) out += format_line(normalize(b, img_w, img_h));
  return out;
}

std::vector<LabelledBox> read_labels(std::string_view text, int img_w, int img_h) {
  if (img_w <= 0 || img_h <= 0) throw Error(ErrorCode::InvalidArgument, "image has no area");
  std::vector<LabelledBox> out;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string f; fields >> f;) parts.push_back(f);
    if (parts.size() != 5) malformed(line_no, "expected 5 fields, got " + std::to_string(parts.size()));

    long long cls = 0;
    double v[4];
    try {
      std::size_t used = 0;
      cls = std::stoll(parts[0], &used);
      if (used != parts[0].size()) malformed(line_no, "class is not an integer");
      for (int i = 0; i < 4; ++i) {
        v[i] = std::stod(parts[i + 1], &used);
        if (used != parts[i + 1].size()) malformed(line_no, "bad number '" + parts[i + 1] + "'");
      }
    } catch (const std::logic_error&) {
      malformed(line_no, "unparseable number");
    }
    if (cls != 0 && cls != 1) malformed(line_no, "unknown class " + parts[0]);
    for (double x : v) {
      if (!(x >= 0.0 && x <= 1.0)) malformed(line_no, "value outside [0,1]");
    }
    const double cx = v[0], cy = v[1], w = v[2], h = v[3];
    if (cx - w / 2 < -kSlack || cx + w / 2 > 1 + kSlack || cy - h / 2 < -kSlack ||
        cy + h / 2 > 1 + kSlack) {
      malformed(line_no, "box extends past the image");
    }

    BBox b;
    b.x = static_cast<int>(std::lround((cx - w / 2) * img_w));
    b.y = static_cast<int>(std::lround((cy - h / 2) * img_h));
    b.w = static_cast<int>(std::lround(w * img_w));
    b.h = static_cast<int>(std::lround(h * img_h));
    b.x = std::clamp(b.x, 0, img_w - 1);
    b.y = std::clamp(b.y, 0, img_h - 1);
    b.w = std::clamp(b.w, 1, img_w - b.x);
    b.h = std::clamp(b.h, 1, img_h - b.y);
    out.push_back({static_cast<ClassId>(cls), b});
  }
  return out;
}

}  // namespace scriptor::dataset
