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

#include "scriptor/match/template_matcher.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

#include <json.hpp>

#include "scriptor/core/error.hpp"
#include "scriptor/core/parallel.hpp"
#include "scriptor/match/nms.hpp"
#include "scriptor/preprocess/image_io.hpp"

namespace scriptor::match {

namespace {

struct TemplateStats {
  std::int64_t n = 0;
  std::int64_t sum = 0;
  std::int64_t var_n = 0;  // n * sum(T^2) - sum(T)^2
};

TemplateStats template_stats(const GrayImage& tmpl) {
  TemplateStats s;
  s.n = static_cast<std::int64_t>(tmpl.width()) * tmpl.height();
  std::int64_t sq = 0;
  for (auto v : tmpl.data()) {
    s.sum += v;
    sq += static_cast<std::int64_t>(v) * v;
  }
  s.var_n = s.n * sq - s.sum * s.sum;
  return s;
}

// Summed-area tables of I and I^2 with a zero top row and left column.
struct Integrals {
  int stride = 0;
  std::vector<std::int64_t> sum;
  std::vector<std::int64_t> sq;

  explicit Integrals(const GrayImage& img)
      : stride(img.width() + 1),
        sum(static_cast<std::size_t>(img.width() + 1) * (img.height() + 1), 0),
        sq(sum.size(), 0) {
    for (int y = 0; y < img.height(); ++y) {
      std::int64_t row_sum = 0;
      std::int64_t row_sq = 0;
      const auto row = img.row(y);
      for (int x = 0; x < img.width(); ++x) {
        row_sum += row[x];
        row_sq += static_cast<std::int64_t>(row[x]) * row[x];
        const auto i = idx(x + 1, y + 1);
        sum[i] = sum[idx(x + 1, y)] + row_sum;
        sq[i] = sq[idx(x + 1, y)] + row_sq;
      }
    }
  }

  std::size_t idx(int x, int y) const noexcept { return static_cast<std::size_t>(y) * stride + x; }

  std::int64_t box(const std::vector<std::int64_t>& t, int x, int y, int w, int h) const noexcept {
    return t[idx(x + w, y + h)] - t[idx(x, y + h)] - t[idx(x + w, y)] + t[idx(x, y)];
  }
};

}  // namespace

ScoreMap ncc_map(const GrayImage& image, const GrayImage& tmpl, unsigned threads) {
  const int W = image.width();
  const int H = image.height();
  const int w = tmpl.width();
  const int h = tmpl.height();
  if (w <= 0 || h <= 0 || w > W || h > H) {
    throw Error(ErrorCode::TemplateTooLarge, "template " + std::to_string(w) + "x" +
                                                 std::to_string(h) + " does not fit image " +
                                                 std::to_string(W) + "x" + std::to_string(H));
  }
  // bounds the exact integer accumulators below
  if (static_cast<std::int64_t>(w) * h > 65536) {
    throw Error(ErrorCode::TemplateTooLarge, "templates are limited to 65536 pixels");
  }
  const auto ts = template_stats(tmpl);
  if (ts.var_n == 0) throw Error(ErrorCode::ConstantTemplate, "template has zero variance");

  const Integrals integrals(image);
  ScoreMap map;
  map.width = W - w + 1;
  map.height = H - h + 1;
  map.values.assign(static_cast<std::size_t>(map.width) * map.height, 0.0);
  const double t_norm = static_cast<double>(ts.var_n);

  parallel_for(static_cast<std::size_t>(map.height), threads, [&](std::size_t row) {
    const int v = static_cast<int>(row);
    // cross[u] = sum_{i,j} I(u+i, v+j) * T(i, j)
    std::vector<std::int64_t> cross(static_cast<std::size_t>(map.width), 0);
    for (int j = 0; j < h; ++j) {
      const auto img_row = image.row(v + j);
      const auto tmpl_row = tmpl.row(j);
      for (int i = 0; i < w; ++i) {
        const std::int64_t t = tmpl_row[i];
        if (t == 0) continue;
        const std::uint8_t* src = img_row.data() + i;
        for (int u = 0; u < map.width; ++u) cross[u] += t * src[u];
      }
    }
    double* out = map.values.data() + static_cast<std::size_t>(v) * map.width;
    for (int u = 0; u < map.width; ++u) {
      const std::int64_t s = integrals.box(integrals.sum, u, v, w, h);
      const std::int64_t s2 = integrals.box(integrals.sq, u, v, w, h);
      const std::int64_t var_n = ts.n * s2 - s * s;
      if (var_n == 0) continue;
      const std::int64_t num_n = ts.n * cross[u] - ts.sum * s;
      const double score = static_cast<double>(num_n) / std::sqrt(static_cast<double>(var_n) * t_norm);
      out[u] = std::clamp(score, -1.0, 1.0);
    }
  });
  return map;
}

std::vector<MatchCandidate> match_candidates(const ScoreMap& map, double tau, int tmpl_w,
                                             int tmpl_h) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "match threshold must lie in (0,1]");
  }
  std::vector<MatchCandidate> out;
  for (int v = 0; v < map.height; ++v) {
    for (int u = 0; u < map.width; ++u) {
      const double s = map.at(u, v);
      if (s >= tau) out.push_back({{u, v, tmpl_w, tmpl_h}, s});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const MatchCandidate& a, const MatchCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return std::tie(a.box.y, a.box.x) < std::tie(b.box.y, b.box.x);
  });
  return out;
}

namespace {

struct LabelledCandidate {
  MatchCandidate candidate;
  ClassId label;
};

const BBox& box_of(const LabelledCandidate& c) noexcept { return c.candidate.box; }
double score_of(const LabelledCandidate& c) noexcept { return c.candidate.score; }

}  // namespace

std::vector<Annotation> bootstrap_annotate(const preprocess::ColumnImage& column,
                                           std::span<const Template> templates, double tau,
                                           double iou_thresh, unsigned threads) {
  if (column.stage != preprocess::Stage::gray && column.stage != preprocess::Stage::binary) {
    throw Error(ErrorCode::InvalidArgument, "template matching needs a gray or binary column");
  }
  const GrayImage& raster = column.gray();
  std::vector<LabelledCandidate> pool;
  for (const auto& t : templates) {
    const auto map = ncc_map(raster, t.pixels, threads);
    for (const auto& c : match_candidates(map, tau, t.pixels.width(), t.pixels.height())) {
      pool.push_back({c, t.label});
    }
  }
  const auto survivors = nms(pool, iou_thresh);

  std::vector<Annotation> out;
  out.reserve(survivors.size());
  for (const auto& s : survivors) {
    Annotation a;
    a.column = column.key();
    a.box = s.candidate.box;
    a.cls = s.label;
    a.origin = Origin::template_match;
    a.status = Status::pending;
    a.cycle = 0;
    a.confidence = s.candidate.score;
    out.push_back(std::move(a));
  }
  std::sort(out.begin(), out.end(), [](const Annotation& a, const Annotation& b) {
    return std::tie(a.box.y, a.box.x, a.cls) < std::tie(b.box.y, b.box.x, b.cls);
  });
  return out;
}

std::vector<Template> load_templates(const std::filesystem::path& dir) {
  const auto sidecar = dir / "templates.json";
  std::ifstream in(sidecar);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + sidecar.string());
  std::vector<Template> out;
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& item : j) {
      Template t;
      t.pixels = io::read_gray(dir / item.at("file").get<std::string>());
      t.scribe = ScribeId(item.at("scribe").get<std::string>());
      t.label = class_from_int(item.at("class").get<int>());
      out.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, sidecar.string() + ": " + e.what());
  }
  return out;
}

}  // namespace scriptor::match
