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

// Shared helpers for unit and acceptance tests: scratch directories,
// brute-force oracles and fixtures rebuilt from published results.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "scriptor/core/annotation_store.hpp"
#include "scriptor/core/image.hpp"
#include "scriptor/eval/metrics.hpp"

namespace scriptor::testing {

/// Directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "scriptor");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Fixed clock so store logs are byte-comparable.
inline std::string fixed_clock() { return "2026-01-01T00:00:00Z"; }

GrayImage random_gray(std::mt19937_64& rng, int w, int h);
GrayImage bimodal_gray(std::mt19937_64& rng, int w, int h);

// --- oracles -------------------------------------------------------------

/// Exhaustive Otsu: every t with both classes non-empty, variance compared
/// exactly, smallest t on ties; a constant raster yields its value.
int otsu_oracle(const GrayImage& img);

/// Direct evaluation of the zero-mean NCC formula at (u, v).
double ncc_oracle(const GrayImage& img, const GrayImage& tmpl, int u, int v);

// --- confidence sweep fixture -------------------------------------------

/// Threshold grid 0.70 .. 0.85 and the accuracy / F-score pairs (in %)
/// plotted for it.
extern const std::vector<double> kCurveTaus;
extern const std::vector<double> kCurveAccuracy;
extern const std::vector<double> kCurveFScore;

struct SweepFixture {
  std::vector<eval::LabeledScore> samples;
  std::int64_t positives = 0;
  std::vector<eval::Confusion> confusions;  // oracle's target matrix per tau
  double max_residual_pts = 0.0;            // vs the plotted values
};

/// Integer search over (tp, fp) per threshold for a corpus of `total`
/// samples: for every positive count P in a window, choose non-increasing
/// counts closest to the plotted pairs and keep the P with the smallest
/// worst-case error. The confusions are then realised as samples placed at
/// the centres of the 0.01-wide bins between thresholds.
SweepFixture build_sweep_fixture(std::int64_t total = 10000);

// --- extraction statistics fixture ---------------------------------------

struct ScribeRow {
  const char* scribe;
  std::int64_t occurrences;
  std::int64_t columns;
  double occ_per_column;
  double mean_confidence;
};

/// Per-scribe YOLO block of the extraction table. Scribe A's column count
/// is 713, not the printed 3713: 123.47 occ/column and the 1561 total both
/// require it.
extern const std::vector<ScribeRow> kScribeTable;
inline constexpr std::int64_t kTableOccurrences = 202294;
inline constexpr std::int64_t kTableColumns = 1561;
inline constexpr double kTableOccPerColumn = 127.54;
inline constexpr double kTableMeanConfidence = 0.76;

/// Registers the columns of every scribe in `store` (manuscript "avila")
/// and returns detections spread over them with the listed means.
std::vector<DetectionRecord> populate_scribe_table(AnnotationStore& store);

// --- embedded detector fixture -------------------------------------------

/// Writes `<dir>/detector.onnx` and its sidecar: a single convolution whose
/// kernel scores the overlap of a window with `glyph` (ink 0), followed by
/// YOLO-style rows (cx, cy, w, h, objectness, p_other, p_target) on a
/// `tile` x `tile` input. Returns the model path.
std::filesystem::path write_fixture_detector(const std::filesystem::path& dir, const GrayImage& glyph,
                                             int tile = 128, const std::string& model_id = "fixture-v1");

}  // namespace scriptor::testing
