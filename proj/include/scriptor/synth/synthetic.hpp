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
#include <filesystem>
#include <vector>

#include "scriptor/core/image.hpp"
#include "scriptor/preprocess/manuscript_config.hpp"

namespace scriptor::synth {

/// Letterforms used on synthetic pages. bowl_stem and angular are two
/// hands' versions of the target letter; bar and crossbar are other letters.
enum class GlyphShape { bowl_stem, angular, bar, crossbar };

inline constexpr int kGlyphSize = 14;
inline constexpr int kTemplateSize = kGlyphSize + 2;

/// kGlyphSize square, ink 0 on background 255.
GrayImage glyph_mask(GlyphShape shape);
/// The mask inside a one-pixel background border, as cut from a binarized
/// column.
GrayImage glyph_template(GlyphShape shape);

struct SynthOptions {
  ManuscriptId manuscript{"synth"};
  int pages = 30;                 // leaves; each has a recto and a verso
  std::uint64_t seed = 7;
  int page_width = 480;
  int page_height = 640;
  int letters_per_column = 12;    // target-letter occurrences
  int others_per_column = 10;     // bar / crossbar occurrences
  int red_per_column = 2;         // red decorations
  ScribeId target_scribe{"A"};    // writes bowl_stem
  ScribeId other_scribe{"B"};     // writes angular
  int other_every = 3;            // leaves divisible by this belong to other_scribe
};

struct PlantedGlyph {
  ColumnKey column;
  BBox box;  // template-sized, in column coordinates
  ClassId cls = ClassId::target;
  ScribeId scribe;
};

struct SynthManuscript {
  preprocess::ManuscriptConfig config;  // image paths resolved
  std::filesystem::path config_path;
  std::filesystem::path template_dir;
  std::vector<PlantedGlyph> truth;      // target-letter occurrences only
};

/// The two column rois of every synthetic page.
std::vector<BBox> column_rois(const SynthOptions& options);

const ScribeId& scribe_of_page(const SynthOptions& options, int page);

/// Renders one page; appends its target-letter placements to `truth`.
RgbImage render_page(const SynthOptions& options, int page, Side side,
                     std::vector<PlantedGlyph>* truth = nullptr);

/// Writes pages/, templates/ (with templates.json), manuscript.json and
/// truth.json under `out_dir`. Output is a pure function of the options.
SynthManuscript generate(const SynthOptions& options, const std::filesystem::path& out_dir);

}  // namespace scriptor::synth
