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

#include "scriptor/eval/metrics.hpp"

namespace scriptor::eval {

/// Header "tau,tp,fp,fn,tn,accuracy,f_score"; ratios with 6 decimals.
std::string sweep_csv(std::span<const SweepPoint> points);
std::vector<SweepPoint> parse_sweep_csv(std::string_view text);

/// Header "scribe,occurrences,columns,occ_per_column,mean_confidence".
/// occ_per_column uses 2 decimals, mean_confidence 4, as in the printed
/// tables. The last row is the summary.
std::string stats_csv(const StatsTable& table);

/// Accuracy and F-score against tau as a standalone SVG document.
std::string sweep_svg(std::span<const SweepPoint> points, std::string_view title = {});

void write_text(const std::string& path, std::string_view text);
std::string read_text(const std::string& path);

}  // namespace scriptor::eval
