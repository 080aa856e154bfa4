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
#include <string>
#include <vector>

#include "scriptor/core/image.hpp"

namespace scriptor::io {

/// Reads a PNG or JPEG page scan as 8-bit RGB.
RgbImage read_rgb(const std::filesystem::path& path);
GrayImage read_gray(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const GrayImage& img);
void write_png(const std::filesystem::path& path, const RgbImage& img);

std::vector<std::uint8_t> encode_png(const GrayImage& img);

}  // namespace scriptor::io
