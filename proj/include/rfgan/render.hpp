// SPDX-License-Identifier: Apache-2.0
//
// rfgan: indoor RF coverage synthesis with conditional GANs and image-method ray tracing
// Copyright (C) 2026 The rfgan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "rfgan/dataset.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace rfgan {

// ---- map files -------------------------------------------------------------

// "RADM" | u32 version | u32 width | u32 height | f64 min_dbm | f64 max_dbm
// | f32 normalized values, row-major, v = 0 at y_min.
struct MapFile {
    int width = 0;
    int height = 0;
    NormRange norm;
    std::vector<float> values;
};

void write_map_file(const std::filesystem::path& path, const MapFile& map);
MapFile read_map_file(const std::filesystem::path& path);

// ---- images ----------------------------------------------------------------

enum class Colormap { viridis, jet };

Colormap parse_colormap(const std::string& name);

using Rgb = std::array<std::uint8_t, 3>;

const std::array<Rgb, 256>& colormap_lut(Colormap cmap);
Rgb colorize(double value, Colormap cmap);
// Nearest LUT entry, as a value in [0, 1].
double invert_color(Rgb c, Colormap cmap);

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb; // row-major, 3 bytes per pixel

    Rgb at(int x, int y) const;
};

// Each cell becomes a scale x scale block; north (y_max) is at the top.
Image render_map(std::span<const float> values, int width, int height, Colormap cmap, int scale);
// real | separator | fake, both rendered at the same scale.
Image render_compare(const MapFile& real, const MapFile& fake, Colormap cmap, int scale);

inline constexpr int kSeparatorWidth = 4;

void write_png(const std::filesystem::path& path, const Image& img);
Image read_png(const std::filesystem::path& path);

// Normalized values recovered from a rendered image by colormap inversion.
std::vector<float> invert_image(const Image& img, int scale, Colormap cmap);

} // namespace rfgan
