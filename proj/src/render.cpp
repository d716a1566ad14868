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

#include "rfgan/render.hpp"

#include "rfgan/errors.hpp"
#include "rfgan/io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rfgan {

namespace {

constexpr std::uint32_t kMapVersion = 1;

} // namespace

void write_map_file(const std::filesystem::path& path, const MapFile& map)
{
    if (map.values.size() != static_cast<std::size_t>(map.width) * map.height)
        throw ShapeError("map values do not match " + std::to_string(map.width) + "x" + std::to_string(map.height));
    io::ByteWriter w;
    w.bytes("RADM");
    w.u32(kMapVersion);
    w.u32(static_cast<std::uint32_t>(map.width));
    w.u32(static_cast<std::uint32_t>(map.height));
    w.f64(map.norm.min_dbm);
    w.f64(map.norm.max_dbm);
    w.f32s(map.values);
    io::write_file(path, w.data());
}

MapFile read_map_file(const std::filesystem::path& path)
{
    const auto bytes = io::read_file(path);
    io::ByteReader r(bytes);
    if (r.bytes(4) != "RADM")
        throw DataError(path.string() + ": not a map file (bad magic)");
    if (const auto v = r.u32(); v != kMapVersion)
        throw DataError(path.string() + ": unsupported map version " + std::to_string(v));
    MapFile m;
    m.width = static_cast<int>(r.u32());
    m.height = static_cast<int>(r.u32());
    m.norm.min_dbm = r.f64();
    m.norm.max_dbm = r.f64();
    m.values.resize(static_cast<std::size_t>(m.width) * m.height);
    r.f32s(m.values);
    if (!r.at_end())
        throw DataError(path.string() + ": trailing bytes in map file");
    return m;
}

Colormap parse_colormap(const std::string& name)
{
    if (name == "viridis")
        return Colormap::viridis;
    if (name == "jet")
        return Colormap::jet;
    throw ConfigError("unknown colormap '" + name + "' (expected viridis or jet)");
}

namespace {

std::uint8_t to_byte(double v)
{
    return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
}

Rgb viridis(double t)
{
    // Polynomial fit of matplotlib's viridis.
    static constexpr double c[7][3] = {{0.2777273272234177, 0.005407344544966578, 0.3340998053353061},
                                       {0.1050930431085774, 1.404613529898575, 1.384590162594685},
                                       {-0.3308618287255563, 0.214847559468213, 0.09509516302823659},
                                       {-4.634230498983486, -5.799100973351585, -19.33244095627987},
                                       {6.228269936347081, 14.17993336680509, 56.69055260068105},
                                       {4.776384997670288, -13.74514537774601, -65.35303263337234},
                                       {-5.435455855934631, 4.645852612178535, 26.3124352495832}};
    Rgb out{};
    for (int ch = 0; ch < 3; ++ch) {
        double v = c[6][ch];
        for (int k = 5; k >= 0; --k)
            v = c[k][ch] + t * v;
        out[ch] = to_byte(v);
    }
    return out;
}

Rgb jet(double t)
{
    return {to_byte(1.5 - std::abs(4.0 * t - 3.0)), to_byte(1.5 - std::abs(4.0 * t - 2.0)),
            to_byte(1.5 - std::abs(4.0 * t - 1.0))};
}

std::array<Rgb, 256> build_lut(Colormap cmap)
{
    std::array<Rgb, 256> lut{};
    for (int i = 0; i < 256; ++i)
        lut[i] = cmap == Colormap::viridis ? viridis(i / 255.0) : jet(i / 255.0);
    return lut;
}

} // namespace

const std::array<Rgb, 256>& colormap_lut(Colormap cmap)
{
    static const std::array<Rgb, 256> v = build_lut(Colormap::viridis);
    static const std::array<Rgb, 256> j = build_lut(Colormap::jet);
    return cmap == Colormap::viridis ? v : j;
}

Rgb colorize(double value, Colormap cmap)
{
    const int i = static_cast<int>(std::lround(255.0 * std::clamp(value, 0.0, 1.0)));
    return colormap_lut(cmap)[static_cast<std::size_t>(i)];
}

double invert_color(Rgb c, Colormap cmap)
{
    const auto& lut = colormap_lut(cmap);
    int best = 0;
    int best_d = std::numeric_limits<int>::max();
    for (int i = 0; i < 256; ++i) {
        int d = 0;
        for (int ch = 0; ch < 3; ++ch) {
            const int e = static_cast<int>(lut[i][ch]) - static_cast<int>(c[ch]);
            d += e * e;
        }
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best / 255.0;
}

Rgb Image::at(int x, int y) const
{
    const std::size_t o = 3 * (static_cast<std::size_t>(y) * width + x);
    return {rgb[o], rgb[o + 1], rgb[o + 2]};
}

Image render_map(std::span<const float> values, int width, int height, Colormap cmap, int scale)
{
    if (scale < 1)
        throw ConfigError("render scale must be >= 1");
    if (values.size() != static_cast<std::size_t>(width) * height)
        throw ShapeError("render: value count does not match map size");
    Image img{width * scale, height * scale, {}};
    img.rgb.resize(3 * static_cast<std::size_t>(img.width) * img.height);
    for (int y = 0; y < img.height; ++y) {
        const int v = height - 1 - y / scale;
        for (int x = 0; x < img.width; ++x) {
            const Rgb c = colorize(values[static_cast<std::size_t>(v) * width + x / scale], cmap);
            std::copy(c.begin(), c.end(), img.rgb.begin() + 3 * (static_cast<std::ptrdiff_t>(y) * img.width + x));
        }
    }
    return img;
}

Image render_compare(const MapFile& real, const MapFile& fake, Colormap cmap, int scale)
{
    if (real.width != fake.width || real.height != fake.height)
        throw ShapeError("compare: maps differ in size");
    const Image a = render_map(real.values, real.width, real.height, cmap, scale);
    const Image b = render_map(fake.values, fake.width, fake.height, cmap, scale);
    Image out{2 * a.width + kSeparatorWidth, a.height, {}};
    out.rgb.assign(3 * static_cast<std::size_t>(out.width) * out.height, 255);
    for (int y = 0; y < a.height; ++y) {
        const auto row = [&](const Image& img) { return img.rgb.begin() + 3 * static_cast<std::ptrdiff_t>(y) * img.width; };
        auto dst = out.rgb.begin() + 3 * static_cast<std::ptrdiff_t>(y) * out.width;
        std::copy(row(a), row(a) + 3 * a.width, dst);
        std::copy(row(b), row(b) + 3 * b.width, dst + 3 * (a.width + kSeparatorWidth));
    }
    return out;
}

void write_png(const std::filesystem::path& path, const Image& img)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    png_image pi{};
    pi.version = PNG_IMAGE_VERSION;
    pi.width = static_cast<png_uint_32>(img.width);
    pi.height = static_cast<png_uint_32>(img.height);
    pi.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&pi, path.string().c_str(), 0, img.rgb.data(), 0, nullptr))
        throw DataError(path.string() + ": PNG write failed: " + pi.message);
}

Image read_png(const std::filesystem::path& path)
{
    png_image pi{};
    pi.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&pi, path.string().c_str()))
        throw DataError(path.string() + ": PNG read failed: " + pi.message);
    pi.format = PNG_FORMAT_RGB;
    Image img{static_cast<int>(pi.width), static_cast<int>(pi.height), {}};
    img.rgb.resize(PNG_IMAGE_SIZE(pi));
    if (!png_image_finish_read(&pi, nullptr, img.rgb.data(), 0, nullptr)) {
        png_image_free(&pi);
        throw DataError(path.string() + ": PNG decode failed: " + pi.message);
    }
    return img;
}

std::vector<float> invert_image(const Image& img, int scale, Colormap cmap)
{
    if (scale < 1 || img.width % scale != 0 || img.height % scale != 0)
        throw ShapeError("invert_image: image size is not a multiple of the scale");
    const int w = img.width / scale, h = img.height / scale;
    std::vector<float> out(static_cast<std::size_t>(w) * h);
    for (int v = 0; v < h; ++v)
        for (int u = 0; u < w; ++u)
            out[static_cast<std::size_t>(v) * w + u] =
                static_cast<float>(invert_color(img.at(u * scale, (h - 1 - v) * scale), cmap));
    return out;
}

} // namespace rfgan
