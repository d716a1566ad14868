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

#include "rfgan/errors.hpp"
#include "rfgan/render.hpp"

#include "helpers.hpp"
#include "rfgan/io.hpp"

#include <catch2/catch.hpp>

#include <cmath>

using namespace rfgan;

TEST_CASE("map file round-trip", "[render]")
{
    std::mt19937_64 rng(1);
    const MapFile m{8, 4, {-120.0, -10.0}, test::random_map(32, rng)};
    const auto dir = test::scratch("render-map");
    write_map_file(dir / "a.radm", m);
    const MapFile back = read_map_file(dir / "a.radm");
    CHECK(back.width == 8);
    CHECK(back.height == 4);
    CHECK(back.norm.min_dbm == -120.0);
    CHECK(back.values == m.values);
    io::write_text(dir / "b.radm", "RADX");
    CHECK_THROWS_AS(read_map_file(dir / "b.radm"), DataError);
}

TEST_CASE("render size and orientation", "[render]")
{
    std::vector<float> v(32 * 32, 0.0f);
    v[31 * 32] = 1.0f; // u = 0, v = 31: north-west corner
    const Image img = render_map(v, 32, 32, Colormap::viridis, 8);
    CHECK(img.width == 256);
    CHECK(img.height == 256);
    CHECK(img.at(0, 0) == colorize(1.0, Colormap::viridis));
    CHECK(img.at(0, 255) == colorize(0.0, Colormap::viridis));
}

TEST_CASE("compare mode doubles width plus separator", "[render]")
{
    const MapFile m{32, 32, {}, std::vector<float>(1024, 0.5f)};
    const Image img = render_compare(m, m, Colormap::jet, 8);
    CHECK(img.width == 2 * 256 + kSeparatorWidth);
    CHECK(img.height == 256);
    CHECK(img.at(256, 10) == Rgb{255, 255, 255});
}

TEST_CASE("colormaps are invertible to within 1/255", "[render]")
{
    for (Colormap c : {Colormap::viridis, Colormap::jet}) {
        const auto& lut = colormap_lut(c);
        for (std::size_t i = 1; i < lut.size(); ++i)
            CHECK(lut[i] != lut[i - 1]);
        std::mt19937_64 rng(2);
        const auto v = test::random_map(16 * 16, rng);
        const Image img = render_map(v, 16, 16, c, 3);
        const auto back = invert_image(img, 3, c);
        for (std::size_t i = 0; i < v.size(); ++i)
            CHECK(std::abs(back[i] - v[i]) <= 1.0 / 255 + 1e-6);
    }
    CHECK_THROWS_AS(parse_colormap("rainbow"), ConfigError);
}

TEST_CASE("PNG round-trip", "[render]")
{
    std::mt19937_64 rng(3);
    const auto v = test::random_map(8 * 8, rng);
    const Image img = render_map(v, 8, 8, Colormap::viridis, 4);
    const auto dir = test::scratch("render-png");
    write_png(dir / "x.png", img);
    const Image back = read_png(dir / "x.png");
    CHECK(back.width == img.width);
    CHECK(back.rgb == img.rgb);
    CHECK_THROWS_AS(read_png(dir / "missing.png"), DataError);
}
