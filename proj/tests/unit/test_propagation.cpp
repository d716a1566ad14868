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

#include "rfgan/propagation.hpp"

#include "oracles.hpp"

#include <catch2/catch.hpp>

#include <cmath>

using namespace rfgan;

TEST_CASE("free-space anchor at 1 m and 28 GHz", "[propagation]")
{
    Path p;
    p.vertices = {{0, 0, 1}, {1, 0, 1}};
    p.total_length = 1.0;
    const auto a = path_amplitude(p, 28e9, std::nullopt);
    CHECK(received_power(std::span(&a, 1), 0.0) == Approx(-61.39).margin(5e-3));
    CHECK(std::isinf(received_power({}, 0.0)));
}

TEST_CASE("path enumeration in the empty room", "[propagation]")
{
    const Scene s = build_room(preset_layout("room1"));
    const Vec3 tx{3.0, 4.0, 3.0}, rx{7.0, 2.0, 1.5};
    CHECK(enumerate_paths(s, tx, rx, 0).size() == 1);
    const auto one = enumerate_paths(s, tx, rx, 1);
    CHECK(one.size() == 6);
    CHECK(one.front().reflections() == 0);
    CHECK(one.front().total_length == Approx(norm(rx - tx)));
    const auto two = enumerate_paths(s, tx, rx, 2);
    for (const auto& p : two) {
        INFO(p.reflections());
        CHECK_FALSE(specular_violation(s, p).has_value());
        CHECK(p.total_length >= one.front().total_length);
    }
    for (std::size_t i = 1; i < two.size(); ++i)
        CHECK(two[i - 1].reflections() <= two[i].reflections());
}

TEST_CASE("partitions block line of sight", "[propagation]")
{
    const Scene s = build_room(preset_layout("room2"));
    const auto paths = enumerate_paths(s, {3.0, 2.0, 2.0}, {3.0, 8.0, 2.0}, 0);
    CHECK(paths.empty());
}

TEST_CASE("Fresnel magnitude stays below one and grows toward grazing", "[propagation]")
{
    const Material m = concrete();
    const double normal = std::abs(fresnel_reflection(m, 28e9, 0.0));
    const double grazing = std::abs(fresnel_reflection(m, 28e9, 1.5));
    CHECK(normal < 1.0);
    CHECK(grazing > normal);
    CHECK(grazing < 1.0);
}

TEST_CASE("RF map is independent of the thread count", "[propagation]")
{
    const Scene s = build_room(preset_layout("room3"));
    const GridSpec g = GridSpec::for_bounds(s.bounds, 16, 16);
    UpaConfig a;
    TraceOptions one;
    one.threads = 1;
    TraceOptions four = one;
    four.threads = 4;
    const RfMap m1 = generate_rf_map(s, a, 28e9, g, one);
    const RfMap m4 = generate_rf_map(s, a, 28e9, g, four);
    REQUIRE(m1.rss_dbm.size() == 256);
    CHECK(m1.rss_dbm == m4.rss_dbm);
}

TEST_CASE("image method agrees with the box oracle on one pair", "[propagation]")
{
    const Scene s = build_room(preset_layout("room1"));
    const auto lib = enumerate_paths(s, {1.0, 2.0, 3.0}, {8.0, 6.5, 1.0}, 2);
    const auto ref = oracle::box_image_paths(10, 10, 4, {1.0, 2.0, 3.0}, {8.0, 6.5, 1.0}, 2);
    CHECK(lib.size() == ref.size());
}
