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

#include "rfgan/geometry.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace rfgan {

// Dielectric material with a frequency-dependent conductivity
// sigma(f) = a * f_GHz^b [S/m].
struct Material {
    std::string name;
    double rel_permittivity = 1.0;
    double cond_a = 0.0;
    double cond_b = 0.0;

    double conductivity(double freq_hz) const;
};

// ITU-R P.2040 coefficients.
Material brick();
Material concrete();
// Lookup by name ("brick", "concrete"); throws ConfigError otherwise.
Material material_by_name(const std::string& name);

struct Wall {
    Vec2 a;
    Vec2 b;
    double height = 4.0;
    Material material;
};

struct Bounds {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double depth() const { return y_max - y_min; }
    bool contains(Vec2 p) const { return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max; }
};

struct Scene {
    std::string name;
    Bounds bounds;
    std::vector<Wall> walls;
    Material floor_material;
    // Walkable footprint as a simple polygon (counter-clockwise).
    std::vector<Vec2> footprint;
    Vec3 bs_position;
    double rx_height = 1.5;

    double bs_height() const { return bs_position.z; }
    double walkable_area() const;
    // Strictly inside the footprint polygon.
    bool walkable(Vec2 p) const;
};

// Cell (u, v): u indexes x, v indexes y. Cell origin at bounds.{x,y}_min.
struct GridSpec {
    int nx = 32;
    int ny = 32;
    double cell_size = 10.0 / 32.0;

    // Square cells covering the scene bounds exactly; throws ConfigError if
    // the bounds aspect ratio does not match nx:ny.
    static GridSpec for_bounds(const Bounds& b, int nx, int ny);
    void validate(const Bounds& b) const;
    Vec2 cell_center(const Bounds& b, int u, int v) const;
    // Cell containing p, clamped to the grid.
    std::array<int, 2> cell_of(const Bounds& b, Vec2 p) const;
};

enum class CellClass : std::uint8_t { floor = 0, wall = 1, bs = 2 };

struct SemanticMap {
    int width = 0;
    int height = 0;
    std::vector<CellClass> classes; // row-major, index v * width + u

    CellClass at(int u, int v) const { return classes[static_cast<std::size_t>(v) * width + u]; }
    // One-hot planes [floor, wall, bs], each width*height, row-major.
    std::vector<float> channels() const;
    std::size_t count(CellClass c) const;
    std::array<int, 2> bs_cell() const;
};

struct RoomLayout {
    enum class Shape { rectangle, l_shape };

    std::string name;
    Shape shape = Shape::rectangle;
    double width = 10.0;
    double depth = 10.0;
    double wall_height = 4.0;
    // Interior wall segments (rectangle only).
    std::vector<std::array<Vec2, 2>> partitions;
    // L-shape: size of the quadrant removed at the (x_max, y_max) corner.
    double notch_width = 5.0;
    double notch_depth = 5.0;
    Vec3 bs{5.0, 5.0, 3.0};
    double rx_height = 1.5;
    Material wall_material = brick();
    Material floor_material = concrete();
};

Scene build_room(const RoomLayout& layout);

// Shipped layouts: "room1".."room4" (10x10 m rectangles with different
// interior partitions) and "lshape" (10x10 m with a 5x5 m quadrant removed).
RoomLayout preset_layout(const std::string& id);
std::vector<std::string> preset_ids();

SemanticMap rasterize_semantic(const Scene& scene, const GridSpec& grid);

// True when any wall segment touches the closed cell (u, v).
bool cell_has_wall(const Scene& scene, const GridSpec& grid, int u, int v);

// Scene descriptor: a JSON object with shape ("rectangle" | "l_shape") or
// preset, dimensions_m, notch_m, wall_height, walls (interior segments),
// materials {wall, floor}, bs {x, y, z}, rx_height, grid {nx, ny}.
struct SceneDescriptor {
    RoomLayout layout;
    int nx = 32;
    int ny = 32;
};
SceneDescriptor parse_scene_descriptor(const std::string& json_text);
SceneDescriptor load_scene_descriptor(const std::string& path);

// Every violated scene invariant; empty iff valid.
std::vector<std::string> validate_scene(const Scene& scene);

// Segment vs closed axis-aligned box.
bool segment_intersects_box(Vec2 a, Vec2 b, Vec2 lo, Vec2 hi);

} // namespace rfgan
