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

#include "rfgan/scene.hpp"

#include "rfgan/errors.hpp"
#include "rfgan/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace rfgan {

double Material::conductivity(double freq_hz) const
{
    return cond_a * std::pow(freq_hz / 1e9, cond_b);
}

Material brick()
{
    return {"brick", 3.91, 0.0238, 0.16};
}

Material concrete()
{
    return {"concrete", 5.24, 0.0462, 0.7822};
}

Material material_by_name(const std::string& name)
{
    if (name == "brick")
        return brick();
    if (name == "concrete")
        return concrete();
    throw ConfigError("unknown material '" + name + "' (expected brick or concrete)");
}

namespace {

constexpr double kGeomEps = 1e-9;

double polygon_area(const std::vector<Vec2>& poly)
{
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        a += cross(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * a;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b)
{
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

} // namespace

double Scene::walkable_area() const
{
    return std::abs(polygon_area(footprint));
}

bool Scene::walkable(Vec2 p) const
{
    const std::size_t n = footprint.size();
    if (n < 3)
        return false;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = footprint[i];
        const Vec2 b = footprint[j];
        if (point_segment_distance(p, a, b) <= kGeomEps)
            return false;
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < x)
                inside = !inside;
        }
    }
    return inside;
}

GridSpec GridSpec::for_bounds(const Bounds& b, int nx, int ny)
{
    if (nx <= 0 || ny <= 0)
        throw ConfigError("grid cell counts must be positive");
    GridSpec g{nx, ny, b.width() / nx};
    g.validate(b);
    return g;
}

void GridSpec::validate(const Bounds& b) const
{
    if (nx < 8 || ny < 8)
        throw ConfigError("grid must be at least 8x8 cells");
    if (!(cell_size > 0.0))
        throw ConfigError("grid cell_size must be positive");
    if (std::abs(nx * cell_size - b.width()) > 1e-9 * std::max(1.0, b.width())
        || std::abs(ny * cell_size - b.depth()) > 1e-9 * std::max(1.0, b.depth())) {
        std::ostringstream os;
        os << "grid " << nx << "x" << ny << " with cell " << cell_size << " m does not cover bounds "
           << b.width() << "x" << b.depth() << " m";
        throw ConfigError(os.str());
    }
}

Vec2 GridSpec::cell_center(const Bounds& b, int u, int v) const
{
    return {b.x_min + (u + 0.5) * cell_size, b.y_min + (v + 0.5) * cell_size};
}

std::array<int, 2> GridSpec::cell_of(const Bounds& b, Vec2 p) const
{
    int u = static_cast<int>(std::floor((p.x - b.x_min) / cell_size));
    int v = static_cast<int>(std::floor((p.y - b.y_min) / cell_size));
    return {std::clamp(u, 0, nx - 1), std::clamp(v, 0, ny - 1)};
}

std::vector<float> SemanticMap::channels() const
{
    const std::size_t plane = classes.size();
    std::vector<float> out(3 * plane, 0.0f);
    for (std::size_t i = 0; i < plane; ++i)
        out[static_cast<std::size_t>(classes[i]) * plane + i] = 1.0f;
    return out;
}

std::size_t SemanticMap::count(CellClass c) const
{
    return static_cast<std::size_t>(std::count(classes.begin(), classes.end(), c));
}

std::array<int, 2> SemanticMap::bs_cell() const
{
    for (int v = 0; v < height; ++v)
        for (int u = 0; u < width; ++u)
            if (at(u, v) == CellClass::bs)
                return {u, v};
    throw DataError("semantic map has no bs cell");
}

Scene build_room(const RoomLayout& layout)
{
    if (!(layout.width > 0.0) || !(layout.depth > 0.0))
        throw ConfigError("room '" + layout.name + "': dimensions must be positive");
    if (!(layout.wall_height > 0.0))
        throw ConfigError("room '" + layout.name + "': wall height must be positive");

    Scene s;
    s.name = layout.name;
    s.bounds = {0.0, 0.0, layout.width, layout.depth};
    s.floor_material = layout.floor_material;
    s.bs_position = layout.bs;
    s.rx_height = layout.rx_height;

    const double w = layout.width;
    const double d = layout.depth;
    if (layout.shape == RoomLayout::Shape::rectangle) {
        s.footprint = {{0, 0}, {w, 0}, {w, d}, {0, d}};
    } else {
        const double nw = layout.notch_width;
        const double nd = layout.notch_depth;
        if (!(nw > 0.0) || !(nd > 0.0) || nw >= w || nd >= d)
            throw ConfigError("room '" + layout.name + "': L-shape notch must be positive and smaller than the room");
        s.footprint = {{0, 0}, {w, 0}, {w, d - nd}, {w - nw, d - nd}, {w - nw, d}, {0, d}};
    }
    for (std::size_t i = 0; i < s.footprint.size(); ++i)
        s.walls.push_back({s.footprint[i], s.footprint[(i + 1) % s.footprint.size()], layout.wall_height,
                           layout.wall_material});

    if (layout.shape == RoomLayout::Shape::l_shape && !layout.partitions.empty())
        throw ConfigError("room '" + layout.name + "': partitions are only supported for rectangles");
    for (const auto& p : layout.partitions)
        s.walls.push_back({p[0], p[1], layout.wall_height, layout.wall_material});

    if (!s.walkable(layout.bs.xy()))
        throw ConfigError("room '" + layout.name + "': BS outside walkable area");

    if (auto v = validate_scene(s); !v.empty()) {
        std::string msg = "room '" + layout.name + "' invalid:";
        for (const auto& e : v)
            msg += " " + e + ";";
        throw ConfigError(msg);
    }
    return s;
}

RoomLayout preset_layout(const std::string& id)
{
    RoomLayout r;
    r.name = id;
    if (id == "room1")
        return r;
    if (id == "room2") {
        r.partitions = {{Vec2{0.0, 5.15}, Vec2{6.2, 5.15}}};
        r.bs = {5.0, 2.5, 3.0};
        return r;
    }
    if (id == "room3") {
        r.partitions = {{Vec2{5.15, 0.0}, Vec2{5.15, 3.9}}, {Vec2{5.15, 6.1}, Vec2{5.15, 10.0}}};
        r.bs = {2.5, 5.0, 3.0};
        return r;
    }
    if (id == "room4") {
        r.partitions = {{Vec2{0.0, 3.6}, Vec2{4.1, 3.6}}, {Vec2{5.9, 6.6}, Vec2{10.0, 6.6}}};
        r.bs = {5.0, 5.0, 3.0};
        return r;
    }
    if (id == "lshape") {
        r.shape = RoomLayout::Shape::l_shape;
        r.bs = {2.5, 2.5, 3.0};
        return r;
    }
    throw ConfigError("unknown room preset '" + id + "' (expected room1..room4 or lshape)");
}

std::vector<std::string> preset_ids()
{
    return {"room1", "room2", "room3", "room4", "lshape"};
}

bool segment_intersects_box(Vec2 a, Vec2 b, Vec2 lo, Vec2 hi)
{
    // Liang-Barsky clipping against the closed box.
    double t0 = 0.0;
    double t1 = 1.0;
    const double d[2] = {b.x - a.x, b.y - a.y};
    const double p0[2] = {a.x, a.y};
    const double lo_[2] = {lo.x, lo.y};
    const double hi_[2] = {hi.x, hi.y};
    for (int k = 0; k < 2; ++k) {
        if (std::abs(d[k]) < 1e-15) {
            if (p0[k] < lo_[k] - 1e-12 || p0[k] > hi_[k] + 1e-12)
                return false;
            continue;
        }
        double ta = (lo_[k] - 1e-12 - p0[k]) / d[k];
        double tb = (hi_[k] + 1e-12 - p0[k]) / d[k];
        if (ta > tb)
            std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1)
            return false;
    }
    return true;
}

SemanticMap rasterize_semantic(const Scene& scene, const GridSpec& grid)
{
    SemanticMap m;
    m.width = grid.nx;
    m.height = grid.ny;
    m.classes.assign(static_cast<std::size_t>(grid.nx) * grid.ny, CellClass::floor);
    const Bounds& b = scene.bounds;
    for (const Wall& w : scene.walls) {
        // Only cells inside the segment's bounding box can intersect it.
        const auto c0 = grid.cell_of(b, {std::min(w.a.x, w.b.x), std::min(w.a.y, w.b.y)});
        const auto c1 = grid.cell_of(b, {std::max(w.a.x, w.b.x), std::max(w.a.y, w.b.y)});
        for (int v = std::max(0, c0[1] - 1); v <= std::min(grid.ny - 1, c1[1] + 1); ++v) {
            for (int u = std::max(0, c0[0] - 1); u <= std::min(grid.nx - 1, c1[0] + 1); ++u) {
                const Vec2 lo{b.x_min + u * grid.cell_size, b.y_min + v * grid.cell_size};
                const Vec2 hi{lo.x + grid.cell_size, lo.y + grid.cell_size};
                if (segment_intersects_box(w.a, w.b, lo, hi))
                    m.classes[static_cast<std::size_t>(v) * m.width + u] = CellClass::wall;
            }
        }
    }
    const auto bs = grid.cell_of(b, scene.bs_position.xy());
    m.classes[static_cast<std::size_t>(bs[1]) * m.width + bs[0]] = CellClass::bs;
    return m;
}

std::vector<std::string> validate_scene(const Scene& scene)
{
    std::vector<std::string> out;
    const Bounds& b = scene.bounds;
    if (!(b.width() > 0.0) || !(b.depth() > 0.0))
        out.emplace_back("non-positive bounds");
    if (!b.contains(scene.bs_position.xy()))
        out.emplace_back("bs outside bounds");

    double min_wall = 0.0;
    bool any_wall = false;
    for (std::size_t i = 0; i < scene.walls.size(); ++i) {
        const Wall& w = scene.walls[i];
        const std::string tag = "wall " + std::to_string(i);
        if (norm(w.b - w.a) <= kGeomEps)
            out.push_back(tag + " endpoints coincide");
        if (!(w.height > 0.0))
            out.push_back(tag + " height not positive");
        if (!b.contains(w.a) || !b.contains(w.b))
            out.push_back(tag + " outside bounds");
        if (w.material.rel_permittivity < 1.0)
            out.push_back(tag + " permittivity below 1");
        min_wall = any_wall ? std::min(min_wall, w.height) : w.height;
        any_wall = true;
    }
    if (scene.floor_material.rel_permittivity < 1.0)
        out.emplace_back("floor permittivity below 1");

    if (!(scene.rx_height > 0.0))
        out.emplace_back("rx height not positive");
    if (any_wall && scene.rx_height > min_wall) {
        out.emplace_back("rx above wall height");
    } else if (!(scene.rx_height < scene.bs_height())) {
        out.emplace_back("rx not below bs");
    }
    if (any_wall && scene.bs_height() > min_wall)
        out.emplace_back("bs above wall height");
    return out;
}

} // namespace rfgan

namespace rfgan {

bool cell_has_wall(const Scene& scene, const GridSpec& grid, int u, int v)
{
    const Bounds& b = scene.bounds;
    const Vec2 lo{b.x_min + u * grid.cell_size, b.y_min + v * grid.cell_size};
    const Vec2 hi{lo.x + grid.cell_size, lo.y + grid.cell_size};
    for (const Wall& w : scene.walls)
        if (segment_intersects_box(w.a, w.b, lo, hi))
            return true;
    return false;
}

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where)
{
    for (const auto& [k, _] : j.items())
        if (!known.contains(k))
            throw ConfigError(where + ": unknown field '" + k + "'");
}

template <typename V>
V field(const json& j, const std::string& key, const std::string& where)
{
    try {
        return j.at(key).get<V>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

Vec2 point2(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(where + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

SceneDescriptor parse_scene_descriptor(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scene descriptor: ") + e.what());
    }
    const std::string where = "scene";
    if (!j.is_object())
        throw ConfigError(where + ": expected an object");
    reject_unknown(j,
                   {"name", "preset", "shape", "dimensions_m", "notch_m", "wall_height", "walls", "materials", "bs",
                    "rx_height", "grid"},
                   where);

    SceneDescriptor d;
    RoomLayout& l = d.layout;
    if (j.contains("preset"))
        l = preset_layout(field<std::string>(j, "preset", where));
    if (j.contains("name"))
        l.name = field<std::string>(j, "name", where);
    if (j.contains("shape")) {
        const auto shape = field<std::string>(j, "shape", where);
        if (shape == "rectangle")
            l.shape = RoomLayout::Shape::rectangle;
        else if (shape == "l_shape")
            l.shape = RoomLayout::Shape::l_shape;
        else
            throw ConfigError(where + ".shape: expected rectangle or l_shape, got '" + shape + "'");
    }
    if (j.contains("dimensions_m")) {
        const Vec2 dim = point2(j["dimensions_m"], where + ".dimensions_m");
        l.width = dim.x;
        l.depth = dim.y;
    }
    if (j.contains("notch_m")) {
        const Vec2 n = point2(j["notch_m"], where + ".notch_m");
        l.notch_width = n.x;
        l.notch_depth = n.y;
    }
    if (j.contains("wall_height"))
        l.wall_height = field<double>(j, "wall_height", where);
    if (j.contains("walls")) {
        l.partitions.clear();
        const json& ws = j["walls"];
        if (!ws.is_array())
            throw ConfigError(where + ".walls: expected an array of [[x,y],[x,y]]");
        for (std::size_t i = 0; i < ws.size(); ++i) {
            const std::string wh = where + ".walls[" + std::to_string(i) + "]";
            if (!ws[i].is_array() || ws[i].size() != 2)
                throw ConfigError(wh + ": expected [[x,y],[x,y]]");
            l.partitions.push_back({point2(ws[i][0], wh), point2(ws[i][1], wh)});
        }
    }
    if (j.contains("materials")) {
        const json& m = j["materials"];
        reject_unknown(m, {"wall", "floor"}, where + ".materials");
        if (m.contains("wall"))
            l.wall_material = material_by_name(field<std::string>(m, "wall", where + ".materials"));
        if (m.contains("floor"))
            l.floor_material = material_by_name(field<std::string>(m, "floor", where + ".materials"));
    }
    if (j.contains("bs")) {
        const json& b = j["bs"];
        reject_unknown(b, {"x", "y", "z"}, where + ".bs");
        l.bs = {field<double>(b, "x", where + ".bs"), field<double>(b, "y", where + ".bs"),
                b.contains("z") ? field<double>(b, "z", where + ".bs") : l.bs.z};
    }
    if (j.contains("rx_height"))
        l.rx_height = field<double>(j, "rx_height", where);
    if (j.contains("grid")) {
        const json& g = j["grid"];
        reject_unknown(g, {"nx", "ny"}, where + ".grid");
        d.nx = field<int>(g, "nx", where + ".grid");
        d.ny = field<int>(g, "ny", where + ".grid");
    }
    if (l.name.empty())
        l.name = "scene";
    return d;
}

SceneDescriptor load_scene_descriptor(const std::string& path)
{
    return parse_scene_descriptor(io::read_text(path));
}

} // namespace rfgan
