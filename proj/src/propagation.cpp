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

#include "rfgan/errors.hpp"
#include "rfgan/io.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace rfgan {

namespace {

constexpr double kParamEps = 1e-9;

struct Plane {
    Vec3 point;
    Vec3 normal; // unit
};

Plane surface_plane(const Scene& scene, int surface)
{
    if (surface == kFloorSurface)
        return {{0, 0, 0}, {0, 0, 1}};
    const Wall& w = scene.walls[static_cast<std::size_t>(surface)];
    const Vec2 d = w.b - w.a;
    const double len = norm(d);
    return {{w.a.x, w.a.y, 0.0}, {-d.y / len, d.x / len, 0.0}};
}

const Material& surface_material(const Scene& scene, int surface)
{
    return surface == kFloorSurface ? scene.floor_material : scene.walls[static_cast<std::size_t>(surface)].material;
}

Vec3 mirror(Vec3 p, const Plane& pl)
{
    return p - (2.0 * dot(p - pl.point, pl.normal)) * pl.normal;
}

bool on_surface_extent(const Scene& scene, int surface, Vec3 p, double tol)
{
    if (surface == kFloorSurface) {
        const Bounds& b = scene.bounds;
        return p.x >= b.x_min - tol && p.x <= b.x_max + tol && p.y >= b.y_min - tol && p.y <= b.y_max + tol;
    }
    const Wall& w = scene.walls[static_cast<std::size_t>(surface)];
    const Vec2 d = w.b - w.a;
    const double s = dot(p.xy() - w.a, d) / dot(d, d);
    return s >= -tol && s <= 1.0 + tol && p.z >= -tol && p.z <= w.height + tol;
}

// True when the open segment a->b passes through any wall other than the
// excluded surfaces.
bool blocked(const Scene& scene, Vec3 a, Vec3 b, int skip0, int skip1)
{
    const Vec2 d = b.xy() - a.xy();
    for (std::size_t i = 0; i < scene.walls.size(); ++i) {
        const int id = static_cast<int>(i);
        if (id == skip0 || id == skip1)
            continue;
        const Wall& w = scene.walls[i];
        const Vec2 e = w.b - w.a;
        const double den = cross(d, e);
        if (std::abs(den) < 1e-14)
            continue; // parallel or vertical segment: no crossing
        const Vec2 ap = w.a - a.xy();
        const double t = cross(ap, e) / den;
        const double s = cross(ap, d) / den;
        if (t <= kParamEps || t >= 1.0 - kParamEps || s < -kParamEps || s > 1.0 + kParamEps)
            continue;
        const double z = a.z + t * (b.z - a.z);
        if (z >= 0.0 && z <= w.height)
            return true;
    }
    return false;
}

double incidence_angle(Vec3 incoming, Vec3 normal)
{
    const double c = std::abs(dot(incoming, normal));
    const double s = norm(cross(incoming, normal));
    return std::atan2(s, c);
}

std::optional<Path> trace_sequence(const Scene& scene, Vec3 tx, Vec3 rx, std::span<const int> seq)
{
    const std::size_t k = seq.size();
    std::vector<Plane> planes(k);
    std::vector<Vec3> images(k + 1);
    images[0] = tx;
    for (std::size_t i = 0; i < k; ++i) {
        planes[i] = surface_plane(scene, seq[i]);
        images[i + 1] = mirror(images[i], planes[i]);
    }

    std::vector<Vec3> points(k + 2);
    points[0] = tx;
    points[k + 1] = rx;
    Vec3 target = rx;
    for (std::size_t i = k; i >= 1; --i) {
        const Vec3 from = images[i];
        const Vec3 dir = target - from;
        const double den = dot(dir, planes[i - 1].normal);
        if (std::abs(den) < 1e-14)
            return std::nullopt;
        const double t = -dot(from - planes[i - 1].point, planes[i - 1].normal) / den;
        if (t <= kParamEps || t >= 1.0 - kParamEps)
            return std::nullopt;
        const Vec3 p = from + t * dir;
        if (!on_surface_extent(scene, seq[i - 1], p, 1e-12))
            return std::nullopt;
        points[i] = p;
        target = p;
    }

    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const int s0 = i == 0 ? -2 : seq[i - 1];
        const int s1 = i + 1 == points.size() - 1 ? -2 : seq[i];
        if (blocked(scene, points[i], points[i + 1], s0, s1))
            return std::nullopt;
    }

    Path path;
    path.vertices = std::move(points);
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
        path.total_length += norm(path.vertices[i + 1] - path.vertices[i]);
    for (std::size_t i = 0; i < k; ++i) {
        const Vec3 in = path.vertices[i + 1] - path.vertices[i];
        path.bounces.push_back({seq[i], surface_material(scene, seq[i]), incidence_angle(in, planes[i].normal)});
    }
    return path;
}

bool same_vertices(const Path& a, const Path& b)
{
    if (a.vertices.size() != b.vertices.size())
        return false;
    for (std::size_t i = 0; i < a.vertices.size(); ++i)
        if (norm(a.vertices[i] - b.vertices[i]) > 1e-9)
            return false;
    return true;
}

} // namespace

std::vector<Path> enumerate_paths(const Scene& scene, Vec3 tx, Vec3 rx, int max_reflections)
{
    if (max_reflections < 0 || max_reflections > 2)
        throw ConfigError("max_reflections must be 0, 1 or 2");
    std::vector<int> surfaces;
    for (std::size_t i = 0; i < scene.walls.size(); ++i)
        surfaces.push_back(static_cast<int>(i));
    surfaces.push_back(kFloorSurface);

    std::vector<Path> out;
    auto add = [&](std::optional<Path> p) {
        if (!p)
            return;
        for (const Path& q : out)
            if (same_vertices(q, *p))
                return;
        out.push_back(std::move(*p));
    };

    add(trace_sequence(scene, tx, rx, {}));
    if (max_reflections >= 1)
        for (int s : surfaces) {
            const int seq[1] = {s};
            add(trace_sequence(scene, tx, rx, seq));
        }
    if (max_reflections >= 2)
        for (int s1 : surfaces)
            for (int s2 : surfaces) {
                if (s1 == s2)
                    continue;
                const int seq[2] = {s1, s2};
                add(trace_sequence(scene, tx, rx, seq));
            }
    return out;
}

std::optional<std::string> specular_violation(const Scene& scene, const Path& path, double tol)
{
    const auto& v = path.vertices;
    if (v.size() != path.bounces.size() + 2)
        return "vertex count does not match bounce count";
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        len += norm(v[i + 1] - v[i]);
    if (std::abs(len - path.total_length) > tol * std::max(1.0, len))
        return "total_length does not equal the sum of segment lengths";
    for (std::size_t k = 0; k < path.bounces.size(); ++k) {
        const Plane pl = surface_plane(scene, path.bounces[k].surface);
        const Vec3 p = v[k + 1];
        if (std::abs(dot(p - pl.point, pl.normal)) > tol)
            return "reflection point " + std::to_string(k) + " off its surface plane";
        if (!on_surface_extent(scene, path.bounces[k].surface, p, tol))
            return "reflection point " + std::to_string(k) + " outside its surface";
        const Vec3 din = normalized(p - v[k]);
        const Vec3 dout = normalized(v[k + 2] - p);
        const double a_in = incidence_angle(din, pl.normal);
        const double a_out = incidence_angle(dout, pl.normal);
        if (std::abs(a_in - a_out) > tol)
            return "specular law violated at bounce " + std::to_string(k);
        const Vec3 refl = din - (2.0 * dot(din, pl.normal)) * pl.normal;
        if (norm(refl - dout) > 1e3 * tol)
            return "outgoing ray not in the plane of incidence at bounce " + std::to_string(k);
    }
    return std::nullopt;
}

std::complex<double> fresnel_reflection(const Material& material, double freq_hz, double incidence)
{
    const double sigma = material.conductivity(freq_hz);
    const std::complex<double> eps(material.rel_permittivity,
                                   -sigma / (2.0 * std::numbers::pi * freq_hz * kVacuumPermittivity));
    const double c = std::cos(incidence);
    const double s = std::sin(incidence);
    const std::complex<double> root = std::sqrt(eps - s * s);
    return (c - root) / (c + root);
}

std::complex<double> path_amplitude(const Path& path, double freq_hz,
                                    const std::optional<UpaConfig>& tx_antenna)
{
    const double lambda = kSpeedOfLight / freq_hz;
    double gain = 1.0;
    if (tx_antenna) {
        const auto ang = array_angles(*tx_antenna, path.vertices[1] - path.vertices[0]);
        gain = upa_gain(*tx_antenna, ang.azimuth, ang.elevation);
    }
    std::complex<double> a = lambda / (4.0 * std::numbers::pi * path.total_length) * std::sqrt(gain);
    for (const Bounce& b : path.bounces)
        a *= fresnel_reflection(b.material, freq_hz, b.incidence);
    return a * std::polar(1.0, -2.0 * std::numbers::pi * path.total_length / lambda);
}

double received_power(std::span<const std::complex<double>> amplitudes, double tx_power_dbm)
{
    if (amplitudes.empty())
        return -std::numeric_limits<double>::infinity();
    std::complex<double> sum{0.0, 0.0};
    for (const auto& a : amplitudes)
        sum += a;
    return tx_power_dbm + 20.0 * std::log10(std::abs(sum));
}

double trace_point(const Scene& scene, const std::optional<UpaConfig>& antenna, double freq_hz, Vec3 rx,
                   int max_reflections, double tx_power_dbm)
{
    const auto paths = enumerate_paths(scene, scene.bs_position, rx, max_reflections);
    std::vector<std::complex<double>> amps;
    amps.reserve(paths.size());
    for (const Path& p : paths)
        amps.push_back(path_amplitude(p, freq_hz, antenna));
    return received_power(amps, tx_power_dbm);
}

RfMap generate_rf_map(const Scene& scene, const std::optional<UpaConfig>& antenna, double freq_hz,
                      const GridSpec& grid, const TraceOptions& opts)
{
    if (auto v = validate_scene(scene); !v.empty())
        throw ConfigError("scene '" + scene.name + "' invalid: " + v.front());
    grid.validate(scene.bounds);
    if (antenna)
        antenna->validate();
    if (!(freq_hz > 0.0))
        throw ConfigError("frequency must be positive");

    RfMap map;
    map.width = grid.nx;
    map.height = grid.ny;
    map.rss_dbm.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0.0);

    auto rows = [&](int v0, int v1) {
        for (int v = v0; v < v1; ++v)
            for (int u = 0; u < grid.nx; ++u) {
                const Vec2 c = grid.cell_center(scene.bounds, u, v);
                map.rss_dbm[static_cast<std::size_t>(v) * grid.nx + u] = trace_point(
                    scene, antenna, freq_hz, {c.x, c.y, scene.rx_height}, opts.max_reflections, opts.tx_power_dbm);
            }
    };

    const unsigned threads = std::min<unsigned>(opts.threads ? opts.threads : io::worker_count(),
                                                static_cast<unsigned>(grid.ny));
    if (threads <= 1) {
        rows(0, grid.ny);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            const int v0 = static_cast<int>(grid.ny * t / threads);
            const int v1 = static_cast<int>(grid.ny * (t + 1) / threads);
            pool.emplace_back(rows, v0, v1);
        }
    }
    return map;
}

} // namespace rfgan
