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

#include "rfgan/antenna.hpp"
#include "rfgan/geometry.hpp"
#include "rfgan/scene.hpp"

#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rfgan {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;
inline constexpr int kFloorSurface = -1;

// Reflecting surfaces are walls (by index into Scene::walls) and the floor.
struct Bounce {
    int surface = kFloorSurface;
    Material material;
    double incidence = 0.0; // radians from the surface normal
};

struct Path {
    std::vector<Vec3> vertices; // tx, reflection points..., rx
    std::vector<Bounce> bounces;
    double total_length = 0.0;

    int reflections() const { return static_cast<int>(bounces.size()); }
};

// All unblocked specular paths with at most `max_reflections` (0..2) bounces
// off walls and floor, LOS first, then by bounce count and surface order.
std::vector<Path> enumerate_paths(const Scene& scene, Vec3 tx, Vec3 rx, int max_reflections);

// Empty when the path is a valid specular path within `tol`; otherwise a
// description of the first violation.
std::optional<std::string> specular_violation(const Scene& scene, const Path& path, double tol = 1e-9);

// TE Fresnel coefficient with complex permittivity eps_r - j sigma/(2 pi f eps0).
std::complex<double> fresnel_reflection(const Material& material, double freq_hz, double incidence);

// Complex baseband amplitude of one path. No TX antenna means isotropic.
std::complex<double> path_amplitude(const Path& path, double freq_hz,
                                    const std::optional<UpaConfig>& tx_antenna);

// tx_power + 20 log10 |sum|; -inf when there are no paths.
double received_power(std::span<const std::complex<double>> amplitudes, double tx_power_dbm);

struct RfMap {
    int width = 0;
    int height = 0;
    std::vector<double> rss_dbm; // row-major; -inf where no path reaches
    double min_dbm = -150.0;
    double max_dbm = 0.0;

    double at(int u, int v) const { return rss_dbm[static_cast<std::size_t>(v) * width + u]; }
};

struct TraceOptions {
    int max_reflections = 2;
    double tx_power_dbm = 0.0;
    unsigned threads = 0; // 0: io::worker_count()
};

// Received power at one point from the scene's BS.
double trace_point(const Scene& scene, const std::optional<UpaConfig>& antenna, double freq_hz, Vec3 rx,
                   int max_reflections, double tx_power_dbm);

// One receiver per cell center at scene.rx_height.
RfMap generate_rf_map(const Scene& scene, const std::optional<UpaConfig>& antenna, double freq_hz,
                      const GridSpec& grid, const TraceOptions& opts = {});

} // namespace rfgan
