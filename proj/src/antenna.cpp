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

#include "rfgan/antenna.hpp"

#include "rfgan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rfgan {

void UpaConfig::validate() const
{
    if (rows < 1 || cols < 1)
        throw ConfigError("UPA rows and cols must be >= 1");
    if (!(element_spacing > 0.0))
        throw ConfigError("UPA element spacing must be positive");
    if (!(carrier_freq > 0.0))
        throw ConfigError("UPA carrier frequency must be positive");
    if (std::abs(norm(boresight) - 1.0) > 1e-9)
        throw ConfigError("UPA boresight must be a unit vector");
}

double element_gain(double angle)
{
    if (angle < 0.0 || angle >= std::numbers::pi / 2)
        return 0.0;
    return std::cos(angle);
}

std::complex<double> array_factor(const UpaConfig& cfg, double azimuth, double elevation)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double st = std::sin(elevation);
    const double kx = two_pi * cfg.element_spacing * st * std::cos(azimuth);
    const double ky = two_pi * cfg.element_spacing * st * std::sin(azimuth);
    // Centered phase reference; magnitude is unaffected by the choice.
    const double m0 = 0.5 * (cfg.rows - 1);
    const double n0 = 0.5 * (cfg.cols - 1);
    std::complex<double> sum_m{0.0, 0.0};
    for (int m = 0; m < cfg.rows; ++m)
        sum_m += std::polar(1.0, kx * (m - m0));
    std::complex<double> sum_n{0.0, 0.0};
    for (int n = 0; n < cfg.cols; ++n)
        sum_n += std::polar(1.0, ky * (n - n0));
    // Separable: the double sum factors into row and column sums.
    return sum_m * sum_n;
}

double upa_gain(const UpaConfig& cfg, double azimuth, double elevation)
{
    const double af = std::norm(array_factor(cfg, azimuth, elevation));
    return element_gain(std::abs(elevation)) * af / cfg.elements();
}

ArrayAngles array_angles(const UpaConfig& cfg, Vec3 direction)
{
    const Vec3 b = normalized(cfg.boresight);
    const Vec3 d = normalized(direction);
    // In-plane reference axis: world x projected onto the array plane, or y
    // when boresight is along x.
    Vec3 ref = std::abs(b.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 u1 = normalized(ref - dot(ref, b) * b);
    Vec3 u2 = cross(b, u1);
    const double c = std::clamp(dot(d, b), -1.0, 1.0);
    return {std::atan2(dot(d, u2), dot(d, u1)), std::acos(c)};
}

PatternRaster rasterize_pattern(const UpaConfig& cfg, const GridSpec& grid)
{
    cfg.validate();
    PatternRaster r;
    r.width = grid.nx;
    r.height = grid.ny;
    r.gain.resize(static_cast<std::size_t>(r.width) * r.height);
    double peak = 0.0;
    for (int v = 0; v < r.height; ++v) {
        const double el = std::numbers::pi * v / r.height - std::numbers::pi / 2;
        for (int u = 0; u < r.width; ++u) {
            const double az = 2.0 * std::numbers::pi * u / r.width;
            const double g = upa_gain(cfg, az, el);
            r.gain[static_cast<std::size_t>(v) * r.width + u] = g;
            peak = std::max(peak, g);
        }
    }
    if (peak > 0.0)
        for (double& g : r.gain)
            g /= peak;
    return r;
}

} // namespace rfgan
