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
#include "rfgan/scene.hpp"

#include <complex>
#include <vector>

namespace rfgan {

// Uniform planar array with uniform excitation and a fixed broadside beam.
struct UpaConfig {
    int rows = 4;
    int cols = 4;
    double element_spacing = 0.5; // wavelengths
    double carrier_freq = 28e9;   // Hz
    Vec3 boresight{0.0, 0.0, -1.0};

    void validate() const;
    int elements() const { return rows * cols; }
};

// Hemispherical cosine patch element: cos(angle) in the front hemisphere.
double element_gain(double angle_from_boresight);

// Uniform-excitation array factor. `elevation` is the polar angle measured
// from boresight; negative values mirror through boresight.
std::complex<double> array_factor(const UpaConfig& cfg, double azimuth, double elevation);

// element_gain(|elevation|) * |AF|^2 / N; equals N at boresight.
double upa_gain(const UpaConfig& cfg, double azimuth, double elevation);

// Angles (azimuth, polar-from-boresight) of a world direction in the array frame.
struct ArrayAngles {
    double azimuth;
    double elevation;
};
ArrayAngles array_angles(const UpaConfig& cfg, Vec3 direction);

struct PatternRaster {
    int width = 0;
    int height = 0;
    std::vector<double> gain; // row-major, peak-normalized to 1

    double at(int u, int v) const { return gain[static_cast<std::size_t>(v) * width + u]; }
};

// Equirectangular raster: column u -> azimuth 2*pi*u/width, row v ->
// elevation pi*v/height - pi/2.
PatternRaster rasterize_pattern(const UpaConfig& cfg, const GridSpec& grid);

} // namespace rfgan
