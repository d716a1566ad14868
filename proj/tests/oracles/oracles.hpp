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

// Reference implementations used only for verification. Nothing here calls
// into the library code it is meant to check.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rfgan::oracle {

// Free-space received power, 20 log10(c / (4 pi f d)) + P_tx.
double friis_dbm(double distance_m, double freq_hz, double tx_power_dbm = 0.0);

// ---- image tree for an axis-aligned box room -----------------------------

// Planes: 0 x=0, 1 x=W, 2 y=0, 3 y=D, 4 floor z=0.
inline constexpr int kFloorPlane = 4;

struct BoxPath {
    std::vector<int> planes;
    std::vector<std::array<double, 3>> points; // tx, reflections..., rx
    double length = 0.0;
};

// Every specular path with up to `max_reflections` bounces on consecutive
// distinct planes, by exhaustive image enumeration and back-tracing.
std::vector<BoxPath> box_image_paths(double width, double depth, double wall_height, std::array<double, 3> tx,
                                     std::array<double, 3> rx, int max_reflections);

// ---- finite differences --------------------------------------------------

struct FdResult {
    double max_rel_error = 0.0;
    std::size_t worst = 0;
    double analytic = 0.0;
    double numeric = 0.0;
};

// Central differences of f over every entry of x, compared with `analytic`.
// Relative error uses max(|a|, |n|, atol) as the denominator. Only every
// `stride`-th entry is probed.
FdResult check_gradient(const std::function<double()>& f, std::span<double> x, std::span<const double> analytic,
                        double h = 1e-5, double atol = 1e-6, std::size_t stride = 1);

// ---- SSIM by direct windows ----------------------------------------------

// Per-window SSIM from explicit 2-D Gaussian weighted sums, 2x2 mean
// downsampling, and the truncated, renormalized 5-scale exponents.
double ms_ssim_direct(std::span<const double> x, std::span<const double> y, int width, int height);

// ---- gradient loss by two explicit passes --------------------------------

struct GlParts {
    double kl = 0.0;
    double direction = 0.0;
    double total() const { return kl + direction; }
};

// maps: n planes of width * height each.
GlParts gl_direct(std::span<const double> real, std::span<const double> fake, int n, int width, int height);

// ---- parameter count -----------------------------------------------------

std::size_t generator_param_count(int z_dim, int base, int res, int k_freq, int spade_hidden, int out_channels = 1);
std::size_t discriminator_param_count(int base, int res, int k_freq, int map_channels = 1);

// ---- wall rasterization by dense sampling --------------------------------

// Cells (row-major, nx * ny) whose closed box contains some sample point of
// any segment. Segments are {x0, y0, x1, y1}; grid origin at (0, 0).
std::vector<bool> sample_wall_cells(const std::vector<std::array<double, 4>>& segments, int nx, int ny,
                                    double cell, int samples_per_cell = 64);

} // namespace rfgan::oracle
