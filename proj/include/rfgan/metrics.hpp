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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rfgan {

inline constexpr double kPsnrCap = 100.0;

// Image accessors: row-major planes of width * height values.
template <typename T>
double mae(std::span<const T> x, std::span<const T> y);
template <typename T>
double rmse(std::span<const T> x, std::span<const T> y);
template <typename T>
double mse(std::span<const T> x, std::span<const T> y);
// 10 log10(peak^2 / mse), kPsnrCap when mse is 0.
double psnr_from_mse(double mse, double peak = 1.0);
template <typename T>
double psnr(std::span<const T> x, std::span<const T> y, double peak = 1.0);

struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double peak = 1.0;
};

inline constexpr std::array<double, 5> kMsSsimWeights{0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

// Scales with the smallest side still >= window, at most 5.
int ms_ssim_scales(int width, int height, const SsimParams& p = {});

// Normalized 1-D Gaussian taps.
std::vector<double> gaussian_window(int size, double sigma);

struct SsimScale {
    double ssim = 0.0; // mean of l * cs
    double cs = 0.0;   // mean of contrast-structure
};

// Valid-window SSIM statistics at a single scale.
SsimScale ssim_scale(std::span<const double> x, std::span<const double> y, int width, int height,
                     const SsimParams& p = {});

// Product over scales of cs^w (last scale: ssim^w); negative bases are
// clamped to 0 before the power.
template <typename T>
double ms_ssim(std::span<const T> x, std::span<const T> y, int width, int height, const SsimParams& p = {});

struct MetricsReport {
    double mae = 0.0;
    double rmse = 0.0;
    double psnr_db = 0.0;
    double ms_ssim = 0.0;
    std::size_t count = 0;
    std::size_t psnr_capped = 0;

    // "count,mae,rmse,psnr_db,ms_ssim"
    static std::string header();
    std::string row() const;
    std::string to_json() const;
};

// Metrics of one pair as a one-sample report.
template <typename T>
MetricsReport evaluate_pair(std::span<const T> real, std::span<const T> fake, int width, int height);
// Sample-weighted mean of per-sample reports.
MetricsReport average(std::span<const MetricsReport> reports);

} // namespace rfgan
