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

#include "rfgan/metrics.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <catch2/catch.hpp>

#include <cmath>

using namespace rfgan;

TEST_CASE("pixel metrics", "[metrics]")
{
    const std::vector<double> a{0.0, 0.5, 1.0, 0.25}, b{0.1, 0.5, 0.8, 0.25};
    CHECK(mae<double>(a, b) == Approx(0.075));
    CHECK(mse<double>(a, b) == Approx(0.0125));
    CHECK(rmse<double>(a, b) == Approx(std::sqrt(0.0125)));
    CHECK(psnr_from_mse(0.01) == Approx(20.0).epsilon(1e-14));
    CHECK(psnr_from_mse(0.0) == kPsnrCap);
    CHECK(psnr<double>(a, a) == kPsnrCap);
}

TEST_CASE("RMSE bounds MAE", "[metrics]")
{
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20; ++i) {
        const auto x = test::random_map(256, rng), y = test::random_map(256, rng);
        CHECK(rmse<float>(x, y) >= mae<float>(x, y));
    }
}

TEST_CASE("MS-SSIM identities and scale count", "[metrics]")
{
    std::mt19937_64 rng(9);
    const auto x = test::random_map(32 * 32, rng);
    CHECK(ms_ssim<float>(x, x, 32, 32) == Approx(1.0).margin(1e-6));
    CHECK(ms_ssim_scales(32, 32) == 2);
    CHECK(ms_ssim_scales(64, 64) == 3);
    CHECK(ms_ssim_scales(256, 256) == 5);
    std::vector<float> inv(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        inv[i] = 1.0f - x[i];
    const double s = ms_ssim<float>(x, inv, 32, 32);
    CHECK(s >= 0.0);
    CHECK(s < 0.1);
}

TEST_CASE("MS-SSIM agrees with direct windows", "[metrics]")
{
    std::mt19937_64 rng(10);
    const auto xf = test::random_map(48 * 48, rng), yf = test::random_map(48 * 48, rng);
    std::vector<double> x(xf.begin(), xf.end()), y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = 0.7 * x[i] + 0.3 * yf[i];
    CHECK(ms_ssim<double>(x, y, 48, 48) == Approx(oracle::ms_ssim_direct(x, y, 48, 48)).margin(1e-9));
}

TEST_CASE("Gaussian window is normalized", "[metrics]")
{
    const auto g = gaussian_window(11, 1.5);
    double s = 0;
    for (double v : g)
        s += v;
    CHECK(s == Approx(1.0));
    CHECK(g[5] > g[4]);
    CHECK(g[0] == Approx(g[10]));
}

TEST_CASE("report formatting and averaging", "[metrics]")
{
    CHECK(MetricsReport::header() == "count,mae,rmse,psnr_db,ms_ssim");
    MetricsReport a{0.1, 0.2, 10.0, 0.5, 1, 0}, b{0.3, 0.4, 20.0, 0.7, 3, 1};
    const std::vector<MetricsReport> v{a, b};
    const MetricsReport m = average(v);
    CHECK(m.count == 4);
    CHECK(m.mae == Approx(0.25));
    CHECK(m.psnr_capped == 1);
    CHECK(m.row().rfind("4,", 0) == 0);
}
