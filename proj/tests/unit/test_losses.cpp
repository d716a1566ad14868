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

#include "rfgan/errors.hpp"
#include "rfgan/losses.hpp"

#include "oracles.hpp"

#include <catch2/catch.hpp>

#include <cmath>
#include <limits>

using namespace rfgan;
using ag::Tape;

namespace {

Tensor<double> ramp(int n, int h, int w, double ax, double ay)
{
    Tensor<double> t({n, 1, h, w});
    for (int i = 0; i < n; ++i)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                t(i, 0, y, x) = 0.3 + ax * x + ay * y;
    return t;
}

} // namespace

TEST_CASE("adversarial losses at zero logits", "[losses]")
{
    Tape<double> t;
    const auto z = t.constant(Tensor<double>({2, 1, 5, 5}, 0.0));
    CHECK(adv_d_loss(z, z).item() == Approx(2 * std::log(2.0)).epsilon(1e-12));
    CHECK(adv_g_loss(z).item() == Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("losses vanish on identical inputs", "[losses]")
{
    std::mt19937_64 rng(4);
    Tensor<double> x({2, 1, 16, 16});
    std::uniform_real_distribution<double> u(0, 1);
    for (auto& v : x.values())
        v = u(rng);
    Tape<double> t;
    const auto a = t.constant(x), b = t.constant(x);
    CHECK(l_mae(a, b).item() == 0.0);
    CHECK(l_focal(a, b).item() == 0.0);
    CHECK(l_fm<double>({a}, {b}).item() == 0.0);
    CHECK(l_perceptual(a, b, PerceptualExtractor<double>()).item() == 0.0);
    CHECK(l_gl(a, b).item() == Approx(0.0).margin(1e-12));
}

TEST_CASE("Sobel of a ramp is constant inside", "[losses]")
{
    Tape<double> t;
    const auto g = sobel_gradients(t.constant(ramp(1, 6, 6, 0.1, 0.0)));
    CHECK(g.gx.value()(0, 0, 3, 3) == Approx(0.8));
    CHECK(g.gy.value()(0, 0, 3, 3) == Approx(0.0).margin(1e-15));
}

TEST_CASE("GL direction term is one for orthogonal gradients", "[losses]")
{
    Tape<double> t;
    const auto terms = l_gl_terms(t.constant(ramp(1, 8, 8, 0.05, 0.0)), t.constant(ramp(1, 8, 8, 0.0, 0.05)));
    CHECK(terms.direction.item() == Approx(1.0).margin(1e-6));
    const auto raw = l_gl_terms(t.constant(ramp(1, 8, 8, 0.05, 0.0)), t.constant(ramp(1, 8, 8, 0.0, 0.05)), true);
    CHECK(raw.direction.item() == Approx(0.0).margin(1e-6));
}

TEST_CASE("GL matches the two-pass reference", "[losses]")
{
    const auto a = ramp(1, 10, 10, 0.02, 0.03), b = ramp(1, 10, 10, 0.04, -0.01);
    Tape<double> t;
    const auto terms = l_gl_terms(t.constant(a), t.constant(b));
    const auto ref = oracle::gl_direct(a.values(), b.values(), 1, 10, 10);
    CHECK(terms.kl.item() == Approx(ref.kl).epsilon(1e-7));
    CHECK(terms.direction.item() == Approx(ref.direction).epsilon(1e-7));
}

TEST_CASE("Sobel perturbation hook", "[losses]")
{
    const double before = sobel_kernels().gx[0][0];
    set_sobel_perturbation(1e-2);
    CHECK(sobel_kernels().gx[0][0] == Approx(before + 1e-2));
    set_sobel_perturbation(0.0);
    CHECK(sobel_kernels().gx[0][0] == before);
}

TEST_CASE("total loss applies weights and rejects non-finite terms", "[losses]")
{
    Tape<double> t;
    auto c = [&](double v) { return t.input(Tensor<double>({1, 1, 1, 1}, v), true); };
    LossWeights w;
    LossReport r;
    const auto total = total_g_loss<double>({c(1.0), c(0.1), c(0.2), c(0.3), {}, c(0.4)}, w, r);
    CHECK(total.item() == Approx(1.0 + 10 * 0.1 + 0.2 + 10 * 0.3 + 0.4));
    CHECK(r.vgg == 0.0);
    CHECK(r.total == Approx(total.item()));
    LossWeights bad;
    bad.mae = -1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("focal loss weighs strong-signal pixels more", "[losses]")
{
    Tape<double> t;
    const auto real = t.constant(Tensor<double>({1, 1, 1, 2}, {0.9, 0.1}));
    const auto off_strong = t.constant(Tensor<double>({1, 1, 1, 2}, {0.8, 0.1}));
    const auto off_weak = t.constant(Tensor<double>({1, 1, 1, 2}, {0.9, 0.0}));
    CHECK(l_focal(real, off_strong).item() > 10 * l_focal(real, off_weak).item());
    CHECK(l_focal(real, off_strong, 0.0).item() == Approx(l_focal(real, off_weak, 0.0).item()));
}
