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

#include "rfgan/autograd.hpp"
#include "rfgan/errors.hpp"

#include "gradcheck.hpp"

#include <catch2/catch.hpp>

#include <cmath>
#include <limits>

using namespace rfgan;
using ag::Tape;
using ag::Var;

TEST_CASE("gradient of a quadratic", "[autograd]")
{
    Var<double> x = ag::parameter(Tensor<double>({1, 1, 1, 3}, {1.0, -2.0, 0.5}), "x");
    Tape<double> t;
    const auto y = ag::sum(ag::mul(oracle::bind(t, x), oracle::bind(t, x)));
    CHECK(y.item() == Approx(5.25));
    t.backward(y);
    CHECK(x.grad().values() == std::vector<double>{2.0, -4.0, 1.0});
}

TEST_CASE("convolution forward on a known input", "[autograd]")
{
    Tape<double> t;
    Tensor<double> img({1, 1, 3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    const auto x = t.constant(img);
    const auto w = t.constant(Tensor<double>({1, 1, 3, 3}, 1.0));
    const auto same = ag::conv2d(x, w, Var<double>{}, 1, 1);
    REQUIRE(same.shape() == Shape{1, 1, 3, 3});
    CHECK(same.value()(0, 0, 1, 1) == 45.0);
    CHECK(same.value()(0, 0, 0, 0) == 12.0);
    const auto strided = ag::conv2d(x, w, Var<double>{}, 2, 1);
    CHECK(strided.shape() == Shape{1, 1, 2, 2});
    CHECK(strided.value()(0, 0, 1, 1) == 28.0);
}

TEST_CASE("broadcasting follows size-1 axes", "[autograd]")
{
    Tape<float> t;
    const auto a = t.constant(Tensor<float>({2, 3, 4, 4}, 1.0f));
    const auto b = t.constant(Tensor<float>({1, 3, 1, 1}, 2.0f));
    CHECK(ag::mul(a, b).shape() == Shape{2, 3, 4, 4});
    const auto c = t.constant(Tensor<float>({2, 2, 4, 4}, 1.0f));
    CHECK_THROWS_AS(ag::add(a, c), ShapeError);
}

TEST_CASE("instance norm output has zero mean and unit variance", "[autograd]")
{
    std::mt19937_64 rng(3);
    Tape<double> t;
    const auto y = ag::instance_norm(t.constant(randn<double>({2, 3, 5, 5}, rng, 4.0)));
    for (int n = 0; n < 2; ++n)
        for (int c = 0; c < 3; ++c) {
            double s = 0, s2 = 0;
            for (int h = 0; h < 5; ++h)
                for (int w = 0; w < 5; ++w) {
                    s += y.value()(n, c, h, w);
                    s2 += y.value()(n, c, h, w) * y.value()(n, c, h, w);
                }
            CHECK(s / 25 == Approx(0.0).margin(1e-12));
            CHECK(s2 / 25 == Approx(1.0).epsilon(1e-3));
        }
}

TEST_CASE("ops need a tape and finite values", "[autograd]")
{
    Var<double> p = ag::parameter(Tensor<double>({1, 1, 1, 1}, 1.0));
    CHECK_THROWS(ag::relu(p));
    Tape<double> t;
    const auto z = t.constant(Tensor<double>({1, 1, 1, 1}, 0.0));
    CHECK_THROWS_AS(ag::log(z), NumericalError);
    const auto nan = Tensor<double>({1, 1, 1, 1}, std::numeric_limits<double>::quiet_NaN());
    CHECK_THROWS_AS(ag::exp(t.constant(nan)), NumericalError);
}

TEST_CASE("backward runs once per tape", "[autograd]")
{
    Var<double> x = ag::parameter(Tensor<double>({1, 1, 1, 2}, 1.0));
    Tape<double> t;
    const auto y = ag::sum(oracle::bind(t, x));
    t.backward(y);
    CHECK_THROWS(t.backward(y));
    Tape<double> t2;
    CHECK_THROWS_AS(t2.backward(ag::scale(oracle::bind(t2, x), 2.0)), ShapeError);
}

TEST_CASE("constants receive no gradient", "[autograd]")
{
    Var<double> x = ag::parameter(Tensor<double>({1, 1, 1, 2}, 3.0));
    Tape<double> t;
    const auto c = t.constant(Tensor<double>({1, 1, 1, 2}, 2.0));
    t.backward(ag::sum(ag::mul(oracle::bind(t, x), c)));
    CHECK(x.grad().values() == std::vector<double>{2.0, 2.0});
    CHECK(c.grad().empty());
}

TEST_CASE("upsample, pad and concat shapes", "[autograd]")
{
    Tape<float> t;
    const auto x = t.constant(Tensor<float>({2, 3, 4, 4}, 1.0f));
    CHECK(ag::upsample_nearest_x2(x).shape() == Shape{2, 3, 8, 8});
    CHECK(ag::pad_replicate(x, 1).shape() == Shape{2, 3, 6, 6});
    CHECK(ag::concat_channels<float>({x, x}).shape() == Shape{2, 6, 4, 4});
    CHECK(ag::sum_hw(x).shape() == Shape{2, 3, 1, 1});
    CHECK(ag::sum_hw(x).value()(1, 2, 0, 0) == 16.0f);
}

TEST_CASE("small end-to-end gradient check", "[autograd]")
{
    std::mt19937_64 rng(9);
    Var<double> x = ag::parameter(randn<double>({1, 2, 5, 5}, rng), "x");
    Var<double> w = ag::parameter(randn<double>({3, 2, 3, 3}, rng), "w");
    const oracle::GradCheck r = oracle::grad_check({{"x", x}, {"w", w}}, [&](Tape<double>& t) {
        return ag::mean(ag::sigmoid(ag::instance_norm(ag::conv2d(oracle::bind(t, x), w, Var<double>{}, 2, 1))));
    });
    CHECK(r.max_rel_error < 1e-6);
}
