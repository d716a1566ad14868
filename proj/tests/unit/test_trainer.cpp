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
#include "rfgan/io.hpp"
#include "rfgan/trainer.hpp"

#include "helpers.hpp"

#include <catch2/catch.hpp>

#include <algorithm>
#include <set>

using namespace rfgan;

namespace {

TrainConfig tiny_config()
{
    TrainConfig c;
    c.batch_size = 2;
    c.steps = 4;
    c.eval_interval = 2;
    c.seed = 3;
    c.generator = {8, 4, 16, 1, 7, 4};
    c.discriminator = {4, 7, 1, 16};
    return c;
}

const std::vector<Sample>& tiny_data()
{
    static const std::vector<Sample> data = [] {
        const auto cfg = test::tiny_sweep();
        std::vector<Sample> v;
        for (auto cell : {std::array<int, 2>{4, 4}, {12, 4}, {4, 12}})
            v.push_back(make_sample(preset_layout("room1"), cell, {4, 4}, 28e9, cfg));
        return v;
    }();
    return data;
}

} // namespace

TEST_CASE("stream generators are keyed by seed, stream and index", "[trainer]")
{
    auto a = stream_rng(1, 2, 3), b = stream_rng(1, 2, 3), c = stream_rng(1, 2, 4), d = stream_rng(1, 3, 3);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
}

TEST_CASE("batches walk shuffled epochs", "[trainer]")
{
    std::multiset<std::size_t> seen;
    for (long s = 0; s < 5; ++s)
        for (std::size_t i : batch_indices(7, s, 2, 10))
            seen.insert(i);
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(seen.count(i) == 1);
    CHECK(batch_indices(7, 3, 4, 10) == batch_indices(7, 3, 4, 10));
}

TEST_CASE("train config parsing", "[trainer]")
{
    const TrainConfig c = parse_train_config(R"({"steps": 10, "weights": {"mae": 5}, "generator": {"base_channels": 8}})");
    CHECK(c.steps == 10);
    CHECK(c.weights.mae == 5.0);
    CHECK(c.generator.base_channels == 8);
    CHECK(parse_train_config(train_config_json(c)).steps == 10);
    CHECK_THROWS_AS(parse_train_config(R"({"stepz": 10})"), ConfigError);
    CHECK_THROWS_AS(parse_train_config(R"({"generator": {"cond_channels": 9}})"), ConfigError);
    CHECK_THROWS_AS(parse_train_config(R"({"batch_size": 0})"), ConfigError);
}

TEST_CASE("Adam moves parameters against the gradient", "[trainer]")
{
    ModelParams<float> p;
    auto& w = p.add("w", Tensor<float>({1, 1, 1, 2}, {1.0f, -1.0f}));
    w.mutable_grad() = Tensor<float>({1, 1, 1, 2}, {0.5f, -0.5f});
    Adam<float> opt(0.1, 0.5, 0.999, 1e-8);
    opt.init(p);
    opt.step(p, 1);
    CHECK(w.value()[0] == Approx(0.9f));
    CHECK(w.value()[1] == Approx(-0.9f));
}

TEST_CASE("batches stack condition and target", "[trainer]")
{
    const auto& d = tiny_data();
    std::vector<const Sample*> ptrs{&d[0], &d[2]};
    const Batch b = make_batch(ptrs);
    CHECK(b.cond.shape() == Shape{2, 7, 16, 16});
    CHECK(b.real.shape() == Shape{2, 1, 16, 16});
    CHECK(b.real(1, 0, 3, 5) == d[2].target[3 * 16 + 5]);
}

TEST_CASE("training is reproducible and resumable", "[trainer]")
{
    const auto& data = tiny_data();
    const auto cfg = tiny_config();
    const auto a = test::scratch("train-a");
    const auto b = test::scratch("train-b");
    const auto c = test::scratch("train-c");
    const TrainResult ra = train(cfg, data, a);
    train(cfg, data, b);
    CHECK(ra.final_checkpoint.filename() == "ckpt-000004.radc");
    CHECK(io::read_file(a / "ckpt-000004.radc") == io::read_file(b / "ckpt-000004.radc"));
    CHECK(ra.initial_mae > 0.0);

    auto half = cfg;
    half.steps = 2;
    train(half, data, c);
    train(cfg, data, c, c / "ckpt-000002.radc");
    CHECK(io::read_file(a / "ckpt-000004.radc") == io::read_file(c / "ckpt-000004.radc"));
    CHECK(io::read_text(a / "loss-curve.csv") == io::read_text(c / "loss-curve.csv"));
    CHECK(io::read_text(a / "latest").find("ckpt-000004.radc") != std::string::npos);
}

TEST_CASE("checkpointed state restores exactly", "[trainer]")
{
    TrainState s(tiny_config());
    const auto& d = tiny_data();
    std::vector<const Sample*> ptrs{&d[0], &d[1]};
    std::mt19937_64 rng(1);
    train_step(s, make_batch(ptrs), randn<float>({2, 8, 1, 1}, rng));
    const auto bytes = encode_checkpoint(make_checkpoint(s));
    const TrainState back = restore_state(decode_checkpoint(bytes));
    CHECK(back.step == 1);
    CHECK(encode_checkpoint(make_checkpoint(back)) == bytes);
}

TEST_CASE("resolution mismatch is a data error", "[trainer]")
{
    auto cfg = tiny_config();
    cfg.generator.target_resolution = 32;
    cfg.discriminator.input_resolution = 32;
    CHECK_THROWS_AS(train(cfg, tiny_data(), test::scratch("train-bad")), DataError);
}

TEST_CASE("synthesis and evaluation", "[trainer]")
{
    const auto& d = tiny_data();
    const TrainState s(tiny_config());
    const auto m = synthesize(s.g, d[0].condition, 5);
    CHECK(m.size() == 256);
    CHECK(m == synthesize(s.g, d[0].condition, 5));
    CHECK(m != synthesize(s.g, d[0].condition, 6));
    const EvalResult r = evaluate(s.g, d, 1234, 2);
    CHECK(r.rows.size() == 3);
    CHECK(r.aggregate.count == 3);
    const EvalResult base = evaluate_mean_baseline(d, d);
    CHECK(base.aggregate.rmse >= base.aggregate.mae);
}
