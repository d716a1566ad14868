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

#include "rfgan/dataset.hpp"
#include "rfgan/losses.hpp"
#include "rfgan/metrics.hpp"
#include "rfgan/model.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace rfgan {

struct TrainConfig {
    int batch_size = 8;
    int steps = 2000;
    double lr_g = 2e-4;
    double lr_d = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
    LossWeights weights;
    double focal_gamma = 2.0;
    bool gl_raw_cosine = false;
    int eval_interval = 500;
    int eval_z_draws = 1;
    std::uint64_t eval_seed = 1234;
    GeneratorConfig generator{64, 16, 32, 1, 7, 16};
    DiscriminatorConfig discriminator{16, 7, 1, 32};

    void validate() const;
};

// JSON keys mirror the field names; generator/discriminator are nested
// objects. Unknown keys are rejected.
TrainConfig parse_train_config(const std::string& json_text);
std::string train_config_json(const TrainConfig& cfg);

// Independent generator stream for (seed, stream, index).
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

template <typename T>
class Adam {
public:
    Adam() = default;
    Adam(double lr, double beta1, double beta2, double eps) : lr_(lr), b1_(beta1), b2_(beta2), eps_(eps) {}

    // Applies one update from the accumulated gradients; `t` is the 1-based
    // step used for bias correction.
    void step(ModelParams<T>& params, long t);

    std::vector<Tensor<T>>& m() { return m_; }
    std::vector<Tensor<T>>& v() { return v_; }
    const std::vector<Tensor<T>>& m() const { return m_; }
    const std::vector<Tensor<T>>& v() const { return v_; }
    void init(const ModelParams<T>& params);

private:
    double lr_ = 2e-4, b1_ = 0.5, b2_ = 0.999, eps_ = 1e-8;
    std::vector<Tensor<T>> m_, v_;
};

struct StepReport {
    LossReport g;
    double d_loss = 0.0;
};

// A batch in model layout.
struct Batch {
    Tensor<float> cond;  // (B, 4 + k, R, R)
    Tensor<float> real;  // (B, 1, R, R)
};

Batch make_batch(std::span<const Sample* const> samples);

struct TrainState {
    TrainConfig cfg;
    Generator<float> g;
    Discriminator<float> d;
    Adam<float> opt_g;
    Adam<float> opt_d;
    PerceptualExtractor<float> perceptual;
    long step = 0;
    StepReport ema;

    explicit TrainState(const TrainConfig& cfg);
};

// One D update then one G update on `batch` with noise `z` (B, z_dim, 1, 1).
StepReport train_step(TrainState& state, const Batch& batch, const Tensor<float>& z);

// Full train state as a checkpoint (model config echo, params, optimizer).
Checkpoint make_checkpoint(const TrainState& state);
TrainState restore_state(const Checkpoint& ckpt);
Generator<float> load_generator(const Checkpoint& ckpt);

struct TrainResult {
    std::filesystem::path final_checkpoint;
    StepReport last;
    double initial_mae = 0.0;
};

using ProgressFn = std::function<void(long step, const StepReport&)>;

// Trains on the listed samples. Checkpoints land in out_dir every
// eval_interval steps as ckpt-NNNNNN.radc; loss-curve.csv holds one row per
// step; "latest" names the final checkpoint. A non-empty `resume` continues
// from that checkpoint.
TrainResult train(const TrainConfig& cfg, const std::vector<Sample>& data, const std::filesystem::path& out_dir,
                  const std::filesystem::path& resume = {}, const ProgressFn& progress = {});

// Batch order for a step: fixed shuffled epochs derived from (seed, epoch).
std::vector<std::size_t> batch_indices(std::uint64_t seed, long step, int batch_size, std::size_t n);

// Map for one condition with a fixed noise draw.
std::vector<float> synthesize(const Generator<float>& g, const ConditioningSet& cond, std::uint64_t z_seed);

struct EvalRow {
    SampleMeta meta;
    MetricsReport metrics;
};

struct EvalResult {
    std::vector<EvalRow> rows;
    MetricsReport aggregate;
};

EvalResult evaluate(const Generator<float>& g, const std::vector<Sample>& test, std::uint64_t eval_seed,
                    int z_draws = 1);
// Predicts the per-pixel mean of the training targets for every test sample.
EvalResult evaluate_mean_baseline(const std::vector<Sample>& train, const std::vector<Sample>& test);

} // namespace rfgan
