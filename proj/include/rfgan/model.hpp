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

#include "rfgan/autograd.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rfgan {

struct GeneratorConfig {
    int z_dim = 64;
    int base_channels = 64;
    int target_resolution = 64;
    int output_channels = 1;
    int cond_channels = 7;
    int spade_hidden = 32;

    void validate() const;
    // Number of ResBlk + upsample stages, log2(res / 4).
    int stages() const;
    // Channel width entering stage i (i == stages() gives the final width).
    int channels_at(int stage) const;
};

struct DiscriminatorConfig {
    int base_channels = 64;
    int cond_channels = 7;
    int map_channels = 1;
    int input_resolution = 64;

    void validate() const;
    int in_channels() const { return cond_channels + map_channels; }
    // Stride-2 stages needed to reach 8x8.
    int downsamples() const;
    int channels_at(int layer) const;
};

// Named parameters in creation order.
template <typename T>
class ModelParams {
public:
    ag::Var<T>& add(const std::string& name, Tensor<T> value);
    const ag::Var<T>& at(const std::string& name) const;
    bool contains(const std::string& name) const;

    std::size_t size() const { return entries_.size(); }
    std::size_t numel() const;
    const std::vector<std::pair<std::string, ag::Var<T>>>& entries() const { return entries_; }
    std::vector<std::pair<std::string, ag::Var<T>>>& entries() { return entries_; }
    void zero_grad();

private:
    std::vector<std::pair<std::string, ag::Var<T>>> entries_;
};

template <typename T>
struct Generator {
    GeneratorConfig cfg;
    ModelParams<T> params;

    // z (N, z_dim, 1, 1); cond (N, cond_channels, res, res). Output
    // (N, output_channels, res, res) in (0, 1).
    ag::Var<T> forward(ag::Tape<T>& tape, const Tensor<T>& z, const Tensor<T>& cond) const;
};

template <typename T>
struct DiscriminatorOutput {
    ag::Var<T> logits;                 // (N, 1, 5, 5)
    std::vector<ag::Var<T>> features;  // downsamples() + 1 taps
};

template <typename T>
struct Discriminator {
    DiscriminatorConfig cfg;
    ModelParams<T> params;

    DiscriminatorOutput<T> forward(ag::Tape<T>& tape, const ag::Var<T>& map, const Tensor<T>& cond) const;
};

// Weights ~ N(0, 0.02), biases 0, SPADE gamma biases 1.
template <typename T>
Generator<T> build_generator(const GeneratorConfig& cfg, std::uint64_t seed);
template <typename T>
Discriminator<T> build_discriminator(const DiscriminatorConfig& cfg, std::uint64_t seed);

// ---- checkpoint ------------------------------------------------------------

struct NamedTensor {
    std::string name;
    Tensor<float> value;
};

struct Checkpoint {
    std::string config_json;
    std::vector<NamedTensor> tensors;

    const NamedTensor* find(const std::string& name) const;
    const Tensor<float>& at(const std::string& name) const;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

// "RADC" | u32 version | config json | u32 count | {name, u32 n,c,h,w, f32 data}*
// | u64 FNV-1a of everything before it.
std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

template <typename T>
void export_params(const ModelParams<T>& params, const std::string& prefix, std::vector<NamedTensor>& out);
// Every parameter must be present with a matching shape.
template <typename T>
void import_params(ModelParams<T>& params, const std::string& prefix, const Checkpoint& ckpt);

std::string model_config_json(const GeneratorConfig& g, const DiscriminatorConfig& d);
std::pair<GeneratorConfig, DiscriminatorConfig> parse_model_config(const std::string& json_text);

} // namespace rfgan
