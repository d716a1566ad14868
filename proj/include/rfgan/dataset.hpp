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

#include "rfgan/antenna.hpp"
#include "rfgan/propagation.hpp"
#include "rfgan/scene.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rfgan {

// ---- frequency code ------------------------------------------------------

struct FrequencyCode {
    std::vector<double> catalog; // Hz
    int index = 0;

    int k() const { return static_cast<int>(catalog.size()); }
    double frequency() const { return catalog[static_cast<std::size_t>(index)]; }
    std::vector<float> one_hot() const;
};

std::vector<double> default_catalog(); // 5, 28, 70 GHz

FrequencyCode encode_frequency(double freq_hz, std::span<const double> catalog);

// ---- normalization -------------------------------------------------------

struct NormRange {
    double min_dbm = -150.0;
    double max_dbm = 0.0;
};

// Linear map of [min, max] dBm onto [0, 1], clamped; -inf maps to 0.
double normalize_rss(double dbm, const NormRange& range);
double denormalize_rss(double value, const NormRange& range);
std::vector<float> normalize_rss(const RfMap& map);
RfMap denormalize_rss(std::span<const float> values, int width, int height, const NormRange& range);

// ---- conditioning --------------------------------------------------------

struct ConditioningSet {
    int width = 0;
    int height = 0;
    std::vector<float> semantic; // 3 planes: floor, wall, bs
    std::vector<float> pattern;  // 1 plane
    FrequencyCode freq;

    int channels() const { return 4 + freq.k(); }
    // Planes [semantic x3, pattern, one-hot frequency broadcast x k].
    std::vector<float> stack() const;
};

ConditioningSet assemble_condition(const SemanticMap& semantic, const PatternRaster& pattern, FrequencyCode freq);

struct SampleMeta {
    std::string room;
    std::array<int, 2> bs_cell{0, 0}; // (u, v)
    std::array<int, 2> upa{4, 4};     // (rows, cols)
    double freq_hz = 28e9;

    friend bool operator==(const SampleMeta&, const SampleMeta&) = default;
};

struct Sample {
    ConditioningSet condition;
    std::vector<float> target; // normalized RSS, one plane
    SampleMeta meta;
};

// ---- sweep ---------------------------------------------------------------

struct SweepConfig {
    // Preset ids or inline layouts (their `bs` is overwritten per position).
    std::vector<std::variant<std::string, RoomLayout>> rooms;
    std::vector<double> frequencies; // Hz, subset of catalog
    std::vector<double> catalog = default_catalog();
    std::vector<std::array<int, 2>> upas{{4, 4}};
    int bs_stride = 8;
    std::vector<std::array<int, 2>> bs_cells; // explicit cells override the stride
    int grid = 32;
    int max_reflections = 2;
    double tx_power_dbm = 0.0;
    double bs_height = 3.0;
    std::uint64_t seed = 0;
    int shard_size = 256;

    void validate() const;
};

// JSON config: rooms, frequencies_ghz, catalog_ghz, upas, bs_stride,
// bs_cells, grid, max_reflections, tx_power_dbm, bs_height, seed, shard_size.
SweepConfig parse_sweep_config(const std::string& json_text);
std::string sweep_config_json(const SweepConfig& cfg);

// Walkable, wall-free cells on the stride lattice (or the explicit list).
std::vector<std::array<int, 2>> bs_positions(const RoomLayout& layout, const SweepConfig& cfg);

// Build one sample from scratch (tracing included).
Sample make_sample(const RoomLayout& layout, std::array<int, 2> bs_cell, std::array<int, 2> upa, double freq_hz,
                   const SweepConfig& cfg);

// ---- shards and manifest -------------------------------------------------

inline constexpr std::uint32_t kShardVersion = 1;
inline constexpr std::uint32_t kChannelLayoutV1 = 1; // onehot[k] | semantic[3] | pattern[1] | target[1]

struct ManifestEntry {
    std::size_t index = 0;
    SampleMeta meta;
    std::string shard;
    std::uint64_t offset = 0;
    std::string hash;
};

struct Manifest {
    int width = 0;
    int height = 0;
    double cell_size = 0.0;
    std::vector<double> catalog;
    NormRange norm;
    int max_reflections = 2;
    std::uint64_t seed = 0;
    std::string config_json;
    struct Shard {
        std::string file;
        std::size_t count = 0;
        std::string hash;
    };
    std::vector<Shard> shards;
    std::vector<ManifestEntry> samples;

    std::string to_json() const;
    static Manifest from_json(const std::string& text);
    // FNV-1a of to_json().
    std::string hash() const;
};

inline constexpr const char* kManifestFile = "manifest.json";

// Traces every (room, freq, upa, position) sample, writes shards and the
// manifest into `out_dir`, and returns the manifest. Samples are ordered by
// metadata key, independent of worker scheduling.
Manifest run_sweep(const SweepConfig& cfg, const std::filesystem::path& out_dir, unsigned threads = 0);

// Shard bytes for the given samples (header + records).
std::vector<std::uint8_t> encode_shard(std::span<const Sample> samples);
// Decode a whole shard; metadata is left default.
std::vector<Sample> decode_shard(std::span<const std::uint8_t> bytes);

Manifest read_manifest(const std::filesystem::path& dir);
// Loads the listed samples, verifying each content hash.
std::vector<Sample> load_samples(const Manifest& m, const std::filesystem::path& dir,
                                 std::span<const std::size_t> indices);

// ---- task splits ---------------------------------------------------------

struct TaskSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Task 1: train rooms room1..room4 at 4x4 UPA (all frequencies), test the
// L-shaped room at 4x4. Task 2: room1 at 28 GHz, train UPAs 4x4/6x6/8x8/12x12,
// test 10x10.
TaskSplit split_tasks(const Manifest& m, int task);

} // namespace rfgan
