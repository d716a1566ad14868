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

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace rfgan::test {

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name)
{
    const auto p = std::filesystem::temp_directory_path() / ("rfgan-test-" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

inline SweepConfig tiny_sweep()
{
    SweepConfig c;
    c.rooms = {std::string("room1"), std::string("room2")};
    c.frequencies = {28e9};
    c.grid = 16;
    c.bs_stride = 8;
    c.max_reflections = 1;
    c.shard_size = 3;
    return c;
}

inline std::vector<float> random_map(std::size_t n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    std::vector<float> v(n);
    for (auto& x : v)
        x = u(rng);
    return v;
}

} // namespace rfgan::test
