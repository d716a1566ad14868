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

#include "rfgan/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace rfgan {

// NCHW extent of a rank-4 tensor.
struct Shape {
    int n = 1;
    int c = 1;
    int h = 1;
    int w = 1;

    std::size_t numel() const
    {
        return static_cast<std::size_t>(n) * c * h * w;
    }
    std::size_t plane() const { return static_cast<std::size_t>(h) * w; }
    friend bool operator==(const Shape&, const Shape&) = default;
    std::string str() const;
};

// Dense NCHW storage with value semantics.
template <typename T>
class Tensor {
public:
    using value_type = T;

    Tensor() = default;
    explicit Tensor(Shape s, T fill = T(0)) : shape_(s), data_(s.numel(), fill) {}
    Tensor(Shape s, std::vector<T> data) : shape_(s), data_(std::move(data))
    {
        if (data_.size() != shape_.numel())
            throw ShapeError("tensor data size " + std::to_string(data_.size()) + " does not match shape "
                             + shape_.str());
    }

    const Shape& shape() const { return shape_; }
    std::size_t numel() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    std::span<T> span() { return data_; }
    std::span<const T> span() const { return data_; }
    std::vector<T>& values() { return data_; }
    const std::vector<T>& values() const { return data_; }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    std::size_t offset(int n, int c, int h, int w) const
    {
        return ((static_cast<std::size_t>(n) * shape_.c + c) * shape_.h + h) * shape_.w + w;
    }
    T& operator()(int n, int c, int h, int w) { return data_[offset(n, c, h, w)]; }
    const T& operator()(int n, int c, int h, int w) const { return data_[offset(n, c, h, w)]; }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

    // Same data, new extent with equal element count.
    Tensor reshaped(Shape s) const
    {
        return Tensor(s, data_);
    }

    template <typename U>
    Tensor<U> cast() const
    {
        return Tensor<U>(shape_, std::vector<U>(data_.begin(), data_.end()));
    }

private:
    Shape shape_{0, 0, 0, 0};
    std::vector<T> data_;
};

// Non-overlapping factor x factor mean pooling.
template <typename T>
Tensor<T> avg_pool(const Tensor<T>& x, int factor);

// Copy of samples [begin, end) along the batch axis.
template <typename T>
Tensor<T> batch_slice(const Tensor<T>& x, int begin, int end);

// Stack per-sample tensors (each batch size 1) along the batch axis.
template <typename T>
Tensor<T> batch_stack(const std::vector<Tensor<T>>& parts);

// i.i.d. N(0, std^2) entries.
template <typename T>
Tensor<T> randn(Shape s, std::mt19937_64& rng, double std = 1.0);

template <typename T>
bool all_finite(const Tensor<T>& x);

} // namespace rfgan
