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

#include "rfgan/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rfgan {

std::string Shape::str() const
{
    std::ostringstream os;
    os << "(" << n << "," << c << "," << h << "," << w << ")";
    return os.str();
}

template <typename T>
Tensor<T> avg_pool(const Tensor<T>& x, int factor)
{
    const Shape s = x.shape();
    if (factor < 1 || s.h % factor != 0 || s.w % factor != 0)
        throw ShapeError("avg_pool factor " + std::to_string(factor) + " does not divide " + s.str());
    if (factor == 1)
        return x;
    Tensor<T> out({s.n, s.c, s.h / factor, s.w / factor});
    const T scale = T(1) / T(factor * factor);
    for (int n = 0; n < s.n; ++n)
        for (int c = 0; c < s.c; ++c)
            for (int h = 0; h < s.h; ++h)
                for (int w = 0; w < s.w; ++w)
                    out(n, c, h / factor, w / factor) += x(n, c, h, w) * scale;
    return out;
}

template <typename T>
Tensor<T> batch_slice(const Tensor<T>& x, int begin, int end)
{
    const Shape s = x.shape();
    if (begin < 0 || end > s.n || begin >= end)
        throw ShapeError("batch_slice out of range for " + s.str());
    const std::size_t per = s.numel() / s.n;
    std::vector<T> data(x.values().begin() + static_cast<std::ptrdiff_t>(begin * per),
                        x.values().begin() + static_cast<std::ptrdiff_t>(end * per));
    return Tensor<T>({end - begin, s.c, s.h, s.w}, std::move(data));
}

template <typename T>
Tensor<T> batch_stack(const std::vector<Tensor<T>>& parts)
{
    if (parts.empty())
        throw ShapeError("batch_stack of nothing");
    Shape s = parts.front().shape();
    std::vector<T> data;
    int n = 0;
    for (const auto& p : parts) {
        const Shape ps = p.shape();
        if (ps.c != s.c || ps.h != s.h || ps.w != s.w)
            throw ShapeError("batch_stack shape mismatch " + ps.str() + " vs " + s.str());
        data.insert(data.end(), p.values().begin(), p.values().end());
        n += ps.n;
    }
    s.n = n;
    return Tensor<T>(s, std::move(data));
}

template <typename T>
Tensor<T> randn(Shape s, std::mt19937_64& rng, double std)
{
    std::normal_distribution<double> dist(0.0, std);
    Tensor<T> t(s);
    for (auto& v : t.values())
        v = static_cast<T>(dist(rng));
    return t;
}

template <typename T>
bool all_finite(const Tensor<T>& x)
{
    return std::all_of(x.values().begin(), x.values().end(), [](T v) { return std::isfinite(v); });
}

#define RFGAN_INSTANTIATE(T)                                                                                           \
    template Tensor<T> avg_pool(const Tensor<T>&, int);                                                                \
    template Tensor<T> batch_slice(const Tensor<T>&, int, int);                                                        \
    template Tensor<T> batch_stack(const std::vector<Tensor<T>>&);                                                     \
    template Tensor<T> randn(Shape, std::mt19937_64&, double);                                                         \
    template bool all_finite(const Tensor<T>&);

RFGAN_INSTANTIATE(float)
RFGAN_INSTANTIATE(double)

} // namespace rfgan
