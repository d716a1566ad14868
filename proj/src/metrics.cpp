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

#include "rfgan/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rfgan {

namespace {

template <typename T>
void require_same(std::span<const T> x, std::span<const T> y, const char* what)
{
    if (x.size() != y.size() || x.empty())
        throw ShapeError(std::string(what) + ": inputs must be nonempty and equal in size");
}

std::vector<double> downsample2(std::span<const double> x, int w, int h)
{
    const int w2 = w / 2, h2 = h / 2;
    std::vector<double> out(static_cast<std::size_t>(w2) * h2);
    for (int v = 0; v < h2; ++v)
        for (int u = 0; u < w2; ++u) {
            const std::size_t a = static_cast<std::size_t>(2 * v) * w + 2 * u;
            out[static_cast<std::size_t>(v) * w2 + u] = 0.25 * (x[a] + x[a + 1] + x[a + w] + x[a + w + 1]);
        }
    return out;
}

// Separable valid filtering; output (w - k + 1) x (h - k + 1).
std::vector<double> filter_valid(std::span<const double> x, int w, int h, const std::vector<double>& g)
{
    const int k = static_cast<int>(g.size());
    const int wo = w - k + 1, ho = h - k + 1;
    std::vector<double> tmp(static_cast<std::size_t>(wo) * h);
    for (int v = 0; v < h; ++v)
        for (int u = 0; u < wo; ++u) {
            double s = 0.0;
            for (int t = 0; t < k; ++t)
                s += g[t] * x[static_cast<std::size_t>(v) * w + u + t];
            tmp[static_cast<std::size_t>(v) * wo + u] = s;
        }
    std::vector<double> out(static_cast<std::size_t>(wo) * ho);
    for (int v = 0; v < ho; ++v)
        for (int u = 0; u < wo; ++u) {
            double s = 0.0;
            for (int t = 0; t < k; ++t)
                s += g[t] * tmp[static_cast<std::size_t>(v + t) * wo + u];
            out[static_cast<std::size_t>(v) * wo + u] = s;
        }
    return out;
}

} // namespace

template <typename T>
double mae(std::span<const T> x, std::span<const T> y)
{
    require_same(x, y, "mae");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += std::abs(static_cast<double>(x[i]) - static_cast<double>(y[i]));
    return s / static_cast<double>(x.size());
}

template <typename T>
double mse(std::span<const T> x, std::span<const T> y)
{
    require_same(x, y, "mse");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
        s += d * d;
    }
    return s / static_cast<double>(x.size());
}

template <typename T>
double rmse(std::span<const T> x, std::span<const T> y)
{
    return std::sqrt(mse(x, y));
}

double psnr_from_mse(double m, double peak)
{
    if (m <= 0.0)
        return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / m));
}

template <typename T>
double psnr(std::span<const T> x, std::span<const T> y, double peak)
{
    return psnr_from_mse(mse(x, y), peak);
}

int ms_ssim_scales(int width, int height, const SsimParams& p)
{
    int n = 0;
    for (int s = std::min(width, height); s >= p.window && n < static_cast<int>(kMsSsimWeights.size()); s /= 2)
        ++n;
    return n;
}

std::vector<double> gaussian_window(int size, double sigma)
{
    std::vector<double> g(static_cast<std::size_t>(size));
    const double c = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        g[i] = std::exp(-((i - c) * (i - c)) / (2.0 * sigma * sigma));
        sum += g[i];
    }
    for (double& v : g)
        v /= sum;
    return g;
}

SsimScale ssim_scale(std::span<const double> x, std::span<const double> y, int w, int h, const SsimParams& p)
{
    if (w < p.window || h < p.window)
        throw ShapeError("ssim: image " + std::to_string(w) + "x" + std::to_string(h) + " smaller than the "
                         + std::to_string(p.window) + "-pixel window");
    const auto g = gaussian_window(p.window, p.sigma);
    const std::size_t n = x.size();
    std::vector<double> xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto mx = filter_valid(x, w, h, g);
    const auto my = filter_valid(y, w, h, g);
    const auto sxx = filter_valid(xx, w, h, g);
    const auto syy = filter_valid(yy, w, h, g);
    const auto sxy = filter_valid(xy, w, h, g);
    const double c1 = (p.k1 * p.peak) * (p.k1 * p.peak);
    const double c2 = (p.k2 * p.peak) * (p.k2 * p.peak);
    SsimScale out;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        const double vx = sxx[i] - mx[i] * mx[i];
        const double vy = syy[i] - my[i] * my[i];
        const double cov = sxy[i] - mx[i] * my[i];
        const double cs = (2.0 * cov + c2) / (vx + vy + c2);
        const double l = (2.0 * mx[i] * my[i] + c1) / (mx[i] * mx[i] + my[i] * my[i] + c1);
        out.cs += cs;
        out.ssim += l * cs;
    }
    out.cs /= static_cast<double>(mx.size());
    out.ssim /= static_cast<double>(mx.size());
    return out;
}

template <typename T>
double ms_ssim(std::span<const T> x, std::span<const T> y, int width, int height, const SsimParams& p)
{
    require_same(x, y, "ms_ssim");
    if (x.size() != static_cast<std::size_t>(width) * height)
        throw ShapeError("ms_ssim: buffer size does not match " + std::to_string(width) + "x" + std::to_string(height));
    const int scales = ms_ssim_scales(width, height, p);
    if (scales == 0)
        throw ShapeError("ms_ssim: image smaller than one window");
    double wsum = 0.0;
    for (int s = 0; s < scales; ++s)
        wsum += kMsSsimWeights[s];
    std::vector<double> a(x.begin(), x.end()), b(y.begin(), y.end());
    int w = width, h = height;
    double result = 1.0;
    for (int s = 0; s < scales; ++s) {
        const SsimScale st = ssim_scale(a, b, w, h, p);
        const double base = std::max(0.0, s + 1 == scales ? st.ssim : st.cs);
        result *= std::pow(base, kMsSsimWeights[s] / wsum);
        if (s + 1 < scales) {
            a = downsample2(a, w, h);
            b = downsample2(b, w, h);
            w /= 2;
            h /= 2;
        }
    }
    return result;
}

std::string MetricsReport::header()
{
    return "count,mae,rmse,psnr_db,ms_ssim";
}

std::string MetricsReport::row() const
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%.4f,%.6f", count, mae, rmse, psnr_db, ms_ssim);
    return buf;
}

std::string MetricsReport::to_json() const
{
    nlohmann::json j{{"count", count},     {"mae", mae},         {"rmse", rmse},
                     {"psnr_db", psnr_db}, {"ms_ssim", ms_ssim}, {"psnr_capped", psnr_capped}};
    return j.dump(2);
}

template <typename T>
MetricsReport evaluate_pair(std::span<const T> real, std::span<const T> fake, int width, int height)
{
    MetricsReport r;
    r.count = 1;
    r.mae = mae(real, fake);
    const double m = mse(real, fake);
    r.rmse = std::sqrt(m);
    r.psnr_db = psnr_from_mse(m);
    r.psnr_capped = m <= 0.0 ? 1 : 0;
    r.ms_ssim = ms_ssim(real, fake, width, height);
    return r;
}

MetricsReport average(std::span<const MetricsReport> reports)
{
    MetricsReport out;
    for (const auto& r : reports) {
        const double n = static_cast<double>(r.count);
        out.mae += r.mae * n;
        out.rmse += r.rmse * n;
        out.psnr_db += r.psnr_db * n;
        out.ms_ssim += r.ms_ssim * n;
        out.count += r.count;
        out.psnr_capped += r.psnr_capped;
    }
    if (out.count == 0)
        return out;
    const double n = static_cast<double>(out.count);
    out.mae /= n;
    out.rmse /= n;
    out.psnr_db /= n;
    out.ms_ssim /= n;
    return out;
}

#define RFGAN_INSTANTIATE(T)                                                                                           \
    template double mae(std::span<const T>, std::span<const T>);                                                       \
    template double mse(std::span<const T>, std::span<const T>);                                                       \
    template double rmse(std::span<const T>, std::span<const T>);                                                      \
    template double psnr(std::span<const T>, std::span<const T>, double);                                              \
    template double ms_ssim(std::span<const T>, std::span<const T>, int, int, const SsimParams&);                      \
    template MetricsReport evaluate_pair(std::span<const T>, std::span<const T>, int, int);

RFGAN_INSTANTIATE(float)
RFGAN_INSTANTIATE(double)

#undef RFGAN_INSTANTIATE

} // namespace rfgan
