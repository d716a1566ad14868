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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rfgan::oracle {

double friis_dbm(double distance_m, double freq_hz, double tx_power_dbm)
{
    const double lambda = 299792458.0 / freq_hz;
    return tx_power_dbm + 20.0 * std::log10(lambda / (4.0 * std::numbers::pi * distance_m));
}

// ---- image tree ----------------------------------------------------------

namespace {

using P3 = std::array<double, 3>;

struct Plane {
    int axis;
    double offset;
};

P3 mirror(P3 p, Plane pl)
{
    p[pl.axis] = 2.0 * pl.offset - p[pl.axis];
    return p;
}

bool on_face(const P3& p, int plane, double w, double d, double h)
{
    constexpr double tol = 1e-12;
    const auto in = [](double v, double lo, double hi) { return v >= lo - tol && v <= hi + tol; };
    if (plane == kFloorPlane)
        return in(p[0], 0.0, w) && in(p[1], 0.0, d);
    if (plane < 2)
        return in(p[1], 0.0, d) && in(p[2], 0.0, h);
    return in(p[0], 0.0, w) && in(p[2], 0.0, h);
}

void enumerate(std::vector<int>& seq, int depth, int max_depth, std::vector<std::vector<int>>& out)
{
    out.push_back(seq);
    if (depth == max_depth)
        return;
    for (int s = 0; s < 5; ++s) {
        if (!seq.empty() && seq.back() == s)
            continue;
        seq.push_back(s);
        enumerate(seq, depth + 1, max_depth, out);
        seq.pop_back();
    }
}

} // namespace

std::vector<BoxPath> box_image_paths(double w, double d, double h, P3 tx, P3 rx, int max_reflections)
{
    const Plane planes[5] = {{0, 0.0}, {0, w}, {1, 0.0}, {1, d}, {2, 0.0}};
    std::vector<std::vector<int>> seqs;
    std::vector<int> seq;
    enumerate(seq, 0, max_reflections, seqs);

    std::vector<BoxPath> out;
    for (const auto& s : seqs) {
        std::vector<P3> images{tx};
        for (int pl : s)
            images.push_back(mirror(images.back(), planes[pl]));
        std::vector<P3> pts{rx};
        P3 target = rx;
        bool ok = true;
        for (int j = static_cast<int>(s.size()) - 1; j >= 0 && ok; --j) {
            const Plane pl = planes[s[j]];
            const P3& img = images[j + 1];
            const double a = target[pl.axis] - pl.offset;
            const double b = img[pl.axis] - pl.offset;
            if (!(a * b < 0.0)) {
                ok = false;
                break;
            }
            const double t = a / (a - b);
            P3 hit;
            for (int k = 0; k < 3; ++k)
                hit[k] = target[k] + t * (img[k] - target[k]);
            hit[pl.axis] = pl.offset;
            if (!on_face(hit, s[j], w, d, h))
                ok = false;
            pts.push_back(hit);
            target = hit;
        }
        if (!ok)
            continue;
        pts.push_back(tx);
        std::reverse(pts.begin(), pts.end());
        const P3& last = images.back();
        const double len = std::sqrt((rx[0] - last[0]) * (rx[0] - last[0]) + (rx[1] - last[1]) * (rx[1] - last[1])
                                     + (rx[2] - last[2]) * (rx[2] - last[2]));
        out.push_back({s, pts, len});
    }
    return out;
}

// ---- finite differences --------------------------------------------------

FdResult check_gradient(const std::function<double()>& f, std::span<double> x, std::span<const double> analytic,
                        double h, double atol, std::size_t stride)
{
    if (x.size() != analytic.size())
        throw std::invalid_argument("check_gradient: size mismatch");
    FdResult r;
    bool first = true;
    for (std::size_t i = 0; i < x.size(); i += std::max<std::size_t>(stride, 1)) {
        const double x0 = x[i];
        x[i] = x0 + h;
        const double fp = f();
        x[i] = x0 - h;
        const double fm = f();
        x[i] = x0;
        const double n = (fp - fm) / (2.0 * h);
        const double a = analytic[i];
        const double rel = std::abs(a - n) / std::max({std::abs(a), std::abs(n), atol});
        if (first || rel > r.max_rel_error) {
            first = false;
            r.max_rel_error = rel;
            r.worst = i;
            r.analytic = a;
            r.numeric = n;
        }
    }
    return r;
}

// ---- SSIM ----------------------------------------------------------------

namespace {

double ssim_or_cs(const std::vector<double>& x, const std::vector<double>& y, int w, int h, bool want_cs)
{
    constexpr int win = 11;
    constexpr double sigma = 1.5;
    constexpr double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    double wt[win][win];
    double total = 0.0;
    for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) {
            const double di = i - 5.0, dj = j - 5.0;
            wt[i][j] = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
            total += wt[i][j];
        }
    for (auto& row : wt)
        for (double& v : row)
            v /= total;

    double acc = 0.0;
    int n = 0;
    for (int r = 0; r + win <= h; ++r)
        for (int c = 0; c + win <= w; ++c) {
            double mx = 0.0, my = 0.0;
            for (int i = 0; i < win; ++i)
                for (int j = 0; j < win; ++j) {
                    const std::size_t k = static_cast<std::size_t>(r + i) * w + (c + j);
                    mx += wt[i][j] * x[k];
                    my += wt[i][j] * y[k];
                }
            double vx = 0.0, vy = 0.0, cov = 0.0;
            for (int i = 0; i < win; ++i)
                for (int j = 0; j < win; ++j) {
                    const std::size_t k = static_cast<std::size_t>(r + i) * w + (c + j);
                    vx += wt[i][j] * (x[k] - mx) * (x[k] - mx);
                    vy += wt[i][j] * (y[k] - my) * (y[k] - my);
                    cov += wt[i][j] * (x[k] - mx) * (y[k] - my);
                }
            const double cs = (2.0 * cov + c2) / (vx + vy + c2);
            const double l = (2.0 * mx * my + c1) / (mx * mx + my * my + c1);
            acc += want_cs ? cs : l * cs;
            ++n;
        }
    return acc / n;
}

std::vector<double> halve(const std::vector<double>& x, int w, int h)
{
    std::vector<double> out;
    for (int r = 0; r + 1 < h; r += 2)
        for (int c = 0; c + 1 < w; c += 2)
            out.push_back((x[r * w + c] + x[r * w + c + 1] + x[(r + 1) * w + c] + x[(r + 1) * w + c + 1]) / 4.0);
    return out;
}

} // namespace

double ms_ssim_direct(std::span<const double> xs, std::span<const double> ys, int w, int h)
{
    const double weights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
    int scales = 0;
    for (int s = std::min(w, h); s >= 11 && scales < 5; s /= 2)
        ++scales;
    double wsum = 0.0;
    for (int i = 0; i < scales; ++i)
        wsum += weights[i];
    std::vector<double> x(xs.begin(), xs.end()), y(ys.begin(), ys.end());
    double out = 1.0;
    for (int i = 0; i < scales; ++i) {
        const bool last = i == scales - 1;
        const double v = ssim_or_cs(x, y, w, h, !last);
        out *= std::pow(std::max(v, 0.0), weights[i] / wsum);
        x = halve(x, w, h);
        y = halve(y, w, h);
        w /= 2;
        h /= 2;
    }
    return out;
}

// ---- gradient loss -------------------------------------------------------

GlParts gl_direct(std::span<const double> real, std::span<const double> fake, int n, int w, int h)
{
    constexpr double eps = 1e-8;
    const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
    const auto at = [&](std::span<const double> m, int plane, int r, int c) {
        r = std::clamp(r, 0, h - 1);
        c = std::clamp(c, 0, w - 1);
        return m[static_cast<std::size_t>(plane) * w * h + static_cast<std::size_t>(r) * w + c];
    };
    // Pass 1: gradients and magnitudes.
    const std::size_t total = static_cast<std::size_t>(n) * w * h;
    std::vector<double> rx(total), ry(total), fx(total), fy(total);
    for (int p = 0; p < n; ++p)
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                double a = 0, b = 0, e = 0, f = 0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) {
                        a += kx[i][j] * at(real, p, r + i - 1, c + j - 1);
                        b += kx[j][i] * at(real, p, r + i - 1, c + j - 1);
                        e += kx[i][j] * at(fake, p, r + i - 1, c + j - 1);
                        f += kx[j][i] * at(fake, p, r + i - 1, c + j - 1);
                    }
                const std::size_t k = static_cast<std::size_t>(p) * w * h + static_cast<std::size_t>(r) * w + c;
                rx[k] = a;
                ry[k] = b;
                fx[k] = e;
                fy[k] = f;
            }
    // Pass 2: KL of normalized magnitudes and per-pixel cosine.
    GlParts out;
    double dir = 0.0;
    double count = 0.0;
    for (int p = 0; p < n; ++p) {
        const std::size_t base = static_cast<std::size_t>(p) * w * h;
        double sr = 0.0, sf = 0.0;
        for (int i = 0; i < w * h; ++i) {
            sr += std::hypot(rx[base + i], ry[base + i]) + eps;
            sf += std::hypot(fx[base + i], fy[base + i]) + eps;
        }
        for (int i = 0; i < w * h; ++i) {
            const double mr = std::hypot(rx[base + i], ry[base + i]);
            const double mf = std::hypot(fx[base + i], fy[base + i]);
            const double pp = (mr + eps) / sr;
            const double qq = (mf + eps) / sf;
            out.kl += pp * std::log(pp / qq);
            if (mr < eps && mf < eps)
                continue;
            const double cos =
                (mr < eps || mf < eps) ? 0.0 : (rx[base + i] * fx[base + i] + ry[base + i] * fy[base + i]) / (mr * mf);
            dir += 1.0 - cos;
            count += 1.0;
        }
    }
    out.kl /= n;
    out.direction = count > 0.0 ? dir / count : 0.0;
    return out;
}

// ---- parameter counts ----------------------------------------------------

std::size_t generator_param_count(int z, int base, int res, int k, int hidden, int out_ch)
{
    const std::size_t cond = 4 + static_cast<std::size_t>(k);
    const auto conv = [](std::size_t out, std::size_t in, std::size_t ksz, bool bias) {
        return out * in * ksz * ksz + (bias ? out : 0);
    };
    const auto spade = [&](std::size_t c) {
        return conv(hidden, cond, 3, true) + 2 * conv(c, hidden, 3, true);
    };
    std::size_t c = 8 * static_cast<std::size_t>(base);
    std::size_t n = conv(c * 16, z, 1, true);
    for (int r = 4; r < res; r *= 2) {
        const std::size_t next = c / 2;
        n += spade(c) + conv(next, c, 3, true) + spade(next) + conv(next, next, 3, true);
        n += spade(c) + conv(next, c, 1, false);
        c = next;
    }
    return n + conv(out_ch, c, 3, true);
}

std::size_t discriminator_param_count(int base, int res, int k, int map_channels)
{
    std::size_t in = 4 + static_cast<std::size_t>(k) + map_channels;
    std::size_t n = 0;
    int layer = 0;
    const auto width = [&](int l) { return std::min<std::size_t>(static_cast<std::size_t>(base) << std::min(l, 3), 8 * base); };
    for (int r = res; r > 8; r /= 2, ++layer) {
        n += width(layer) * in * 16 + width(layer);
        in = width(layer);
    }
    const std::size_t mid = width(layer);
    n += mid * in * 16 + mid;
    return n + mid + 1;
}

// ---- raster sampling -----------------------------------------------------

std::vector<bool> sample_wall_cells(const std::vector<std::array<double, 4>>& segments, int nx, int ny, double cell,
                                    int samples_per_cell)
{
    std::vector<bool> out(static_cast<std::size_t>(nx) * ny, false);
    constexpr double tol = 1e-12;
    for (const auto& s : segments) {
        const double len = std::hypot(s[2] - s[0], s[3] - s[1]);
        const int steps = static_cast<int>(std::ceil(len / cell * samples_per_cell)) + 1;
        for (int i = 0; i <= steps; ++i) {
            const double t = static_cast<double>(i) / steps;
            const double x = s[0] + t * (s[2] - s[0]);
            const double y = s[1] + t * (s[3] - s[1]);
            const int u0 = static_cast<int>(std::floor(x / cell));
            const int v0 = static_cast<int>(std::floor(y / cell));
            for (int u = u0 - 1; u <= u0 + 1; ++u)
                for (int v = v0 - 1; v <= v0 + 1; ++v) {
                    if (u < 0 || v < 0 || u >= nx || v >= ny)
                        continue;
                    if (x >= u * cell - tol && x <= (u + 1) * cell + tol && y >= v * cell - tol
                        && y <= (v + 1) * cell + tol)
                        out[static_cast<std::size_t>(v) * nx + u] = true;
                }
        }
    }
    return out;
}

} // namespace rfgan::oracle
