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

#include "rfgan/losses.hpp"

#include "rfgan/errors.hpp"

#include <atomic>
#include <cmath>
#include <random>

namespace rfgan {

namespace {

template <typename T>
ag::Tape<T>& tape_of(const ag::Var<T>& v, const char* op)
{
    if (!v || !v.node()->tape)
        throw std::logic_error(std::string(op) + ": input is not bound to a tape");
    return *v.node()->tape;
}

void require_same(const Shape& a, const Shape& b, const char* op)
{
    if (!(a == b))
        throw ShapeError(std::string(op) + ": shape mismatch " + a.str() + " vs " + b.str());
}

// Smoothing inside the magnitude used by the direction term; keeps the
// unit-vector derivative bounded on flat regions.
constexpr double kDirectionDelta = 1e-10;
// Smoothing inside the magnitude used by the KL term.
constexpr double kMagnitudeDelta = 1e-16;

std::atomic<double> g_sobel_perturbation{0.0};

} // namespace

template <typename T>
ag::Var<T> adv_d_loss(const ag::Var<T>& real_logits, const ag::Var<T>& fake_logits)
{
    return ag::add(ag::mean(ag::softplus(ag::scale(real_logits, -1.0))), ag::mean(ag::softplus(fake_logits)));
}

template <typename T>
ag::Var<T> adv_g_loss(const ag::Var<T>& fake_logits)
{
    return ag::mean(ag::softplus(ag::scale(fake_logits, -1.0)));
}

template <typename T>
ag::Var<T> l_mae(const ag::Var<T>& real, const ag::Var<T>& fake)
{
    require_same(real.shape(), fake.shape(), "l_mae");
    return ag::mean(ag::abs(ag::sub(fake, real)));
}

template <typename T>
ag::Var<T> l_focal(const ag::Var<T>& real, const ag::Var<T>& fake, double gamma)
{
    if (!(gamma >= 0.0))
        throw ConfigError("focal gamma must be >= 0");
    require_same(real.shape(), fake.shape(), "l_focal");
    Tensor<T> w(real.shape());
    double wsum = 0.0;
    for (std::size_t i = 0; i < w.numel(); ++i) {
        const double v = gamma == 0.0 ? 1.0 : std::pow(kFocalEps + static_cast<double>(real.value()[i]), gamma);
        w[i] = static_cast<T>(v);
        wsum += static_cast<double>(w[i]);
    }
    if (!(wsum > 0.0))
        throw NumericalError("l_focal: weights sum to zero");
    const ag::Var<T> wv = tape_of(fake, "l_focal").constant(std::move(w), "focal_weights");
    return ag::scale(ag::sum(ag::mul(ag::abs(ag::sub(fake, real)), wv)), 1.0 / wsum);
}

template <typename T>
ag::Var<T> l_fm(const std::vector<ag::Var<T>>& real_features, const std::vector<ag::Var<T>>& fake_features)
{
    if (real_features.size() != fake_features.size() || real_features.empty())
        throw ShapeError("l_fm: feature lists must be nonempty and of equal length");
    ag::Var<T> acc;
    for (std::size_t i = 0; i < real_features.size(); ++i) {
        require_same(real_features[i].shape(), fake_features[i].shape(), "l_fm");
        const ag::Var<T> d = ag::sub(fake_features[i], real_features[i]);
        const ag::Var<T> term = ag::mean(ag::mul(d, d));
        acc = acc ? ag::add(acc, term) : term;
    }
    return ag::scale(acc, 1.0 / static_cast<double>(real_features.size()));
}

// ---- perceptual ----------------------------------------------------------

template <typename T>
PerceptualExtractor<T>::PerceptualExtractor(std::uint64_t seed, int in_channels)
{
    std::mt19937_64 rng(seed);
    int cin = in_channels;
    for (int l = 0; l < kLayers; ++l) {
        const int cout = channels(l);
        const double std = std::sqrt(2.0 / (9.0 * cin));
        Tensor<T> w = randn<T>({cout, cin, 3, 3}, rng, std);
        auto v = ag::parameter(std::move(w), "perceptual" + std::to_string(l));
        v.node()->requires_grad = false;
        weights_.push_back(std::move(v));
        cin = cout;
    }
}

template <typename T>
std::vector<ag::Var<T>> PerceptualExtractor<T>::features(const ag::Var<T>& x) const
{
    std::vector<ag::Var<T>> out;
    ag::Var<T> h = x;
    for (int l = 0; l < kLayers; ++l) {
        h = ag::relu(ag::conv2d(h, weights_[static_cast<std::size_t>(l)], ag::Var<T>{}, l == 0 ? 1 : 2, 1));
        out.push_back(h);
    }
    return out;
}

template <typename T>
ag::Var<T> l_perceptual(const ag::Var<T>& real, const ag::Var<T>& fake, const PerceptualExtractor<T>& extractor)
{
    require_same(real.shape(), fake.shape(), "l_perceptual");
    return l_fm(extractor.features(real), extractor.features(fake));
}

// ---- gradient loss -------------------------------------------------------

SobelKernels sobel_kernels()
{
    SobelKernels k{{{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}}, {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}}};
    k.gx[0][0] += g_sobel_perturbation.load();
    return k;
}

void set_sobel_perturbation(double delta)
{
    g_sobel_perturbation.store(delta);
}

double sobel_perturbation()
{
    return g_sobel_perturbation.load();
}

template <typename T>
Gradients<T> sobel_gradients(const ag::Var<T>& map)
{
    const Shape s = map.shape();
    if (s.h < 3 || s.w < 3)
        throw ShapeError("sobel_gradients: spatial size must be >= 3, got " + s.str());
    auto& tape = tape_of(map, "sobel_gradients");
    const SobelKernels k = sobel_kernels();
    Tensor<T> kx({1, 1, 3, 3}), ky({1, 1, 3, 3});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            kx(0, 0, i, j) = static_cast<T>(k.gx[i][j]);
            ky(0, 0, i, j) = static_cast<T>(k.gy[i][j]);
        }
    const ag::Var<T> flat = s.c == 1 ? map : ag::reshape(map, {s.n * s.c, 1, s.h, s.w});
    const ag::Var<T> padded = ag::pad_replicate(flat, 1);
    ag::Var<T> gx = ag::conv2d(padded, tape.constant(std::move(kx), "sobel_x"), ag::Var<T>{}, 1, 0);
    ag::Var<T> gy = ag::conv2d(padded, tape.constant(std::move(ky), "sobel_y"), ag::Var<T>{}, 1, 0);
    if (s.c != 1) {
        gx = ag::reshape(gx, s);
        gy = ag::reshape(gy, s);
    }
    return {gx, gy};
}

template <typename T>
GlTerms<T> l_gl_terms(const ag::Var<T>& real, const ag::Var<T>& fake, bool raw_cosine)
{
    require_same(real.shape(), fake.shape(), "l_gl");
    auto& tape = tape_of(fake, "l_gl");
    const Shape s = real.shape();
    const Gradients<T> gr = sobel_gradients(real);
    const Gradients<T> gf = sobel_gradients(fake);
    const auto sq = [](const Gradients<T>& g) { return ag::add(ag::mul(g.gx, g.gx), ag::mul(g.gy, g.gy)); };
    const ag::Var<T> r2 = sq(gr);
    const ag::Var<T> f2 = sq(gf);

    // Magnitude distributions per sample and channel.
    const auto dist = [&](const ag::Var<T>& m2) {
        const ag::Var<T> m = ag::add_scalar(ag::sqrt(ag::add_scalar(m2, kMagnitudeDelta)), kGlEps);
        return ag::div(m, ag::sum_hw(m));
    };
    const ag::Var<T> p = dist(r2);
    const ag::Var<T> q = dist(f2);
    const ag::Var<T> kl =
        ag::scale(ag::sum(ag::mul(p, ag::sub(ag::log(p), ag::log(q)))), 1.0 / static_cast<double>(s.n * s.c));

    // Direction: 1 - cos = |u - v|^2 / 2 for unit vectors u, v. A pixel where
    // only one gradient vanishes has cos = 0: the smoothed unit vector of the
    // other side contributes ~1/2 and a constant 1/2 is added.
    Tensor<T> mask(s);
    double count = 0.0;
    double lone_sum = 0.0;
    for (std::size_t i = 0; i < mask.numel(); ++i) {
        const bool r0 = std::sqrt(static_cast<double>(r2.value()[i])) < kGlEps;
        const bool f0 = std::sqrt(static_cast<double>(f2.value()[i])) < kGlEps;
        mask[i] = r0 && f0 ? T(0) : T(1);
        count += r0 && f0 ? 0.0 : 1.0;
        lone_sum += r0 != f0 ? 1.0 : 0.0;
    }
    const ag::Var<T> mv = tape.constant(std::move(mask), "gl_mask");
    const ag::Var<T> mr = ag::sqrt(ag::add_scalar(r2, kDirectionDelta));
    const ag::Var<T> mf = ag::sqrt(ag::add_scalar(f2, kDirectionDelta));
    const ag::Var<T> ux = ag::div(gr.gx, mr), uy = ag::div(gr.gy, mr);
    const ag::Var<T> vx = ag::div(gf.gx, mf), vy = ag::div(gf.gy, mf);
    ag::Var<T> per_pixel;
    if (raw_cosine) {
        per_pixel = ag::add(ag::mul(ux, vx), ag::mul(uy, vy));
        lone_sum = 0.0;
    } else {
        const ag::Var<T> dx = ag::sub(ux, vx), dy = ag::sub(uy, vy);
        per_pixel = ag::scale(ag::add(ag::mul(dx, dx), ag::mul(dy, dy)), 0.5);
    }
    ag::Var<T> direction = ag::scale(ag::sum(ag::mul(per_pixel, mv)), count > 0.0 ? 1.0 / count : 0.0);
    if (lone_sum > 0.0)
        direction = ag::add_scalar(direction, 0.5 * lone_sum / count);
    return {kl, direction, ag::add(kl, direction)};
}

template <typename T>
ag::Var<T> l_gl(const ag::Var<T>& real, const ag::Var<T>& fake, bool raw_cosine)
{
    return l_gl_terms(real, fake, raw_cosine).total;
}

// ---- total ---------------------------------------------------------------

void LossWeights::validate() const
{
    for (double v : {mae, fl, fm, vgg, gl})
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ConfigError("loss weights must be finite and >= 0");
}

template <typename T>
ag::Var<T> total_g_loss(const LossTerms<T>& terms, const LossWeights& w, LossReport& report)
{
    w.validate();
    if (!terms.adv)
        throw std::logic_error("total_g_loss: adversarial term is required");
    const auto value = [](const ag::Var<T>& v, const char* name) {
        if (!v)
            return 0.0;
        const double x = static_cast<double>(v.item());
        if (!std::isfinite(x))
            throw NumericalError(std::string("loss term '") + name + "' is not finite");
        return x;
    };
    report = {};
    report.adv = value(terms.adv, "adv");
    report.mae = value(terms.mae, "mae");
    report.fl = value(terms.fl, "focal");
    report.fm = value(terms.fm, "fm");
    report.vgg = value(terms.vgg, "perceptual");
    report.gl = value(terms.gl, "gl");
    ag::Var<T> total = terms.adv;
    for (const auto& [v, lambda] : {std::pair{terms.mae, w.mae}, std::pair{terms.fl, w.fl}, std::pair{terms.fm, w.fm},
                                    std::pair{terms.vgg, w.vgg}, std::pair{terms.gl, w.gl}})
        if (v && lambda != 0.0)
            total = ag::add(total, ag::scale(v, lambda));
    report.total = static_cast<double>(total.item());
    return total;
}

#define RFGAN_INSTANTIATE(T)                                                                                           \
    template ag::Var<T> adv_d_loss(const ag::Var<T>&, const ag::Var<T>&);                                              \
    template ag::Var<T> adv_g_loss(const ag::Var<T>&);                                                                 \
    template ag::Var<T> l_mae(const ag::Var<T>&, const ag::Var<T>&);                                                   \
    template ag::Var<T> l_focal(const ag::Var<T>&, const ag::Var<T>&, double);                                         \
    template ag::Var<T> l_fm(const std::vector<ag::Var<T>>&, const std::vector<ag::Var<T>>&);                          \
    template class PerceptualExtractor<T>;                                                                             \
    template ag::Var<T> l_perceptual(const ag::Var<T>&, const ag::Var<T>&, const PerceptualExtractor<T>&);             \
    template Gradients<T> sobel_gradients(const ag::Var<T>&);                                                          \
    template GlTerms<T> l_gl_terms(const ag::Var<T>&, const ag::Var<T>&, bool);                                        \
    template ag::Var<T> l_gl(const ag::Var<T>&, const ag::Var<T>&, bool);                                              \
    template ag::Var<T> total_g_loss(const LossTerms<T>&, const LossWeights&, LossReport&);

RFGAN_INSTANTIATE(float)
RFGAN_INSTANTIATE(double)

#undef RFGAN_INSTANTIATE

} // namespace rfgan
