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
#include <string>
#include <vector>

namespace rfgan {

// Mean softplus(-real) + mean softplus(fake).
template <typename T>
ag::Var<T> adv_d_loss(const ag::Var<T>& real_logits, const ag::Var<T>& fake_logits);
// Non-saturating: mean softplus(-fake).
template <typename T>
ag::Var<T> adv_g_loss(const ag::Var<T>& fake_logits);

template <typename T>
ag::Var<T> l_mae(const ag::Var<T>& real, const ag::Var<T>& fake);

inline constexpr double kFocalEps = 0.05;

// sum w |x - y| / sum w, w = (0.05 + x)^gamma.
template <typename T>
ag::Var<T> l_focal(const ag::Var<T>& real, const ag::Var<T>& fake, double gamma = 2.0);

template <typename T>
ag::Var<T> l_fm(const std::vector<ag::Var<T>>& real_features, const std::vector<ag::Var<T>>& fake_features);

// Frozen random conv stack standing in for a pretrained feature network.
template <typename T>
class PerceptualExtractor {
public:
    explicit PerceptualExtractor(std::uint64_t seed = 0x5eed, int in_channels = 1);
    std::vector<ag::Var<T>> features(const ag::Var<T>& x) const;

    static constexpr int kLayers = 4;
    static constexpr int channels(int layer) { return 8 << layer; }

    const std::vector<ag::Var<T>>& weights() const { return weights_; }

private:
    std::vector<ag::Var<T>> weights_;
};

template <typename T>
ag::Var<T> l_perceptual(const ag::Var<T>& real, const ag::Var<T>& fake, const PerceptualExtractor<T>& extractor);

struct SobelKernels {
    double gx[3][3];
    double gy[3][3];
};

SobelKernels sobel_kernels();
// Test hook: added to gx[0][0] of the kernels used by sobel_gradients.
void set_sobel_perturbation(double delta);
double sobel_perturbation();

template <typename T>
struct Gradients {
    ag::Var<T> gx;
    ag::Var<T> gy;
};

// 3x3 Sobel with replicate padding; gx responds to change along w, gy along h.
template <typename T>
Gradients<T> sobel_gradients(const ag::Var<T>& map);

inline constexpr double kGlEps = 1e-8;

template <typename T>
struct GlTerms {
    ag::Var<T> kl;
    ag::Var<T> direction;
    ag::Var<T> total;
};

// raw_cosine adds the cosine similarity instead of 1 - cosine.
template <typename T>
GlTerms<T> l_gl_terms(const ag::Var<T>& real, const ag::Var<T>& fake, bool raw_cosine = false);
template <typename T>
ag::Var<T> l_gl(const ag::Var<T>& real, const ag::Var<T>& fake, bool raw_cosine = false);

struct LossWeights {
    double mae = 10.0;
    double fl = 1.0;
    double fm = 10.0;
    double vgg = 0.0;
    double gl = 1.0;

    void validate() const;
};

struct LossReport {
    double adv = 0.0;
    double mae = 0.0;
    double fl = 0.0;
    double fm = 0.0;
    double vgg = 0.0;
    double gl = 0.0;
    double total = 0.0;
};

template <typename T>
struct LossTerms {
    ag::Var<T> adv, mae, fl, fm, vgg, gl;
};

// total = adv + sum lambda * term. Unset terms count as 0.
template <typename T>
ag::Var<T> total_g_loss(const LossTerms<T>& terms, const LossWeights& w, LossReport& report);

} // namespace rfgan
