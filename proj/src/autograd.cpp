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

#include "rfgan/autograd.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

namespace rfgan::ag {

namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using CMatMap = Eigen::Map<const RowMat<T>>;

template <typename T>
Tape<T>& tape_of(const std::string& op, std::initializer_list<const Var<T>*> inputs)
{
    for (const Var<T>* v : inputs)
        if (v && *v && v->node()->tape)
            return *v->node()->tape;
    throw std::logic_error("op '" + op + "' has no tape-bound input");
}

template <typename T>
Tape<T>& tape_of(const std::string& op, const std::vector<Var<T>>& inputs)
{
    for (const Var<T>& v : inputs)
        if (v && v.node()->tape)
            return *v.node()->tape;
    throw std::logic_error("op '" + op + "' has no tape-bound input");
}

template <typename T>
std::vector<std::shared_ptr<Node<T>>> nodes(std::initializer_list<const Var<T>*> vs)
{
    std::vector<std::shared_ptr<Node<T>>> out;
    for (const Var<T>* v : vs)
        if (v && *v)
            out.push_back(v->ptr());
    return out;
}

template <typename T>
bool wants_grad(const Var<T>& v)
{
    return v && v.requires_grad();
}

// Unary elementwise op: forward f(x), backward dx += dy * df(x, y).
template <typename T, typename F, typename DF>
Var<T> unary(const std::string& op, const Var<T>& x, F f, DF df)
{
    Tensor<T> y(x.shape());
    const auto& xv = x.value().values();
    auto& yv = y.values();
    for (std::size_t i = 0; i < yv.size(); ++i)
        yv[i] = f(xv[i]);
    auto xn = x.ptr();
    return tape_of<T>(op, {&x}).record(std::move(y), op, {xn}, [xn, df](Node<T>& self) {
        if (!xn->requires_grad)
            return;
        auto& g = xn->ensure_grad().values();
        const auto& xv = xn->value.values();
        const auto& yv = self.value.values();
        const auto& dy = self.grad.values();
        for (std::size_t i = 0; i < g.size(); ++i)
            g[i] += dy[i] * df(xv[i], yv[i]);
    });
}

// Index of b's element broadcast against a's position (n, c, h, w).
struct Broadcast {
    std::size_t sn, sc, sh, sw;

    Broadcast(const Shape& a, const Shape& b, const std::string& op)
    {
        auto ok = [](int da, int db) { return db == da || db == 1; };
        if (!ok(a.n, b.n) || !ok(a.c, b.c) || !ok(a.h, b.h) || !ok(a.w, b.w))
            throw ShapeError(op + ": cannot broadcast " + b.str() + " to " + a.str());
        sw = b.w == 1 ? 0 : 1;
        sh = b.h == 1 ? 0 : static_cast<std::size_t>(b.w);
        sc = b.c == 1 ? 0 : static_cast<std::size_t>(b.h) * b.w;
        sn = b.n == 1 ? 0 : static_cast<std::size_t>(b.c) * b.h * b.w;
    }
};

template <typename F>
void for_each_bcast(const Shape& a, const Broadcast& bc, F f)
{
    std::size_t i = 0;
    for (int n = 0; n < a.n; ++n)
        for (int c = 0; c < a.c; ++c)
            for (int h = 0; h < a.h; ++h)
                for (int w = 0; w < a.w; ++w, ++i)
                    f(i, n * bc.sn + c * bc.sc + h * bc.sh + w * bc.sw);
}

template <typename T, typename F, typename DA, typename DB>
Var<T> binary(const std::string& op, const Var<T>& a, const Var<T>& b, F f, DA da, DB db)
{
    const Shape as = a.shape();
    const Broadcast bc(as, b.shape(), op);
    Tensor<T> y(as);
    const auto& av = a.value().values();
    const auto& bv = b.value().values();
    auto& yv = y.values();
    for_each_bcast(as, bc, [&](std::size_t i, std::size_t j) { yv[i] = f(av[i], bv[j]); });
    auto an = a.ptr();
    auto bn = b.ptr();
    return tape_of<T>(op, {&a, &b}).record(std::move(y), op, {an, bn}, [an, bn, bc, da, db](Node<T>& self) {
        const auto& dy = self.grad.values();
        const auto& av = an->value.values();
        const auto& bv = bn->value.values();
        const Shape s = self.value.shape();
        if (an->requires_grad) {
            auto& g = an->ensure_grad().values();
            for_each_bcast(s, bc, [&](std::size_t i, std::size_t j) { g[i] += dy[i] * da(av[i], bv[j]); });
        }
        if (bn->requires_grad) {
            auto& g = bn->ensure_grad().values();
            for_each_bcast(s, bc, [&](std::size_t i, std::size_t j) { g[j] += dy[i] * db(av[i], bv[j]); });
        }
    });
}

template <typename T>
void im2col(const T* x, int c, int h, int w, int k, int stride, int pad, int ho, int wo, T* col)
{
    const std::size_t p = static_cast<std::size_t>(ho) * wo;
    for (int ci = 0; ci < c; ++ci)
        for (int ki = 0; ki < k; ++ki)
            for (int kj = 0; kj < k; ++kj) {
                T* row = col + ((static_cast<std::size_t>(ci) * k + ki) * k + kj) * p;
                for (int oh = 0; oh < ho; ++oh) {
                    const int ih = oh * stride - pad + ki;
                    T* dst = row + static_cast<std::size_t>(oh) * wo;
                    if (ih < 0 || ih >= h) {
                        std::fill(dst, dst + wo, T(0));
                        continue;
                    }
                    const T* src = x + (static_cast<std::size_t>(ci) * h + ih) * w;
                    for (int ow = 0; ow < wo; ++ow) {
                        const int iw = ow * stride - pad + kj;
                        dst[ow] = (iw >= 0 && iw < w) ? src[iw] : T(0);
                    }
                }
            }
}

template <typename T>
void col2im(const T* col, int c, int h, int w, int k, int stride, int pad, int ho, int wo, T* x)
{
    const std::size_t p = static_cast<std::size_t>(ho) * wo;
    for (int ci = 0; ci < c; ++ci)
        for (int ki = 0; ki < k; ++ki)
            for (int kj = 0; kj < k; ++kj) {
                const T* row = col + ((static_cast<std::size_t>(ci) * k + ki) * k + kj) * p;
                for (int oh = 0; oh < ho; ++oh) {
                    const int ih = oh * stride - pad + ki;
                    if (ih < 0 || ih >= h)
                        continue;
                    T* dst = x + (static_cast<std::size_t>(ci) * h + ih) * w;
                    const T* src = row + static_cast<std::size_t>(oh) * wo;
                    for (int ow = 0; ow < wo; ++ow) {
                        const int iw = ow * stride - pad + kj;
                        if (iw >= 0 && iw < w)
                            dst[iw] += src[ow];
                    }
                }
            }
}

} // namespace

template <typename T>
T Var<T>::item() const
{
    if (node_->value.numel() != 1)
        throw ShapeError("item() on non-scalar tensor " + node_->value.shape().str());
    return node_->value[0];
}

template <typename T>
Var<T> parameter(Tensor<T> value, std::string name)
{
    auto n = std::make_shared<Node<T>>();
    n->value = std::move(value);
    n->requires_grad = true;
    n->op = std::move(name);
    return Var<T>(n);
}

template <typename T>
Var<T> Tape<T>::constant(Tensor<T> value, std::string name)
{
    return input(std::move(value), false, std::move(name));
}

template <typename T>
Var<T> Tape<T>::input(Tensor<T> value, bool requires_grad, std::string name)
{
    if (!all_finite(value))
        throw NumericalError("non-finite value in tape input '" + name + "'");
    auto n = std::make_shared<Node<T>>();
    n->value = std::move(value);
    n->requires_grad = requires_grad;
    n->op = std::move(name);
    n->tape = this;
    nodes_.push_back(n);
    return Var<T>(n);
}

template <typename T>
Var<T> Tape<T>::record(Tensor<T> value, std::string op, std::vector<std::shared_ptr<Node<T>>> inputs,
                       std::function<void(Node<T>&)> backward)
{
    if (!all_finite(value))
        throw NumericalError("non-finite activation produced by op '" + op + "'");
    auto n = std::make_shared<Node<T>>();
    n->value = std::move(value);
    n->op = std::move(op);
    n->tape = this;
    n->requires_grad = std::any_of(inputs.begin(), inputs.end(), [](const auto& p) { return p->requires_grad; });
    if (n->requires_grad)
        n->backward = std::move(backward);
    nodes_.push_back(n);
    return Var<T>(n);
}

template <typename T>
void Tape<T>::backward(const Var<T>& loss)
{
    if (backward_done_)
        throw std::logic_error("backward already ran on this tape; clear() it before reuse");
    if (!loss || loss.node()->tape != this)
        throw std::logic_error("loss is not recorded on this tape");
    if (loss.value().numel() != 1)
        throw ShapeError("backward needs a scalar loss, got " + loss.shape().str());
    if (!loss.requires_grad())
        throw std::logic_error("loss is detached: no parameter or input requires a gradient");
    backward_done_ = true;
    loss.node()->ensure_grad().fill(T(1));
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
        Node<T>& n = **it;
        if (n.backward && !n.grad.empty())
            n.backward(n);
    }
}

template <typename T>
void Tape<T>::clear()
{
    nodes_.clear();
    backward_done_ = false;
}

template <typename T>
Var<T> conv2d(const Var<T>& x, const Var<T>& weight, const Var<T>& bias, int stride, int padding)
{
    const Shape xs = x.shape();
    const Shape ws = weight.shape();
    if (ws.c != xs.c || ws.h != ws.w)
        throw ShapeError("conv2d: weight " + ws.str() + " incompatible with input " + xs.str());
    if (bias && !(bias.shape() == Shape{1, ws.n, 1, 1}))
        throw ShapeError("conv2d: bias " + bias.shape().str() + " expected (1," + std::to_string(ws.n) + ",1,1)");
    if (stride < 1 || padding < 0)
        throw ShapeError("conv2d: stride must be >= 1 and padding >= 0");
    const int k = ws.h;
    if (xs.h + 2 * padding < k || xs.w + 2 * padding < k)
        throw ShapeError("conv2d: kernel " + std::to_string(k) + " larger than padded input " + xs.str());
    const int ho = (xs.h + 2 * padding - k) / stride + 1;
    const int wo = (xs.w + 2 * padding - k) / stride + 1;
    const int f = ws.n;
    const std::size_t kk = static_cast<std::size_t>(xs.c) * k * k;
    const std::size_t p = static_cast<std::size_t>(ho) * wo;

    const auto ekk = static_cast<Eigen::Index>(kk);
    const auto ep = static_cast<Eigen::Index>(p);
    // Eigen operands live in owned (aligned) matrices: its kernels pick
    // summation order by pointer alignment, and results must not depend on
    // where the allocator put a tensor.
    auto cols = std::make_shared<std::vector<RowMat<T>>>(static_cast<std::size_t>(xs.n));
    Tensor<T> y({xs.n, f, ho, wo});
    const RowMat<T> W = CMatMap<T>(weight.value().data(), f, ekk);
    RowMat<T> Y(f, ep);
    for (int n = 0; n < xs.n; ++n) {
        RowMat<T>& col = (*cols)[static_cast<std::size_t>(n)];
        col.resize(ekk, ep);
        im2col(x.value().data() + static_cast<std::size_t>(n) * xs.c * xs.plane(), xs.c, xs.h, xs.w, k, stride,
               padding, ho, wo, col.data());
        Y.noalias() = W * col;
        T* out = y.data() + static_cast<std::size_t>(n) * f * p;
        std::copy(Y.data(), Y.data() + Y.size(), out);
        if (bias) {
            const T* b = bias.value().data();
            for (int fi = 0; fi < f; ++fi)
                for (std::size_t j = 0; j < p; ++j)
                    out[static_cast<std::size_t>(fi) * p + j] += b[fi];
        }
    }

    auto xn = x.ptr();
    auto wn = weight.ptr();
    auto bn = bias ? bias.ptr() : nullptr;
    std::vector<std::shared_ptr<Node<T>>> ins{xn, wn};
    if (bn)
        ins.push_back(bn);
    return tape_of<T>("conv2d", {&x, &weight, &bias})
        .record(std::move(y), "conv2d", std::move(ins),
                [xn, wn, bn, cols, xs, k, stride, padding, ho, wo, f, ekk, ep](Node<T>& self) {
                    const std::size_t p = static_cast<std::size_t>(ep);
                    const RowMat<T> W = CMatMap<T>(wn->value.data(), f, ekk);
                    RowMat<T> dW;
                    if (wn->requires_grad)
                        dW = RowMat<T>::Zero(f, ekk);
                    RowMat<T> dC;
                    for (int n = 0; n < xs.n; ++n) {
                        const T* g = self.grad.data() + static_cast<std::size_t>(n) * f * p;
                        const RowMat<T> dY = CMatMap<T>(g, f, ep);
                        const RowMat<T>& col = (*cols)[static_cast<std::size_t>(n)];
                        if (wn->requires_grad)
                            dW.noalias() += dY * col.transpose();
                        if (bn && bn->requires_grad) {
                            T* db = bn->ensure_grad().data();
                            for (int fi = 0; fi < f; ++fi) {
                                T acc = 0;
                                for (std::size_t j = 0; j < p; ++j)
                                    acc += g[static_cast<std::size_t>(fi) * p + j];
                                db[fi] += acc;
                            }
                        }
                        if (xn->requires_grad) {
                            dC.noalias() = W.transpose() * dY;
                            col2im(dC.data(), xs.c, xs.h, xs.w, k, stride, padding, ho, wo,
                                   xn->ensure_grad().data() + static_cast<std::size_t>(n) * xs.c * xs.plane());
                        }
                    }
                    if (wn->requires_grad) {
                        T* dst = wn->ensure_grad().data();
                        for (Eigen::Index i = 0; i < dW.size(); ++i)
                            dst[i] += dW.data()[i];
                    }
                });
}

template <typename T>
Var<T> instance_norm(const Var<T>& x, double eps)
{
    const Shape s = x.shape();
    const std::size_t hw = s.plane();
    if (hw == 0)
        throw ShapeError("instance_norm: empty spatial extent");
    Tensor<T> y(s);
    auto inv_std = std::make_shared<std::vector<T>>(static_cast<std::size_t>(s.n) * s.c);
    const T* xv = x.value().data();
    T* yv = y.data();
    for (std::size_t ch = 0; ch < inv_std->size(); ++ch) {
        const T* xi = xv + ch * hw;
        double m = 0.0;
        for (std::size_t i = 0; i < hw; ++i)
            m += xi[i];
        m /= static_cast<double>(hw);
        double var = 0.0;
        for (std::size_t i = 0; i < hw; ++i)
            var += (xi[i] - m) * (xi[i] - m);
        var /= static_cast<double>(hw);
        const double is = 1.0 / std::sqrt(var + eps);
        (*inv_std)[ch] = static_cast<T>(is);
        for (std::size_t i = 0; i < hw; ++i)
            yv[ch * hw + i] = static_cast<T>((xi[i] - m) * is);
    }
    auto xn = x.ptr();
    return tape_of<T>("instance_norm", {&x}).record(std::move(y), "instance_norm", {xn}, [xn, inv_std, hw](Node<T>& self) {
        if (!xn->requires_grad)
            return;
        T* g = xn->ensure_grad().data();
        const T* yv = self.value.data();
        const T* dy = self.grad.data();
        for (std::size_t ch = 0; ch < inv_std->size(); ++ch) {
            double mdy = 0.0;
            double mdyy = 0.0;
            for (std::size_t i = 0; i < hw; ++i) {
                mdy += dy[ch * hw + i];
                mdyy += static_cast<double>(dy[ch * hw + i]) * yv[ch * hw + i];
            }
            mdy /= static_cast<double>(hw);
            mdyy /= static_cast<double>(hw);
            const double is = (*inv_std)[ch];
            for (std::size_t i = 0; i < hw; ++i)
                g[ch * hw + i] += static_cast<T>(is * (dy[ch * hw + i] - mdy - yv[ch * hw + i] * mdyy));
        }
    });
}

template <typename T>
Var<T> spade_norm(const Var<T>& x, const Var<T>& cond, const SpadeWeights<T>& w, double eps)
{
    if (cond.shape().n != x.shape().n || cond.shape().h != x.shape().h || cond.shape().w != x.shape().w)
        throw ShapeError("spade_norm: condition " + cond.shape().str() + " does not match input " + x.shape().str());
    if (w.gamma_w.shape().n != x.shape().c || w.beta_w.shape().n != x.shape().c)
        throw ShapeError("spade_norm: modulation heads do not match channel count of " + x.shape().str());
    const Var<T> normalized = instance_norm(x, eps);
    const Var<T> hidden = relu(conv2d(cond, w.shared_w, w.shared_b, 1, 1));
    const Var<T> gamma = conv2d(hidden, w.gamma_w, w.gamma_b, 1, 1);
    const Var<T> beta = conv2d(hidden, w.beta_w, w.beta_b, 1, 1);
    return add(mul(gamma, normalized), beta);
}

template <typename T>
Var<T> upsample_nearest_x2(const Var<T>& x)
{
    const Shape s = x.shape();
    Tensor<T> y({s.n, s.c, 2 * s.h, 2 * s.w});
    const Tensor<T>& xv = x.value();
    for (int n = 0; n < s.n; ++n)
        for (int c = 0; c < s.c; ++c)
            for (int h = 0; h < 2 * s.h; ++h)
                for (int w = 0; w < 2 * s.w; ++w)
                    y(n, c, h, w) = xv(n, c, h / 2, w / 2);
    auto xn = x.ptr();
    return tape_of<T>("upsample", {&x}).record(std::move(y), "upsample_nearest_x2", {xn}, [xn, s](Node<T>& self) {
        if (!xn->requires_grad)
            return;
        Tensor<T>& g = xn->ensure_grad();
        for (int n = 0; n < s.n; ++n)
            for (int c = 0; c < s.c; ++c)
                for (int h = 0; h < 2 * s.h; ++h)
                    for (int w = 0; w < 2 * s.w; ++w)
                        g(n, c, h / 2, w / 2) += self.grad(n, c, h, w);
    });
}

template <typename T>
Var<T> dense(const Var<T>& x, const Var<T>& weight, const Var<T>& bias)
{
    const Shape xs = x.shape();
    const Shape ws = weight.shape();
    const std::size_t in = xs.numel() / xs.n;
    if (static_cast<std::size_t>(ws.c) * ws.h * ws.w != in)
        throw ShapeError("dense: weight " + ws.str() + " incompatible with input " + xs.str());
    const int out = ws.n;
    if (bias && !(bias.shape() == Shape{1, out, 1, 1}))
        throw ShapeError("dense: bias " + bias.shape().str() + " expected (1," + std::to_string(out) + ",1,1)");
    const auto ein = static_cast<Eigen::Index>(in);
    Tensor<T> y({xs.n, out, 1, 1});
    {
        const RowMat<T> X = CMatMap<T>(x.value().data(), xs.n, ein);
        const RowMat<T> W = CMatMap<T>(weight.value().data(), out, ein);
        const RowMat<T> Y = X * W.transpose();
        std::copy(Y.data(), Y.data() + Y.size(), y.data());
        if (bias)
            for (int i = 0; i < xs.n; ++i)
                for (int o = 0; o < out; ++o)
                    y[static_cast<std::size_t>(i) * out + o] += bias.value()[static_cast<std::size_t>(o)];
    }
    auto xn = x.ptr();
    auto wn = weight.ptr();
    auto bn = bias ? bias.ptr() : nullptr;
    std::vector<std::shared_ptr<Node<T>>> ins{xn, wn};
    if (bn)
        ins.push_back(bn);
    return tape_of<T>("dense", {&x, &weight, &bias})
        .record(std::move(y), "dense", std::move(ins), [xn, wn, bn, xs, out, ein](Node<T>& self) {
            const RowMat<T> dY = CMatMap<T>(self.grad.data(), xs.n, out);
            const auto add_into = [](T* dst, const RowMat<T>& m) {
                for (Eigen::Index i = 0; i < m.size(); ++i)
                    dst[i] += m.data()[i];
            };
            if (xn->requires_grad) {
                const RowMat<T> dX = dY * RowMat<T>(CMatMap<T>(wn->value.data(), out, ein));
                add_into(xn->ensure_grad().data(), dX);
            }
            if (wn->requires_grad) {
                const RowMat<T> dW = dY.transpose() * RowMat<T>(CMatMap<T>(xn->value.data(), xs.n, ein));
                add_into(wn->ensure_grad().data(), dW);
            }
            if (bn && bn->requires_grad) {
                T* db = bn->ensure_grad().data();
                for (int i = 0; i < xs.n; ++i)
                    for (int o = 0; o < out; ++o)
                        db[o] += dY(i, o);
            }
        });
}

template <typename T>
Var<T> concat_channels(const std::vector<Var<T>>& parts)
{
    if (parts.empty())
        throw ShapeError("concat_channels of nothing");
    Shape s = parts.front().shape();
    int total = 0;
    for (const auto& p : parts) {
        const Shape ps = p.shape();
        if (ps.n != s.n || ps.h != s.h || ps.w != s.w)
            throw ShapeError("concat_channels: " + ps.str() + " does not match " + s.str());
        total += ps.c;
    }
    s.c = total;
    Tensor<T> y(s);
    const std::size_t hw = s.plane();
    std::vector<std::shared_ptr<Node<T>>> ins;
    std::vector<int> offsets;
    int off = 0;
    for (const auto& p : parts) {
        const int pc = p.shape().c;
        for (int n = 0; n < s.n; ++n)
            std::copy_n(p.value().data() + static_cast<std::size_t>(n) * pc * hw, pc * hw,
                        y.data() + (static_cast<std::size_t>(n) * s.c + off) * hw);
        ins.push_back(p.ptr());
        offsets.push_back(off);
        off += pc;
    }
    auto in_copy = ins;
    return tape_of<T>("concat_channels", parts)
        .record(std::move(y), "concat_channels", std::move(ins), [in_copy, offsets, s, hw](Node<T>& self) {
            for (std::size_t i = 0; i < in_copy.size(); ++i) {
                auto& pn = in_copy[i];
                if (!pn->requires_grad)
                    continue;
                const int pc = pn->value.shape().c;
                T* g = pn->ensure_grad().data();
                for (int n = 0; n < s.n; ++n) {
                    const T* src = self.grad.data() + (static_cast<std::size_t>(n) * s.c + offsets[i]) * hw;
                    T* dst = g + static_cast<std::size_t>(n) * pc * hw;
                    for (std::size_t j = 0; j < pc * hw; ++j)
                        dst[j] += src[j];
                }
            }
        });
}

template <typename T>
Var<T> reshape(const Var<T>& x, Shape s)
{
    if (s.numel() != x.value().numel())
        throw ShapeError("reshape: " + x.shape().str() + " to " + s.str());
    auto xn = x.ptr();
    return tape_of<T>("reshape", {&x}).record(x.value().reshaped(s), "reshape", {xn}, [xn](Node<T>& self) {
        if (!xn->requires_grad)
            return;
        auto& g = xn->ensure_grad().values();
        const auto& dy = self.grad.values();
        for (std::size_t i = 0; i < g.size(); ++i)
            g[i] += dy[i];
    });
}

template <typename T>
Var<T> pad_replicate(const Var<T>& x, int pad)
{
    const Shape s = x.shape();
    if (pad < 0)
        throw ShapeError("pad_replicate: negative padding");
    Tensor<T> y({s.n, s.c, s.h + 2 * pad, s.w + 2 * pad});
    auto src = [&](int i, int lim) { return std::clamp(i - pad, 0, lim - 1); };
    for (int n = 0; n < s.n; ++n)
        for (int c = 0; c < s.c; ++c)
            for (int h = 0; h < s.h + 2 * pad; ++h)
                for (int w = 0; w < s.w + 2 * pad; ++w)
                    y(n, c, h, w) = x.value()(n, c, src(h, s.h), src(w, s.w));
    auto xn = x.ptr();
    return tape_of<T>("pad_replicate", {&x}).record(std::move(y), "pad_replicate", {xn}, [xn, s, pad](Node<T>& self) {
        if (!xn->requires_grad)
            return;
        Tensor<T>& g = xn->ensure_grad();
        for (int n = 0; n < s.n; ++n)
            for (int c = 0; c < s.c; ++c)
                for (int h = 0; h < s.h + 2 * pad; ++h)
                    for (int w = 0; w < s.w + 2 * pad; ++w)
                        g(n, c, std::clamp(h - pad, 0, s.h - 1), std::clamp(w - pad, 0, s.w - 1)) +=
                            self.grad(n, c, h, w);
    });
}

template <typename T>
Var<T> relu(const Var<T>& x)
{
    return unary<T>(
        "relu", x, [](T v) { return v > T(0) ? v : T(0); }, [](T v, T) { return v > T(0) ? T(1) : T(0); });
}

template <typename T>
Var<T> lrelu(const Var<T>& x, double slope)
{
    const T a = static_cast<T>(slope);
    return unary<T>(
        "lrelu", x, [a](T v) { return v > T(0) ? v : a * v; }, [a](T v, T) { return v > T(0) ? T(1) : a; });
}

template <typename T>
Var<T> sigmoid(const Var<T>& x)
{
    return unary<T>(
        "sigmoid", x,
        [](T v) {
            if (v >= T(0))
                return T(1) / (T(1) + std::exp(-v));
            const T e = std::exp(v);
            return e / (T(1) + e);
        },
        [](T, T y) { return y * (T(1) - y); });
}

template <typename T>
Var<T> softplus(const Var<T>& x)
{
    return unary<T>(
        "softplus", x, [](T v) { return std::max(v, T(0)) + std::log1p(std::exp(-std::abs(v))); },
        [](T v, T) {
            if (v >= T(0))
                return T(1) / (T(1) + std::exp(-v));
            const T e = std::exp(v);
            return e / (T(1) + e);
        });
}

template <typename T>
Var<T> log(const Var<T>& x)
{
    return unary<T>(
        "log", x, [](T v) { return std::log(v); }, [](T v, T) { return T(1) / v; });
}

template <typename T>
Var<T> exp(const Var<T>& x)
{
    return unary<T>(
        "exp", x, [](T v) { return std::exp(v); }, [](T, T y) { return y; });
}

template <typename T>
Var<T> sqrt(const Var<T>& x)
{
    return unary<T>(
        "sqrt", x, [](T v) { return std::sqrt(v); }, [](T, T y) { return T(0.5) / y; });
}

template <typename T>
Var<T> abs(const Var<T>& x)
{
    return unary<T>(
        "abs", x, [](T v) { return std::abs(v); },
        [](T v, T) { return v > T(0) ? T(1) : (v < T(0) ? T(-1) : T(0)); });
}

template <typename T>
Var<T> scale(const Var<T>& x, double s)
{
    const T k = static_cast<T>(s);
    return unary<T>(
        "scale", x, [k](T v) { return k * v; }, [k](T, T) { return k; });
}

template <typename T>
Var<T> add_scalar(const Var<T>& x, double s)
{
    const T k = static_cast<T>(s);
    return unary<T>(
        "add_scalar", x, [k](T v) { return v + k; }, [](T, T) { return T(1); });
}

template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b)
{
    return binary<T>(
        "add", a, b, [](T x, T y) { return x + y; }, [](T, T) { return T(1); }, [](T, T) { return T(1); });
}

template <typename T>
Var<T> sub(const Var<T>& a, const Var<T>& b)
{
    return binary<T>(
        "sub", a, b, [](T x, T y) { return x - y; }, [](T, T) { return T(1); }, [](T, T) { return T(-1); });
}

template <typename T>
Var<T> mul(const Var<T>& a, const Var<T>& b)
{
    return binary<T>(
        "mul", a, b, [](T x, T y) { return x * y; }, [](T, T y) { return y; }, [](T x, T) { return x; });
}

template <typename T>
Var<T> div(const Var<T>& a, const Var<T>& b)
{
    return binary<T>(
        "div", a, b, [](T x, T y) { return x / y; }, [](T, T y) { return T(1) / y; },
        [](T x, T y) { return -x / (y * y); });
}

template <typename T>
Var<T> sum(const Var<T>& x)
{
    double acc = 0.0;
    for (T v : x.value().values())
        acc += v;
    auto xn = x.ptr();
    return tape_of<T>("sum", {&x}).record(Tensor<T>({1, 1, 1, 1}, static_cast<T>(acc)), "sum", {xn},
                                          [xn](Node<T>& self) {
                                              if (!xn->requires_grad)
                                                  return;
                                              const T g0 = self.grad[0];
                                              for (T& g : xn->ensure_grad().values())
                                                  g += g0;
                                          });
}

template <typename T>
Var<T> mean(const Var<T>& x)
{
    return scale(sum(x), 1.0 / static_cast<double>(x.value().numel()));
}

template <typename T>
Var<T> sum_hw(const Var<T>& x)
{
    const Shape s = x.shape();
    const std::size_t hw = s.plane();
    Tensor<T> y({s.n, s.c, 1, 1});
    for (std::size_t ch = 0; ch < y.numel(); ++ch) {
        double acc = 0.0;
        for (std::size_t i = 0; i < hw; ++i)
            acc += x.value()[ch * hw + i];
        y[ch] = static_cast<T>(acc);
    }
    auto xn = x.ptr();
    return tape_of<T>("sum_hw", {&x}).record(std::move(y), "sum_hw", {xn}, [xn, hw](Node<T>& self) {
        if (!xn->requires_grad)
            return;
        auto& g = xn->ensure_grad().values();
        for (std::size_t i = 0; i < g.size(); ++i)
            g[i] += self.grad[i / hw];
    });
}

#define RFGAN_AG_INSTANTIATE(T)                                                                                        \
    template class Var<T>;                                                                                             \
    template class Tape<T>;                                                                                            \
    template Var<T> parameter(Tensor<T>, std::string);                                                                 \
    template Var<T> conv2d(const Var<T>&, const Var<T>&, const Var<T>&, int, int);                                     \
    template Var<T> instance_norm(const Var<T>&, double);                                                              \
    template Var<T> spade_norm(const Var<T>&, const Var<T>&, const SpadeWeights<T>&, double);                          \
    template Var<T> upsample_nearest_x2(const Var<T>&);                                                                \
    template Var<T> dense(const Var<T>&, const Var<T>&, const Var<T>&);                                                \
    template Var<T> concat_channels(const std::vector<Var<T>>&);                                                       \
    template Var<T> reshape(const Var<T>&, Shape);                                                                     \
    template Var<T> pad_replicate(const Var<T>&, int);                                                                 \
    template Var<T> relu(const Var<T>&);                                                                               \
    template Var<T> lrelu(const Var<T>&, double);                                                                      \
    template Var<T> sigmoid(const Var<T>&);                                                                            \
    template Var<T> softplus(const Var<T>&);                                                                           \
    template Var<T> log(const Var<T>&);                                                                                \
    template Var<T> exp(const Var<T>&);                                                                                \
    template Var<T> sqrt(const Var<T>&);                                                                               \
    template Var<T> abs(const Var<T>&);                                                                                \
    template Var<T> scale(const Var<T>&, double);                                                                      \
    template Var<T> add_scalar(const Var<T>&, double);                                                                 \
    template Var<T> add(const Var<T>&, const Var<T>&);                                                                 \
    template Var<T> sub(const Var<T>&, const Var<T>&);                                                                 \
    template Var<T> mul(const Var<T>&, const Var<T>&);                                                                 \
    template Var<T> div(const Var<T>&, const Var<T>&);                                                                 \
    template Var<T> sum(const Var<T>&);                                                                                \
    template Var<T> mean(const Var<T>&);                                                                               \
    template Var<T> sum_hw(const Var<T>&);

RFGAN_AG_INSTANTIATE(float)
RFGAN_AG_INSTANTIATE(double)

} // namespace rfgan::ag
