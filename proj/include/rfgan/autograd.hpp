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

// Tape-based reverse-mode differentiation over NCHW tensors. Ops record a
// node on the tape of their first tape-bound input; parameters are
// persistent leaves that live outside any tape and accumulate gradients
// until zeroed.

#include "rfgan/tensor.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace rfgan::ag {

template <typename T>
class Tape;

template <typename T>
struct Node {
    Tensor<T> value;
    Tensor<T> grad; // empty until something flows into it
    bool requires_grad = false;
    std::string op;
    Tape<T>* tape = nullptr;
    std::function<void(Node&)> backward;

    Tensor<T>& ensure_grad()
    {
        if (grad.empty())
            grad = Tensor<T>(value.shape());
        return grad;
    }
};

template <typename T>
class Var {
public:
    Var() = default;
    explicit Var(std::shared_ptr<Node<T>> n) : node_(std::move(n)) {}

    explicit operator bool() const { return static_cast<bool>(node_); }
    const Tensor<T>& value() const { return node_->value; }
    Tensor<T>& mutable_value() { return node_->value; }
    const Tensor<T>& grad() const { return node_->grad; }
    Tensor<T>& mutable_grad() { return node_->ensure_grad(); }
    const Shape& shape() const { return node_->value.shape(); }
    bool requires_grad() const { return node_->requires_grad; }
    const std::string& op() const { return node_->op; }
    T item() const;
    void zero_grad()
    {
        if (!node_->grad.empty())
            node_->grad.fill(T(0));
    }

    Node<T>* node() const { return node_.get(); }
    const std::shared_ptr<Node<T>>& ptr() const { return node_; }

private:
    std::shared_ptr<Node<T>> node_;
};

// Persistent trainable leaf (not bound to any tape).
template <typename T>
Var<T> parameter(Tensor<T> value, std::string name = "param");

template <typename T>
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    // Tape-bound leaf; constants never receive gradients.
    Var<T> constant(Tensor<T> value, std::string name = "constant");
    Var<T> input(Tensor<T> value, bool requires_grad, std::string name = "input");

    // Populate d(loss)/d(x) for every requires_grad tensor reachable from
    // `loss`. Throws on non-scalar or detached loss and on a second call
    // before clear().
    void backward(const Var<T>& loss);
    void clear();
    std::size_t size() const { return nodes_.size(); }

    // Used by ops.
    Var<T> record(Tensor<T> value, std::string op, std::vector<std::shared_ptr<Node<T>>> inputs,
                  std::function<void(Node<T>&)> backward);

private:
    std::vector<std::shared_ptr<Node<T>>> nodes_;
    bool backward_done_ = false;
};

// ---- layers -------------------------------------------------------------

// Cross-correlation with zero padding. weight (F, C, k, k); bias (1, F, 1, 1)
// or an empty Var for none.
template <typename T>
Var<T> conv2d(const Var<T>& x, const Var<T>& weight, const Var<T>& bias, int stride, int padding);

// Per-sample, per-channel (x - mean) / sqrt(var + eps), no affine.
template <typename T>
Var<T> instance_norm(const Var<T>& x, double eps = 1e-5);

template <typename T>
struct SpadeWeights {
    Var<T> shared_w, shared_b;
    Var<T> gamma_w, gamma_b;
    Var<T> beta_w, beta_b;
};

// gamma(cond) * instance_norm(x) + beta(cond); cond must match x spatially.
// gamma and beta are 3x3 heads over a shared ReLU 3x3 embedding of cond.
template <typename T>
Var<T> spade_norm(const Var<T>& x, const Var<T>& cond, const SpadeWeights<T>& w, double eps = 1e-5);

template <typename T>
Var<T> upsample_nearest_x2(const Var<T>& x);

// x (N, ...) flattened per sample; weight (out, in, 1, 1); bias (1, out, 1, 1).
template <typename T>
Var<T> dense(const Var<T>& x, const Var<T>& weight, const Var<T>& bias);

template <typename T>
Var<T> concat_channels(const std::vector<Var<T>>& parts);

template <typename T>
Var<T> reshape(const Var<T>& x, Shape s);

template <typename T>
Var<T> pad_replicate(const Var<T>& x, int pad);

// ---- elementwise --------------------------------------------------------

template <typename T>
Var<T> relu(const Var<T>& x);
template <typename T>
Var<T> lrelu(const Var<T>& x, double slope = 0.2);
template <typename T>
Var<T> sigmoid(const Var<T>& x);
// log(1 + exp(x)), evaluated without overflow.
template <typename T>
Var<T> softplus(const Var<T>& x);
template <typename T>
Var<T> log(const Var<T>& x);
template <typename T>
Var<T> exp(const Var<T>& x);
template <typename T>
Var<T> sqrt(const Var<T>& x);
template <typename T>
Var<T> abs(const Var<T>& x);
template <typename T>
Var<T> scale(const Var<T>& x, double s);
template <typename T>
Var<T> add_scalar(const Var<T>& x, double s);

// Binary ops; `b` may broadcast along any axis where its extent is 1.
template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b);
template <typename T>
Var<T> sub(const Var<T>& a, const Var<T>& b);
template <typename T>
Var<T> mul(const Var<T>& a, const Var<T>& b);
template <typename T>
Var<T> div(const Var<T>& a, const Var<T>& b);

// ---- reductions ---------------------------------------------------------

template <typename T>
Var<T> sum(const Var<T>& x);
template <typename T>
Var<T> mean(const Var<T>& x);
// (N, C, H, W) -> (N, C, 1, 1)
template <typename T>
Var<T> sum_hw(const Var<T>& x);

template <typename T>
Var<T> operator+(const Var<T>& a, const Var<T>& b) { return add(a, b); }
template <typename T>
Var<T> operator-(const Var<T>& a, const Var<T>& b) { return sub(a, b); }
template <typename T>
Var<T> operator*(const Var<T>& a, const Var<T>& b) { return mul(a, b); }
template <typename T>
Var<T> operator/(const Var<T>& a, const Var<T>& b) { return div(a, b); }
template <typename T>
Var<T> operator*(double s, const Var<T>& a) { return scale(a, s); }

} // namespace rfgan::ag
