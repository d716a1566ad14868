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

#include "rfgan/trainer.hpp"

#include "rfgan/errors.hpp"
#include "rfgan/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>

namespace rfgan {

using nlohmann::json;

// ---- config --------------------------------------------------------------

void TrainConfig::validate() const
{
    if (batch_size < 1)
        throw ConfigError("train.batch_size must be >= 1");
    if (steps < 0)
        throw ConfigError("train.steps must be >= 0");
    if (!(lr_g > 0.0) || !(lr_d > 0.0))
        throw ConfigError("train.lr_g and train.lr_d must be > 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
        throw ConfigError("train.beta1 and train.beta2 must lie in [0, 1)");
    if (!(adam_eps > 0.0))
        throw ConfigError("train.adam_eps must be > 0");
    if (eval_interval < 1)
        throw ConfigError("train.eval_interval must be >= 1");
    if (eval_z_draws < 1)
        throw ConfigError("train.eval_z_draws must be >= 1");
    if (!(focal_gamma >= 0.0))
        throw ConfigError("train.focal_gamma must be >= 0");
    weights.validate();
    generator.validate();
    discriminator.validate();
    if (generator.target_resolution != discriminator.input_resolution)
        throw ConfigError("generator and discriminator resolutions differ");
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where)
{
    if (!j.is_object())
        throw ConfigError(where + ": expected an object");
    for (const auto& [k, _] : j.items())
        if (!known.contains(k))
            throw ConfigError(where + ": unknown field '" + k + "'");
}

template <typename V>
void read(const json& j, const char* key, V& out, const std::string& where)
{
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<V>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

} // namespace

TrainConfig parse_train_config(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("train config: ") + e.what());
    }
    const std::string w = "train";
    reject_unknown(j,
                   {"batch_size", "steps", "lr_g", "lr_d", "beta1", "beta2", "adam_eps", "seed", "weights",
                    "focal_gamma", "gl_raw_cosine", "eval_interval", "eval_z_draws", "eval_seed", "generator",
                    "discriminator"},
                   w);
    TrainConfig c;
    read(j, "batch_size", c.batch_size, w);
    read(j, "steps", c.steps, w);
    read(j, "lr_g", c.lr_g, w);
    read(j, "lr_d", c.lr_d, w);
    read(j, "beta1", c.beta1, w);
    read(j, "beta2", c.beta2, w);
    read(j, "adam_eps", c.adam_eps, w);
    read(j, "seed", c.seed, w);
    read(j, "focal_gamma", c.focal_gamma, w);
    read(j, "gl_raw_cosine", c.gl_raw_cosine, w);
    read(j, "eval_interval", c.eval_interval, w);
    read(j, "eval_z_draws", c.eval_z_draws, w);
    read(j, "eval_seed", c.eval_seed, w);
    if (j.contains("weights")) {
        const json& lw = j["weights"];
        reject_unknown(lw, {"mae", "fl", "fm", "vgg", "gl"}, w + ".weights");
        read(lw, "mae", c.weights.mae, w + ".weights");
        read(lw, "fl", c.weights.fl, w + ".weights");
        read(lw, "fm", c.weights.fm, w + ".weights");
        read(lw, "vgg", c.weights.vgg, w + ".weights");
        read(lw, "gl", c.weights.gl, w + ".weights");
    }
    if (j.contains("generator")) {
        const json& g = j["generator"];
        const std::string wg = w + ".generator";
        reject_unknown(g, {"z_dim", "base_channels", "target_resolution", "spade_hidden"}, wg);
        read(g, "z_dim", c.generator.z_dim, wg);
        read(g, "base_channels", c.generator.base_channels, wg);
        read(g, "target_resolution", c.generator.target_resolution, wg);
        read(g, "spade_hidden", c.generator.spade_hidden, wg);
    }
    if (j.contains("discriminator")) {
        const json& d = j["discriminator"];
        reject_unknown(d, {"base_channels"}, w + ".discriminator");
        read(d, "base_channels", c.discriminator.base_channels, w + ".discriminator");
    }
    c.discriminator.input_resolution = c.generator.target_resolution;
    c.validate();
    return c;
}

std::string train_config_json(const TrainConfig& c)
{
    json j;
    j["batch_size"] = c.batch_size;
    j["steps"] = c.steps;
    j["lr_g"] = c.lr_g;
    j["lr_d"] = c.lr_d;
    j["beta1"] = c.beta1;
    j["beta2"] = c.beta2;
    j["adam_eps"] = c.adam_eps;
    j["seed"] = c.seed;
    j["weights"] = {{"mae", c.weights.mae},
                    {"fl", c.weights.fl},
                    {"fm", c.weights.fm},
                    {"vgg", c.weights.vgg},
                    {"gl", c.weights.gl}};
    j["focal_gamma"] = c.focal_gamma;
    j["gl_raw_cosine"] = c.gl_raw_cosine;
    j["eval_interval"] = c.eval_interval;
    j["eval_z_draws"] = c.eval_z_draws;
    j["eval_seed"] = c.eval_seed;
    j["generator"] = {{"z_dim", c.generator.z_dim},
                      {"base_channels", c.generator.base_channels},
                      {"target_resolution", c.generator.target_resolution},
                      {"spade_hidden", c.generator.spade_hidden}};
    j["discriminator"] = {{"base_channels", c.discriminator.base_channels}};
    return j.dump(2);
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

// ---- adam ----------------------------------------------------------------

template <typename T>
void Adam<T>::init(const ModelParams<T>& params)
{
    m_.clear();
    v_.clear();
    for (const auto& [_, p] : params.entries()) {
        m_.emplace_back(p.shape());
        v_.emplace_back(p.shape());
    }
}

template <typename T>
void Adam<T>::step(ModelParams<T>& params, long t)
{
    if (m_.size() != params.size())
        init(params);
    const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t));
    const T a = static_cast<T>(lr_ * std::sqrt(c2) / c1);
    const T b1 = static_cast<T>(b1_), b2 = static_cast<T>(b2_);
    const T eps = static_cast<T>(eps_ * std::sqrt(c2));
    auto& entries = params.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto& p = entries[i].second;
        if (p.grad().empty())
            continue;
        const Tensor<T>& g = p.grad();
        Tensor<T>& w = p.mutable_value();
        Tensor<T>& m = m_[i];
        Tensor<T>& v = v_[i];
        for (std::size_t k = 0; k < w.numel(); ++k) {
            m[k] = b1 * m[k] + (T(1) - b1) * g[k];
            v[k] = b2 * v[k] + (T(1) - b2) * g[k] * g[k];
            w[k] -= a * m[k] / (std::sqrt(v[k]) + eps);
        }
        if (!all_finite(w))
            throw NumericalError("parameter '" + entries[i].first + "' became non-finite after the update");
    }
}

template class Adam<float>;
template class Adam<double>;

// ---- batches and steps ---------------------------------------------------

Batch make_batch(std::span<const Sample* const> samples)
{
    if (samples.empty())
        throw DataError("empty batch");
    const auto& c0 = samples.front()->condition;
    const int b = static_cast<int>(samples.size());
    const int ch = c0.channels();
    const int h = c0.height, w = c0.width;
    Batch batch{Tensor<float>({b, ch, h, w}), Tensor<float>({b, 1, h, w})};
    const std::size_t cplane = static_cast<std::size_t>(ch) * h * w;
    const std::size_t tplane = static_cast<std::size_t>(h) * w;
    for (int i = 0; i < b; ++i) {
        const Sample& s = *samples[static_cast<std::size_t>(i)];
        if (s.condition.width != w || s.condition.height != h || s.condition.channels() != ch)
            throw ShapeError("batch samples disagree in shape");
        const auto stack = s.condition.stack();
        std::copy(stack.begin(), stack.end(), batch.cond.data() + i * cplane);
        std::copy(s.target.begin(), s.target.end(), batch.real.data() + i * tplane);
    }
    return batch;
}

TrainState::TrainState(const TrainConfig& c)
    : cfg(c),
      g(build_generator<float>(c.generator, c.seed * 2 + 1)),
      d(build_discriminator<float>(c.discriminator, c.seed * 2 + 2)),
      opt_g(c.lr_g, c.beta1, c.beta2, c.adam_eps),
      opt_d(c.lr_d, c.beta1, c.beta2, c.adam_eps)
{
    c.validate();
    opt_g.init(g.params);
    opt_d.init(d.params);
}

StepReport train_step(TrainState& s, const Batch& batch, const Tensor<float>& z)
{
    using V = ag::Var<float>;
    StepReport out;
    ag::Tape<float> tg;
    const V fake = s.g.forward(tg, z, batch.cond);

    {
        ag::Tape<float> td;
        const V real_c = td.constant(batch.real, "real");
        const V fake_c = td.constant(fake.value(), "fake");
        const V ld = adv_d_loss(s.d.forward(td, real_c, batch.cond).logits, s.d.forward(td, fake_c, batch.cond).logits);
        out.d_loss = ld.item();
        if (!std::isfinite(out.d_loss))
            throw NumericalError("loss term 'adv_d' is not finite at step " + std::to_string(s.step));
        s.d.params.zero_grad();
        td.backward(ld);
        s.opt_d.step(s.d.params, s.step + 1);
        s.d.params.zero_grad();
    }

    std::vector<V> real_features;
    {
        ag::Tape<float> scratch;
        for (const V& f : s.d.forward(scratch, scratch.constant(batch.real), batch.cond).features)
            real_features.push_back(tg.constant(f.value(), "real_feature"));
    }
    const V real = tg.constant(batch.real, "real");
    const DiscriminatorOutput<float> df = s.d.forward(tg, fake, batch.cond);
    const LossWeights& w = s.cfg.weights;
    LossTerms<float> terms;
    terms.adv = adv_g_loss(df.logits);
    terms.mae = l_mae(real, fake);
    if (w.fl > 0.0)
        terms.fl = l_focal(real, fake, s.cfg.focal_gamma);
    if (w.fm > 0.0)
        terms.fm = l_fm(real_features, df.features);
    if (w.vgg > 0.0)
        terms.vgg = l_perceptual(real, fake, s.perceptual);
    if (w.gl > 0.0)
        terms.gl = l_gl(real, fake, s.cfg.gl_raw_cosine);
    const V total = total_g_loss(terms, w, out.g);
    s.g.params.zero_grad();
    tg.backward(total);
    s.opt_g.step(s.g.params, s.step + 1);
    s.g.params.zero_grad();
    s.d.params.zero_grad();

    ++s.step;
    const double a = s.step == 1 ? 1.0 : 0.01;
    auto mix = [a](double& acc, double v) { acc = (1.0 - a) * acc + a * v; };
    mix(s.ema.g.adv, out.g.adv);
    mix(s.ema.g.mae, out.g.mae);
    mix(s.ema.g.fl, out.g.fl);
    mix(s.ema.g.fm, out.g.fm);
    mix(s.ema.g.vgg, out.g.vgg);
    mix(s.ema.g.gl, out.g.gl);
    mix(s.ema.g.total, out.g.total);
    mix(s.ema.d_loss, out.d_loss);
    return out;
}

// ---- checkpoints ---------------------------------------------------------

namespace {

json report_json(const StepReport& r)
{
    return {{"adv", r.g.adv}, {"mae", r.g.mae}, {"fl", r.g.fl},       {"fm", r.g.fm},
            {"vgg", r.g.vgg}, {"gl", r.g.gl},   {"total", r.g.total}, {"d_loss", r.d_loss}};
}

StepReport report_from(const json& j)
{
    StepReport r;
    r.g.adv = j.at("adv").get<double>();
    r.g.mae = j.at("mae").get<double>();
    r.g.fl = j.at("fl").get<double>();
    r.g.fm = j.at("fm").get<double>();
    r.g.vgg = j.at("vgg").get<double>();
    r.g.gl = j.at("gl").get<double>();
    r.g.total = j.at("total").get<double>();
    r.d_loss = j.at("d_loss").get<double>();
    return r;
}

template <typename T>
void export_moments(const Adam<T>& opt, const ModelParams<T>& params, const std::string& prefix,
                    std::vector<NamedTensor>& out)
{
    const auto& e = params.entries();
    for (std::size_t i = 0; i < e.size(); ++i) {
        out.push_back({prefix + ".m." + e[i].first, opt.m()[i].template cast<float>()});
        out.push_back({prefix + ".v." + e[i].first, opt.v()[i].template cast<float>()});
    }
}

template <typename T>
void import_moments(Adam<T>& opt, const ModelParams<T>& params, const std::string& prefix, const Checkpoint& c)
{
    opt.init(params);
    const auto& e = params.entries();
    for (std::size_t i = 0; i < e.size(); ++i) {
        opt.m()[i] = c.at(prefix + ".m." + e[i].first).template cast<T>();
        opt.v()[i] = c.at(prefix + ".v." + e[i].first).template cast<T>();
        if (!(opt.m()[i].shape() == e[i].second.shape()) || !(opt.v()[i].shape() == e[i].second.shape()))
            throw DataError("optimizer moment shape mismatch for '" + e[i].first + "'");
    }
}

} // namespace

Checkpoint make_checkpoint(const TrainState& s)
{
    Checkpoint c;
    json h;
    h["format"] = "rfgan-checkpoint";
    h["model"] = json::parse(model_config_json(s.g.cfg, s.d.cfg));
    h["train"] = json::parse(train_config_json(s.cfg));
    h["step"] = s.step;
    h["ema"] = report_json(s.ema);
    c.config_json = h.dump(2);
    export_params(s.g.params, "", c.tensors);
    export_params(s.d.params, "", c.tensors);
    export_moments(s.opt_g, s.g.params, "optG", c.tensors);
    export_moments(s.opt_d, s.d.params, "optD", c.tensors);
    return c;
}

namespace {

json header_of(const Checkpoint& c)
{
    try {
        json h = json::parse(c.config_json);
        if (h.value("format", "") != "rfgan-checkpoint")
            throw DataError("checkpoint header has an unexpected format tag");
        return h;
    } catch (const json::exception& e) {
        throw DataError(std::string("checkpoint header: ") + e.what());
    }
}

} // namespace

Generator<float> load_generator(const Checkpoint& c)
{
    const json h = header_of(c);
    const auto [gc, dc] = parse_model_config(h.at("model").dump());
    Generator<float> g = build_generator<float>(gc, 0);
    import_params(g.params, "", c);
    return g;
}

TrainState restore_state(const Checkpoint& c)
{
    const json h = header_of(c);
    TrainConfig cfg = parse_train_config(h.at("train").dump());
    const auto [gc, dc] = parse_model_config(h.at("model").dump());
    cfg.generator = gc;
    cfg.discriminator = dc;
    TrainState s(cfg);
    import_params(s.g.params, "", c);
    import_params(s.d.params, "", c);
    import_moments(s.opt_g, s.g.params, "optG", c);
    import_moments(s.opt_d, s.d.params, "optD", c);
    s.step = h.at("step").get<long>();
    s.ema = report_from(h.at("ema"));
    return s;
}

// ---- training loop -------------------------------------------------------

std::vector<std::size_t> batch_indices(std::uint64_t seed, long step, int batch_size, std::size_t n)
{
    if (n == 0)
        throw DataError("training split is empty");
    std::vector<std::size_t> out;
    std::vector<std::size_t> perm;
    std::uint64_t perm_epoch = ~0ULL;
    for (int i = 0; i < batch_size; ++i) {
        const std::uint64_t g = static_cast<std::uint64_t>(step) * batch_size + i;
        const std::uint64_t epoch = g / n;
        if (epoch != perm_epoch) {
            perm.resize(n);
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            auto rng = stream_rng(seed, 1, epoch);
            for (std::size_t k = n - 1; k > 0; --k) {
                std::uniform_int_distribution<std::size_t> pick(0, k);
                std::swap(perm[k], perm[pick(rng)]);
            }
            perm_epoch = epoch;
        }
        out.push_back(perm[g % n]);
    }
    return out;
}

namespace {

constexpr const char* kCurveHeader = "step,adv,mae,fl,fm,vgg,gl,total,d_loss";

std::string curve_row(long step, const StepReport& r)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%ld,%.8g,%.8g,%.8g,%.8g,%.8g,%.8g,%.8g,%.8g", step, r.g.adv, r.g.mae, r.g.fl,
                  r.g.fm, r.g.vgg, r.g.gl, r.g.total, r.d_loss);
    return buf;
}

std::string ckpt_name(long step)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "ckpt-%06ld.radc", step);
    return buf;
}

// Keeps curve rows with step < `upto`.
std::string truncated_curve(const std::filesystem::path& p, long upto)
{
    std::string out = std::string(kCurveHeader) + "\n";
    if (!std::filesystem::exists(p))
        return out;
    std::istringstream in(io::read_text(p));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (std::stol(line.substr(0, line.find(','))) < upto)
            out += line + "\n";
    }
    return out;
}

} // namespace

TrainResult train(const TrainConfig& cfg_in, const std::vector<Sample>& data, const std::filesystem::path& out_dir,
                  const std::filesystem::path& resume, const ProgressFn& progress)
{
    if (data.empty())
        throw DataError("training split is empty");
    TrainConfig cfg = cfg_in;
    const auto& c0 = data.front().condition;
    if (c0.width != cfg.generator.target_resolution || c0.height != c0.width)
        throw DataError("data resolution " + std::to_string(c0.width) + "x" + std::to_string(c0.height)
                        + " does not match model resolution " + std::to_string(cfg.generator.target_resolution));
    cfg.generator.cond_channels = c0.channels();
    cfg.discriminator.cond_channels = c0.channels();
    cfg.discriminator.input_resolution = cfg.generator.target_resolution;
    cfg.validate();

    std::unique_ptr<TrainState> state;
    if (!resume.empty()) {
        state = std::make_unique<TrainState>(restore_state(load_checkpoint(resume)));
        if (state->g.cfg.cond_channels != cfg.generator.cond_channels
            || state->g.cfg.target_resolution != cfg.generator.target_resolution)
            throw DataError("resume checkpoint does not match the data layout");
        state->cfg.steps = cfg.steps;
    } else {
        state = std::make_unique<TrainState>(cfg);
    }
    TrainState& s = *state;

    std::filesystem::create_directories(out_dir);
    const auto curve_path = out_dir / "loss-curve.csv";
    std::ofstream curve;
    {
        const std::string kept = truncated_curve(curve_path, resume.empty() ? 0 : s.step);
        io::write_text(curve_path, kept);
        curve.open(curve_path, std::ios::app);
    }

    TrainResult result;
    std::filesystem::path last = out_dir / ckpt_name(s.step);
    if (resume.empty())
        save_checkpoint(last, make_checkpoint(s));

    while (s.step < cfg.steps) {
        const auto idx = batch_indices(cfg.seed, s.step, cfg.batch_size, data.size());
        std::vector<const Sample*> ptrs;
        for (std::size_t i : idx)
            ptrs.push_back(&data[i]);
        const Batch batch = make_batch(ptrs);
        auto rng = stream_rng(cfg.seed, 2, static_cast<std::uint64_t>(s.step));
        const Tensor<float> z = randn<float>({cfg.batch_size, cfg.generator.z_dim, 1, 1}, rng);
        const long at = s.step;
        const StepReport r = train_step(s, batch, z);
        if (at == 0)
            result.initial_mae = r.g.mae;
        curve << curve_row(at, r) << "\n";
        result.last = r;
        if (progress)
            progress(s.step, r);
        if (s.step % cfg.eval_interval == 0 || s.step == cfg.steps) {
            curve.flush();
            last = out_dir / ckpt_name(s.step);
            save_checkpoint(last, make_checkpoint(s));
        }
    }
    curve.flush();
    io::write_text(out_dir / "latest", last.filename().string() + "\n");
    result.final_checkpoint = last;
    return result;
}

// ---- evaluation ----------------------------------------------------------

std::vector<float> synthesize(const Generator<float>& g, const ConditioningSet& cond, std::uint64_t z_seed)
{
    if (cond.width != g.cfg.target_resolution || cond.height != g.cfg.target_resolution)
        throw DataError("condition resolution " + std::to_string(cond.width) + " does not match model resolution "
                        + std::to_string(g.cfg.target_resolution));
    if (cond.channels() != g.cfg.cond_channels)
        throw DataError("condition has " + std::to_string(cond.channels()) + " channels, model expects "
                        + std::to_string(g.cfg.cond_channels));
    auto rng = stream_rng(z_seed, 3, 0);
    const Tensor<float> z = randn<float>({1, g.cfg.z_dim, 1, 1}, rng);
    const Tensor<float> c({1, cond.channels(), cond.height, cond.width}, cond.stack());
    ag::Tape<float> tape;
    return g.forward(tape, z, c).value().values();
}

EvalResult evaluate(const Generator<float>& g, const std::vector<Sample>& test, std::uint64_t eval_seed, int z_draws)
{
    if (test.empty())
        throw DataError("test split is empty");
    EvalResult out;
    std::vector<MetricsReport> all;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const Sample& s = test[i];
        std::vector<MetricsReport> draws;
        for (int d = 0; d < z_draws; ++d) {
            const auto fake = synthesize(g, s.condition, eval_seed ^ (static_cast<std::uint64_t>(i) << 20) ^ d);
            draws.push_back(evaluate_pair<float>(s.target, fake, s.condition.width, s.condition.height));
        }
        MetricsReport m = average(draws);
        m.count = 1;
        m.psnr_capped = m.psnr_capped > 0 ? 1 : 0;
        out.rows.push_back({s.meta, m});
        all.push_back(m);
    }
    out.aggregate = average(all);
    return out;
}

EvalResult evaluate_mean_baseline(const std::vector<Sample>& train, const std::vector<Sample>& test)
{
    if (train.empty() || test.empty())
        throw DataError("baseline needs nonempty train and test splits");
    std::vector<double> acc(train.front().target.size(), 0.0);
    for (const auto& s : train) {
        if (s.target.size() != acc.size())
            throw ShapeError("training targets differ in size");
        for (std::size_t i = 0; i < acc.size(); ++i)
            acc[i] += s.target[i];
    }
    std::vector<float> mean(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i)
        mean[i] = static_cast<float>(acc[i] / static_cast<double>(train.size()));
    EvalResult out;
    std::vector<MetricsReport> all;
    for (const auto& s : test) {
        if (s.target.size() != mean.size())
            throw ShapeError("test target size differs from training targets");
        const MetricsReport m = evaluate_pair<float>(s.target, mean, s.condition.width, s.condition.height);
        out.rows.push_back({s.meta, m});
        all.push_back(m);
    }
    out.aggregate = average(all);
    return out;
}

} // namespace rfgan
