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

#include "rfgan/model.hpp"

#include "rfgan/errors.hpp"
#include "rfgan/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <random>

namespace rfgan {

namespace {

bool power_of_two(int v)
{
    return v > 0 && std::has_single_bit(static_cast<unsigned>(v));
}

int log2i(int v)
{
    return std::bit_width(static_cast<unsigned>(v)) - 1;
}

} // namespace

// ---- configs -------------------------------------------------------------

void GeneratorConfig::validate() const
{
    if (target_resolution != 16 && target_resolution != 32 && target_resolution != 64 && target_resolution != 128)
        throw ConfigError("generator.target_resolution must be one of 16, 32, 64, 128 (got "
                          + std::to_string(target_resolution) + ")");
    if (z_dim < 1)
        throw ConfigError("generator.z_dim must be >= 1");
    if (base_channels < 1 || output_channels < 1 || cond_channels < 1 || spade_hidden < 1)
        throw ConfigError("generator channel counts must be >= 1");
    if ((8 * base_channels) >> stages() < 1)
        throw ConfigError("generator.base_channels too small for " + std::to_string(stages()) + " stages");
}

int GeneratorConfig::stages() const
{
    return log2i(target_resolution / 4);
}

int GeneratorConfig::channels_at(int stage) const
{
    return std::max(1, (8 * base_channels) >> stage);
}

void DiscriminatorConfig::validate() const
{
    if (!power_of_two(input_resolution) || input_resolution < 16)
        throw ConfigError("discriminator input resolution must be a power of two >= 16 (got "
                          + std::to_string(input_resolution) + ")");
    if (base_channels < 1 || cond_channels < 1 || map_channels < 1)
        throw ConfigError("discriminator channel counts must be >= 1");
}

int DiscriminatorConfig::downsamples() const
{
    return log2i(input_resolution / 8);
}

int DiscriminatorConfig::channels_at(int layer) const
{
    return std::min(base_channels << std::min(layer, 3), 8 * base_channels);
}

// ---- params --------------------------------------------------------------

template <typename T>
ag::Var<T>& ModelParams<T>::add(const std::string& name, Tensor<T> value)
{
    if (contains(name))
        throw std::logic_error("duplicate parameter name '" + name + "'");
    entries_.emplace_back(name, ag::parameter(std::move(value), name));
    return entries_.back().second;
}

template <typename T>
const ag::Var<T>& ModelParams<T>::at(const std::string& name) const
{
    for (const auto& [n, v] : entries_)
        if (n == name)
            return v;
    throw std::out_of_range("no parameter named '" + name + "'");
}

template <typename T>
bool ModelParams<T>::contains(const std::string& name) const
{
    return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == name; });
}

template <typename T>
std::size_t ModelParams<T>::numel() const
{
    std::size_t n = 0;
    for (const auto& e : entries_)
        n += e.second.value().numel();
    return n;
}

template <typename T>
void ModelParams<T>::zero_grad()
{
    for (auto& e : entries_)
        e.second.zero_grad();
}

// ---- builders ------------------------------------------------------------

namespace {

template <typename T>
class Initializer {
public:
    Initializer(ModelParams<T>& p, std::uint64_t seed) : p_(p), rng_(seed) {}

    void conv(const std::string& name, int out, int in, int k, bool bias = true, double bias_value = 0.0)
    {
        p_.add(name + ".w", randn<T>({out, in, k, k}, rng_, 0.02));
        if (bias)
            p_.add(name + ".b", Tensor<T>({1, out, 1, 1}, T(bias_value)));
    }

    void spade(const std::string& name, int channels, int cond, int hidden)
    {
        conv(name + ".shared", hidden, cond, 3);
        conv(name + ".gamma", channels, hidden, 3, true, 1.0);
        conv(name + ".beta", channels, hidden, 3);
    }

private:
    ModelParams<T>& p_;
    std::mt19937_64 rng_;
};

template <typename T>
ag::SpadeWeights<T> spade_weights(const ModelParams<T>& p, const std::string& name)
{
    return {p.at(name + ".shared.w"), p.at(name + ".shared.b"), p.at(name + ".gamma.w"),
            p.at(name + ".gamma.b"),  p.at(name + ".beta.w"),   p.at(name + ".beta.b")};
}

std::string block(int i)
{
    return "G.blk" + std::to_string(i);
}

} // namespace

template <typename T>
Generator<T> build_generator(const GeneratorConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    Generator<T> g{cfg, {}};
    Initializer<T> init(g.params, seed);
    const int c0 = cfg.channels_at(0);
    init.conv("G.fc", c0 * 16, cfg.z_dim, 1);
    for (int i = 0; i < cfg.stages(); ++i) {
        const int cin = cfg.channels_at(i);
        const int cout = cfg.channels_at(i + 1);
        init.spade(block(i) + ".norm0", cin, cfg.cond_channels, cfg.spade_hidden);
        init.conv(block(i) + ".conv0", cout, cin, 3);
        init.spade(block(i) + ".norm1", cout, cfg.cond_channels, cfg.spade_hidden);
        init.conv(block(i) + ".conv1", cout, cout, 3);
        if (cin != cout) {
            init.spade(block(i) + ".norms", cin, cfg.cond_channels, cfg.spade_hidden);
            init.conv(block(i) + ".convs", cout, cin, 1, false);
        }
    }
    init.conv("G.out", cfg.output_channels, cfg.channels_at(cfg.stages()), 3);
    return g;
}

template <typename T>
ag::Var<T> Generator<T>::forward(ag::Tape<T>& tape, const Tensor<T>& z, const Tensor<T>& cond) const
{
    const int res = cfg.target_resolution;
    const Shape zs = z.shape();
    const Shape cs = cond.shape();
    if (zs.c != cfg.z_dim || zs.h != 1 || zs.w != 1)
        throw ShapeError("generator: z must be (N, " + std::to_string(cfg.z_dim) + ", 1, 1), got " + zs.str());
    if (cs.n != zs.n || cs.c != cfg.cond_channels || cs.h != res || cs.w != res)
        throw ShapeError("generator: condition must be (" + std::to_string(zs.n) + ", "
                         + std::to_string(cfg.cond_channels) + ", " + std::to_string(res) + ", "
                         + std::to_string(res) + "), got " + cs.str());
    const auto& p = params;
    ag::Var<T> x = ag::dense(tape.constant(z, "z"), p.at("G.fc.w"), p.at("G.fc.b"));
    x = ag::reshape(x, {zs.n, cfg.channels_at(0), 4, 4});
    for (int i = 0; i < cfg.stages(); ++i) {
        const int r = 4 << i;
        const ag::Var<T> c = tape.constant(avg_pool(cond, res / r), "cond" + std::to_string(r));
        const std::string b = block(i);
        ag::Var<T> h = ag::relu(ag::spade_norm(x, c, spade_weights(p, b + ".norm0")));
        h = ag::conv2d(h, p.at(b + ".conv0.w"), p.at(b + ".conv0.b"), 1, 1);
        h = ag::relu(ag::spade_norm(h, c, spade_weights(p, b + ".norm1")));
        h = ag::conv2d(h, p.at(b + ".conv1.w"), p.at(b + ".conv1.b"), 1, 1);
        ag::Var<T> skip = x;
        if (p.contains(b + ".convs.w"))
            skip = ag::conv2d(ag::spade_norm(x, c, spade_weights(p, b + ".norms")), p.at(b + ".convs.w"),
                              ag::Var<T>{}, 1, 0);
        x = ag::upsample_nearest_x2(ag::add(skip, h));
    }
    return ag::sigmoid(ag::conv2d(x, p.at("G.out.w"), p.at("G.out.b"), 1, 1));
}

template <typename T>
Discriminator<T> build_discriminator(const DiscriminatorConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    Discriminator<T> d{cfg, {}};
    Initializer<T> init(d.params, seed);
    int cin = cfg.in_channels();
    for (int i = 0; i < cfg.downsamples(); ++i) {
        init.conv("D.down" + std::to_string(i), cfg.channels_at(i), cin, 4);
        cin = cfg.channels_at(i);
    }
    const int cmid = cfg.channels_at(cfg.downsamples());
    init.conv("D.mid", cmid, cin, 4);
    init.conv("D.out", 1, cmid, 1);
    return d;
}

template <typename T>
DiscriminatorOutput<T> Discriminator<T>::forward(ag::Tape<T>& tape, const ag::Var<T>& map,
                                                 const Tensor<T>& cond) const
{
    const int res = cfg.input_resolution;
    const Shape ms = map.shape();
    const Shape cs = cond.shape();
    if (ms.c != cfg.map_channels || ms.h != res || ms.w != res)
        throw ShapeError("discriminator: map must be (N, " + std::to_string(cfg.map_channels) + ", "
                         + std::to_string(res) + ", " + std::to_string(res) + "), got " + ms.str());
    if (cs.n != ms.n || cs.c != cfg.cond_channels || cs.h != res || cs.w != res)
        throw ShapeError("discriminator: condition " + cs.str() + " does not match map " + ms.str());
    const auto& p = params;
    DiscriminatorOutput<T> out;
    ag::Var<T> x = ag::concat_channels<T>({tape.constant(cond, "cond"), map});
    for (int i = 0; i < cfg.downsamples(); ++i) {
        const std::string n = "D.down" + std::to_string(i);
        x = ag::lrelu(ag::instance_norm(ag::conv2d(x, p.at(n + ".w"), p.at(n + ".b"), 2, 1)), 0.2);
        out.features.push_back(x);
    }
    x = ag::lrelu(ag::instance_norm(ag::conv2d(x, p.at("D.mid.w"), p.at("D.mid.b"), 1, 0)), 0.2);
    out.features.push_back(x);
    out.logits = ag::conv2d(x, p.at("D.out.w"), p.at("D.out.b"), 1, 0);
    return out;
}

// ---- checkpoint ------------------------------------------------------------

const NamedTensor* Checkpoint::find(const std::string& name) const
{
    for (const auto& t : tensors)
        if (t.name == name)
            return &t;
    return nullptr;
}

const Tensor<float>& Checkpoint::at(const std::string& name) const
{
    if (const auto* t = find(name))
        return t->value;
    throw DataError("checkpoint has no tensor '" + name + "'");
}

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt)
{
    io::ByteWriter w;
    w.bytes("RADC");
    w.u32(kCheckpointVersion);
    w.str(ckpt.config_json);
    w.u32(static_cast<std::uint32_t>(ckpt.tensors.size()));
    for (const auto& t : ckpt.tensors) {
        w.str(t.name);
        const Shape s = t.value.shape();
        for (int d : {s.n, s.c, s.h, s.w})
            w.u32(static_cast<std::uint32_t>(d));
        w.f32s(t.value.span());
    }
    w.u64(io::fnv1a(w.data()));
    return w.data();
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < 16)
        throw DataError("checkpoint truncated");
    const auto body = bytes.first(bytes.size() - 8);
    io::ByteReader tail(bytes.last(8));
    if (tail.u64() != io::fnv1a(body))
        throw DataError("checkpoint checksum mismatch");
    io::ByteReader r(body);
    if (r.bytes(4) != "RADC")
        throw DataError("not a checkpoint file (bad magic)");
    if (const auto v = r.u32(); v != kCheckpointVersion)
        throw DataError("unsupported checkpoint version " + std::to_string(v));
    Checkpoint c;
    c.config_json = r.str();
    const std::uint32_t count = r.u32();
    for (std::uint32_t i = 0; i < count; ++i) {
        NamedTensor t;
        t.name = r.str();
        Shape s;
        s.n = static_cast<int>(r.u32());
        s.c = static_cast<int>(r.u32());
        s.h = static_cast<int>(r.u32());
        s.w = static_cast<int>(r.u32());
        t.value = Tensor<float>(s);
        r.f32s(t.value.span());
        c.tensors.push_back(std::move(t));
    }
    if (!r.at_end())
        throw DataError("trailing bytes in checkpoint");
    return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt)
{
    io::write_file(path, encode_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path)
{
    return decode_checkpoint(io::read_file(path));
}

template <typename T>
void export_params(const ModelParams<T>& params, const std::string& prefix, std::vector<NamedTensor>& out)
{
    for (const auto& [name, v] : params.entries())
        out.push_back({prefix + name, v.value().template cast<float>()});
}

template <typename T>
void import_params(ModelParams<T>& params, const std::string& prefix, const Checkpoint& ckpt)
{
    for (auto& [name, v] : params.entries()) {
        const Tensor<float>& t = ckpt.at(prefix + name);
        if (!(t.shape() == v.shape()))
            throw DataError("checkpoint tensor '" + prefix + name + "' has shape " + t.shape().str() + ", model expects "
                            + v.shape().str());
        if (!all_finite(t))
            throw NumericalError("checkpoint tensor '" + prefix + name + "' is not finite");
        v.mutable_value() = t.template cast<T>();
    }
}

std::string model_config_json(const GeneratorConfig& g, const DiscriminatorConfig& d)
{
    nlohmann::json j;
    j["generator"] = {{"z_dim", g.z_dim},
                      {"base_channels", g.base_channels},
                      {"target_resolution", g.target_resolution},
                      {"output_channels", g.output_channels},
                      {"cond_channels", g.cond_channels},
                      {"spade_hidden", g.spade_hidden}};
    j["discriminator"] = {{"base_channels", d.base_channels},
                          {"cond_channels", d.cond_channels},
                          {"map_channels", d.map_channels},
                          {"input_resolution", d.input_resolution}};
    return j.dump(2);
}

std::pair<GeneratorConfig, DiscriminatorConfig> parse_model_config(const std::string& json_text)
{
    GeneratorConfig g;
    DiscriminatorConfig d;
    try {
        const auto j = nlohmann::json::parse(json_text);
        const auto& jg = j.at("generator");
        g.z_dim = jg.at("z_dim").get<int>();
        g.base_channels = jg.at("base_channels").get<int>();
        g.target_resolution = jg.at("target_resolution").get<int>();
        g.output_channels = jg.at("output_channels").get<int>();
        g.cond_channels = jg.at("cond_channels").get<int>();
        g.spade_hidden = jg.at("spade_hidden").get<int>();
        const auto& jd = j.at("discriminator");
        d.base_channels = jd.at("base_channels").get<int>();
        d.cond_channels = jd.at("cond_channels").get<int>();
        d.map_channels = jd.at("map_channels").get<int>();
        d.input_resolution = jd.at("input_resolution").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model config: ") + e.what());
    }
    g.validate();
    d.validate();
    return {g, d};
}

#define RFGAN_INSTANTIATE(T)                                                                                           \
    template class ModelParams<T>;                                                                                     \
    template struct Generator<T>;                                                                                      \
    template struct Discriminator<T>;                                                                                  \
    template Generator<T> build_generator<T>(const GeneratorConfig&, std::uint64_t);                                   \
    template Discriminator<T> build_discriminator<T>(const DiscriminatorConfig&, std::uint64_t);                       \
    template void export_params<T>(const ModelParams<T>&, const std::string&, std::vector<NamedTensor>&);              \
    template void import_params<T>(ModelParams<T>&, const std::string&, const Checkpoint&);

RFGAN_INSTANTIATE(float)
RFGAN_INSTANTIATE(double)

#undef RFGAN_INSTANTIATE

} // namespace rfgan
