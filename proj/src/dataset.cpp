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

#include "rfgan/dataset.hpp"

#include "rfgan/errors.hpp"
#include "rfgan/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace rfgan {

using nlohmann::json;

// ---- frequency code ------------------------------------------------------

std::vector<float> FrequencyCode::one_hot() const
{
    std::vector<float> v(catalog.size(), 0.0f);
    v[static_cast<std::size_t>(index)] = 1.0f;
    return v;
}

std::vector<double> default_catalog()
{
    return {5e9, 28e9, 70e9};
}

namespace {

std::string ghz_list(std::span<const double> catalog)
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < catalog.size(); ++i)
        os << (i ? ", " : "") << catalog[i] / 1e9;
    os << "] GHz";
    return os.str();
}

bool same_freq(double a, double b)
{
    return std::abs(a - b) <= 1e-6 * std::max(std::abs(a), std::abs(b));
}

} // namespace

FrequencyCode encode_frequency(double freq_hz, std::span<const double> catalog)
{
    for (std::size_t i = 0; i < catalog.size(); ++i)
        if (same_freq(catalog[i], freq_hz))
            return {{catalog.begin(), catalog.end()}, static_cast<int>(i)};
    std::ostringstream os;
    os << "frequency " << freq_hz / 1e9 << " GHz not in catalog " << ghz_list(catalog);
    throw ConfigError(os.str());
}

// ---- normalization -------------------------------------------------------

double normalize_rss(double dbm, const NormRange& range)
{
    if (std::isnan(dbm))
        throw NumericalError("normalize_rss: NaN received power");
    if (dbm == -std::numeric_limits<double>::infinity())
        return 0.0;
    return std::clamp((dbm - range.min_dbm) / (range.max_dbm - range.min_dbm), 0.0, 1.0);
}

double denormalize_rss(double value, const NormRange& range)
{
    return range.min_dbm + value * (range.max_dbm - range.min_dbm);
}

std::vector<float> normalize_rss(const RfMap& map)
{
    if (!(map.min_dbm < map.max_dbm))
        throw ConfigError("normalization range must satisfy min < max");
    const NormRange r{map.min_dbm, map.max_dbm};
    std::vector<float> out(map.rss_dbm.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<float>(normalize_rss(map.rss_dbm[i], r));
    return out;
}

RfMap denormalize_rss(std::span<const float> values, int width, int height, const NormRange& range)
{
    if (values.size() != static_cast<std::size_t>(width) * height)
        throw ShapeError("denormalize_rss: value count does not match map size");
    RfMap m;
    m.width = width;
    m.height = height;
    m.min_dbm = range.min_dbm;
    m.max_dbm = range.max_dbm;
    m.rss_dbm.reserve(values.size());
    for (float v : values)
        m.rss_dbm.push_back(denormalize_rss(v, range));
    return m;
}

// ---- conditioning --------------------------------------------------------

std::vector<float> ConditioningSet::stack() const
{
    const std::size_t hw = static_cast<std::size_t>(width) * height;
    std::vector<float> out;
    out.reserve(static_cast<std::size_t>(channels()) * hw);
    out.insert(out.end(), semantic.begin(), semantic.end());
    out.insert(out.end(), pattern.begin(), pattern.end());
    for (float f : freq.one_hot())
        out.insert(out.end(), hw, f);
    return out;
}

ConditioningSet assemble_condition(const SemanticMap& semantic, const PatternRaster& pattern, FrequencyCode freq)
{
    if (semantic.width != pattern.width || semantic.height != pattern.height) {
        std::ostringstream os;
        os << "condition dimension mismatch: semantic " << semantic.width << "x" << semantic.height << " vs pattern "
           << pattern.width << "x" << pattern.height;
        throw ShapeError(os.str());
    }
    if (freq.catalog.empty())
        throw ConfigError("frequency catalog is empty");
    ConditioningSet c;
    c.width = semantic.width;
    c.height = semantic.height;
    c.semantic = semantic.channels();
    c.pattern.assign(pattern.gain.begin(), pattern.gain.end());
    c.freq = std::move(freq);
    return c;
}

// ---- sweep config --------------------------------------------------------

void SweepConfig::validate() const
{
    if (rooms.empty())
        throw ConfigError("sweep.rooms: must not be empty");
    if (frequencies.empty())
        throw ConfigError("sweep.frequencies_ghz: must not be empty");
    for (double f : frequencies)
        encode_frequency(f, catalog);
    if (upas.empty())
        throw ConfigError("sweep.upas: must not be empty");
    for (const auto& u : upas)
        if (u[0] < 1 || u[1] < 1)
            throw ConfigError("sweep.upas: dimensions must be >= 1");
    if (bs_stride < 1)
        throw ConfigError("sweep.bs_stride: must be >= 1");
    if (grid < 8)
        throw ConfigError("sweep.grid: must be >= 8");
    if (max_reflections < 0 || max_reflections > 2)
        throw ConfigError("sweep.max_reflections: must be 0, 1 or 2");
    if (shard_size < 1)
        throw ConfigError("sweep.shard_size: must be >= 1");
    if (!std::isfinite(tx_power_dbm))
        throw ConfigError("sweep.tx_power_dbm: must be finite");
}

namespace {

template <typename V>
V get_field(const json& j, const std::string& key)
{
    try {
        return j.at(key).get<V>();
    } catch (const json::exception& e) {
        throw ConfigError("sweep." + key + ": " + e.what());
    }
}

std::vector<std::array<int, 2>> int_pairs(const json& j, const std::string& key)
{
    std::vector<std::array<int, 2>> out;
    const json& a = j.at(key);
    if (!a.is_array())
        throw ConfigError("sweep." + key + ": expected an array of [a, b] pairs");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_array() || a[i].size() != 2 || !a[i][0].is_number_integer() || !a[i][1].is_number_integer())
            throw ConfigError("sweep." + key + "[" + std::to_string(i) + "]: expected [a, b] integers");
        out.push_back({a[i][0].get<int>(), a[i][1].get<int>()});
    }
    return out;
}

std::vector<double> ghz_array(const json& j, const std::string& key)
{
    auto v = get_field<std::vector<double>>(j, key);
    for (double& f : v)
        f *= 1e9;
    return v;
}

json layout_json(const RoomLayout& l)
{
    json j;
    j["name"] = l.name;
    j["shape"] = l.shape == RoomLayout::Shape::rectangle ? "rectangle" : "l_shape";
    j["dimensions_m"] = {l.width, l.depth};
    j["notch_m"] = {l.notch_width, l.notch_depth};
    j["wall_height"] = l.wall_height;
    json walls = json::array();
    for (const auto& p : l.partitions)
        walls.push_back({{p[0].x, p[0].y}, {p[1].x, p[1].y}});
    j["walls"] = walls;
    j["materials"] = {{"wall", l.wall_material.name}, {"floor", l.floor_material.name}};
    j["bs"] = {{"x", l.bs.x}, {"y", l.bs.y}, {"z", l.bs.z}};
    j["rx_height"] = l.rx_height;
    return j;
}

} // namespace

SweepConfig parse_sweep_config(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("sweep config: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("sweep config: expected a JSON object");
    static const std::set<std::string> known{"rooms",    "frequencies_ghz", "catalog_ghz",     "upas",
                                             "bs_stride", "bs_cells",       "grid",            "max_reflections",
                                             "tx_power_dbm", "bs_height",   "seed",            "shard_size"};
    for (const auto& [k, _] : j.items())
        if (!known.contains(k))
            throw ConfigError("sweep config: unknown field '" + k + "'");
    for (const char* req : {"rooms", "frequencies_ghz"})
        if (!j.contains(req))
            throw ConfigError(std::string("sweep.") + req + ": missing required field");

    SweepConfig c;
    const json& rooms = j["rooms"];
    if (!rooms.is_array())
        throw ConfigError("sweep.rooms: expected an array");
    for (std::size_t i = 0; i < rooms.size(); ++i) {
        if (rooms[i].is_string()) {
            const auto id = rooms[i].get<std::string>();
            preset_layout(id); // validates the id
            c.rooms.emplace_back(id);
        } else if (rooms[i].is_object()) {
            try {
                c.rooms.emplace_back(parse_scene_descriptor(rooms[i].dump()).layout);
            } catch (const ConfigError& e) {
                throw ConfigError("sweep.rooms[" + std::to_string(i) + "]: " + e.what());
            }
        } else {
            throw ConfigError("sweep.rooms[" + std::to_string(i) + "]: expected a preset id or a scene object");
        }
    }
    c.frequencies = ghz_array(j, "frequencies_ghz");
    if (j.contains("catalog_ghz"))
        c.catalog = ghz_array(j, "catalog_ghz");
    if (j.contains("upas"))
        c.upas = int_pairs(j, "upas");
    if (j.contains("bs_stride"))
        c.bs_stride = get_field<int>(j, "bs_stride");
    if (j.contains("bs_cells"))
        c.bs_cells = int_pairs(j, "bs_cells");
    if (j.contains("grid"))
        c.grid = get_field<int>(j, "grid");
    if (j.contains("max_reflections"))
        c.max_reflections = get_field<int>(j, "max_reflections");
    if (j.contains("tx_power_dbm"))
        c.tx_power_dbm = get_field<double>(j, "tx_power_dbm");
    if (j.contains("bs_height"))
        c.bs_height = get_field<double>(j, "bs_height");
    if (j.contains("seed"))
        c.seed = get_field<std::uint64_t>(j, "seed");
    if (j.contains("shard_size"))
        c.shard_size = get_field<int>(j, "shard_size");
    c.validate();
    return c;
}

std::string sweep_config_json(const SweepConfig& cfg)
{
    json j;
    json rooms = json::array();
    for (const auto& r : cfg.rooms) {
        if (const auto* id = std::get_if<std::string>(&r))
            rooms.push_back(*id);
        else
            rooms.push_back(layout_json(std::get<RoomLayout>(r)));
    }
    j["rooms"] = rooms;
    json f = json::array();
    for (double v : cfg.frequencies)
        f.push_back(v / 1e9);
    j["frequencies_ghz"] = f;
    json cat = json::array();
    for (double v : cfg.catalog)
        cat.push_back(v / 1e9);
    j["catalog_ghz"] = cat;
    j["upas"] = cfg.upas;
    j["bs_stride"] = cfg.bs_stride;
    if (!cfg.bs_cells.empty())
        j["bs_cells"] = cfg.bs_cells;
    j["grid"] = cfg.grid;
    j["max_reflections"] = cfg.max_reflections;
    j["tx_power_dbm"] = cfg.tx_power_dbm;
    j["bs_height"] = cfg.bs_height;
    j["seed"] = cfg.seed;
    j["shard_size"] = cfg.shard_size;
    return j.dump(2);
}

namespace {

RoomLayout resolve_room(const std::variant<std::string, RoomLayout>& r)
{
    if (const auto* id = std::get_if<std::string>(&r))
        return preset_layout(*id);
    return std::get<RoomLayout>(r);
}

} // namespace

std::vector<std::array<int, 2>> bs_positions(const RoomLayout& layout, const SweepConfig& cfg)
{
    const Scene scene = build_room(layout);
    const GridSpec grid = GridSpec::for_bounds(scene.bounds, cfg.grid, cfg.grid);
    auto feasible = [&](int u, int v) {
        return u >= 0 && v >= 0 && u < grid.nx && v < grid.ny && scene.walkable(grid.cell_center(scene.bounds, u, v))
               && !cell_has_wall(scene, grid, u, v);
    };
    std::vector<std::array<int, 2>> out;
    if (!cfg.bs_cells.empty()) {
        for (const auto& c : cfg.bs_cells) {
            if (!feasible(c[0], c[1]))
                throw ConfigError("room '" + layout.name + "': BS cell (" + std::to_string(c[0]) + ", "
                                  + std::to_string(c[1]) + ") is not a walkable floor cell");
            out.push_back(c);
        }
        return out;
    }
    const int off = cfg.bs_stride / 2;
    for (int v = off; v < grid.ny; v += cfg.bs_stride)
        for (int u = off; u < grid.nx; u += cfg.bs_stride)
            if (feasible(u, v))
                out.push_back({u, v});
    return out;
}

Sample make_sample(const RoomLayout& layout, std::array<int, 2> bs_cell, std::array<int, 2> upa, double freq_hz,
                   const SweepConfig& cfg)
{
    RoomLayout l = layout;
    const GridSpec grid = GridSpec::for_bounds({0.0, 0.0, l.width, l.depth}, cfg.grid, cfg.grid);
    const Vec2 c = grid.cell_center({0.0, 0.0, l.width, l.depth}, bs_cell[0], bs_cell[1]);
    l.bs = {c.x, c.y, cfg.bs_height};
    const Scene scene = build_room(l);

    UpaConfig antenna;
    antenna.rows = upa[0];
    antenna.cols = upa[1];
    antenna.carrier_freq = freq_hz;

    TraceOptions opts;
    opts.max_reflections = cfg.max_reflections;
    opts.tx_power_dbm = cfg.tx_power_dbm;
    opts.threads = 1;
    const RfMap map = generate_rf_map(scene, antenna, freq_hz, grid, opts);

    Sample s;
    s.condition = assemble_condition(rasterize_semantic(scene, grid), rasterize_pattern(antenna, grid),
                                     encode_frequency(freq_hz, cfg.catalog));
    s.target = normalize_rss(map);
    s.meta = {l.name, bs_cell, upa, s.condition.freq.frequency()};
    return s;
}

// ---- shards --------------------------------------------------------------

namespace {

constexpr std::size_t kShardHeaderBytes = 28;

std::size_t record_floats(int k, int hw)
{
    return static_cast<std::size_t>(k) + 5 * static_cast<std::size_t>(hw);
}

void encode_record(io::ByteWriter& w, const Sample& s)
{
    w.f32s(s.condition.freq.one_hot());
    w.f32s(s.condition.semantic);
    w.f32s(s.condition.pattern);
    w.f32s(s.target);
}

std::uint64_t record_hash(const Sample& s)
{
    io::ByteWriter w;
    encode_record(w, s);
    return io::fnv1a(w.data());
}

} // namespace

std::vector<std::uint8_t> encode_shard(std::span<const Sample> samples)
{
    if (samples.empty())
        throw DataError("cannot encode an empty shard");
    const auto& c0 = samples.front().condition;
    io::ByteWriter w;
    w.bytes("RADS");
    w.u32(kShardVersion);
    w.u32(static_cast<std::uint32_t>(samples.size()));
    w.u32(static_cast<std::uint32_t>(c0.height));
    w.u32(static_cast<std::uint32_t>(c0.width));
    w.u32(static_cast<std::uint32_t>(c0.freq.k()));
    w.u32(kChannelLayoutV1);
    const std::size_t hw = static_cast<std::size_t>(c0.width) * c0.height;
    for (const Sample& s : samples) {
        const auto& c = s.condition;
        if (c.width != c0.width || c.height != c0.height || c.freq.k() != c0.freq.k() || s.target.size() != hw
            || c.semantic.size() != 3 * hw || c.pattern.size() != hw)
            throw ShapeError("shard samples must share dimensions and catalog size");
        encode_record(w, s);
    }
    return w.data();
}

namespace {

struct ShardHeader {
    std::uint32_t count, height, width, k;
};

ShardHeader read_header(io::ByteReader& r)
{
    if (r.bytes(4) != "RADS")
        throw DataError("not a shard file (bad magic)");
    if (const auto v = r.u32(); v != kShardVersion)
        throw DataError("unsupported shard version " + std::to_string(v));
    ShardHeader h{};
    h.count = r.u32();
    h.height = r.u32();
    h.width = r.u32();
    h.k = r.u32();
    if (const auto layout = r.u32(); layout != kChannelLayoutV1)
        throw DataError("unsupported shard channel layout " + std::to_string(layout));
    return h;
}

Sample decode_record(io::ByteReader& r, const ShardHeader& h, std::span<const double> catalog)
{
    const std::size_t hw = static_cast<std::size_t>(h.width) * h.height;
    Sample s;
    std::vector<float> onehot(h.k);
    r.f32s(onehot);
    s.condition.width = static_cast<int>(h.width);
    s.condition.height = static_cast<int>(h.height);
    s.condition.semantic.resize(3 * hw);
    r.f32s(s.condition.semantic);
    s.condition.pattern.resize(hw);
    r.f32s(s.condition.pattern);
    s.target.resize(hw);
    r.f32s(s.target);
    const auto hot = std::find(onehot.begin(), onehot.end(), 1.0f);
    if (hot == onehot.end() || std::count(onehot.begin(), onehot.end(), 0.0f) != static_cast<long>(h.k) - 1)
        throw DataError("shard record has an invalid one-hot frequency code");
    s.condition.freq.index = static_cast<int>(hot - onehot.begin());
    if (catalog.size() == h.k)
        s.condition.freq.catalog.assign(catalog.begin(), catalog.end());
    else
        s.condition.freq.catalog.assign(h.k, 0.0);
    s.meta.freq_hz = s.condition.freq.catalog[static_cast<std::size_t>(s.condition.freq.index)];
    return s;
}

} // namespace

std::vector<Sample> decode_shard(std::span<const std::uint8_t> bytes)
{
    io::ByteReader r(bytes);
    const ShardHeader h = read_header(r);
    std::vector<Sample> out;
    out.reserve(h.count);
    for (std::uint32_t i = 0; i < h.count; ++i)
        out.push_back(decode_record(r, h, {}));
    if (!r.at_end())
        throw DataError("trailing bytes after last shard record");
    return out;
}

// ---- manifest ------------------------------------------------------------

std::string Manifest::to_json() const
{
    json j;
    j["format"] = "rfgan-manifest";
    j["version"] = 1;
    j["grid"] = {{"nx", width}, {"ny", height}, {"cell_size", cell_size}};
    j["catalog_hz"] = catalog;
    j["norm_range_dbm"] = {norm.min_dbm, norm.max_dbm};
    j["max_reflections"] = max_reflections;
    j["seed"] = seed;
    j["config"] = config_json.empty() ? json::object() : json::parse(config_json);
    json sh = json::array();
    for (const auto& s : shards)
        sh.push_back({{"file", s.file}, {"count", s.count}, {"hash", s.hash}});
    j["shards"] = sh;
    json ss = json::array();
    for (const auto& e : samples)
        ss.push_back({{"index", e.index},
                      {"room", e.meta.room},
                      {"bs_cell", e.meta.bs_cell},
                      {"upa", e.meta.upa},
                      {"freq_hz", e.meta.freq_hz},
                      {"shard", e.shard},
                      {"offset", e.offset},
                      {"hash", e.hash}});
    j["samples"] = ss;
    return j.dump(1) + "\n";
}

Manifest Manifest::from_json(const std::string& text)
{
    Manifest m;
    try {
        const json j = json::parse(text);
        if (j.at("format").get<std::string>() != "rfgan-manifest")
            throw DataError("manifest: unexpected format tag");
        m.width = j.at("grid").at("nx").get<int>();
        m.height = j.at("grid").at("ny").get<int>();
        m.cell_size = j.at("grid").at("cell_size").get<double>();
        m.catalog = j.at("catalog_hz").get<std::vector<double>>();
        m.norm.min_dbm = j.at("norm_range_dbm").at(0).get<double>();
        m.norm.max_dbm = j.at("norm_range_dbm").at(1).get<double>();
        m.max_reflections = j.at("max_reflections").get<int>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.config_json = j.at("config").dump(2);
        for (const auto& s : j.at("shards"))
            m.shards.push_back({s.at("file").get<std::string>(), s.at("count").get<std::size_t>(),
                                s.at("hash").get<std::string>()});
        for (const auto& s : j.at("samples")) {
            ManifestEntry e;
            e.index = s.at("index").get<std::size_t>();
            e.meta.room = s.at("room").get<std::string>();
            e.meta.bs_cell = s.at("bs_cell").get<std::array<int, 2>>();
            e.meta.upa = s.at("upa").get<std::array<int, 2>>();
            e.meta.freq_hz = s.at("freq_hz").get<double>();
            e.shard = s.at("shard").get<std::string>();
            e.offset = s.at("offset").get<std::uint64_t>();
            e.hash = s.at("hash").get<std::string>();
            m.samples.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("manifest: ") + e.what());
    }
    return m;
}

std::string Manifest::hash() const
{
    return io::hex64(io::fnv1a(to_json()));
}

Manifest run_sweep(const SweepConfig& cfg, const std::filesystem::path& out_dir, unsigned threads)
{
    cfg.validate();
    struct Job {
        RoomLayout layout;
        std::array<int, 2> cell;
        std::array<int, 2> upa;
        double freq;
    };
    std::vector<Job> jobs;
    for (const auto& r : cfg.rooms) {
        const RoomLayout layout = resolve_room(r);
        const auto cells = bs_positions(layout, cfg);
        if (cells.empty())
            throw ConfigError("room '" + layout.name + "': no feasible BS position at stride "
                              + std::to_string(cfg.bs_stride));
        for (double f : cfg.frequencies)
            for (const auto& upa : cfg.upas)
                for (const auto& cell : cells)
                    jobs.push_back({layout, cell, upa, f});
    }

    std::vector<Sample> samples(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                const Job& j = jobs[i];
                samples[i] = make_sample(j.layout, j.cell, j.upa, j.freq, cfg);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure)
                    failure = std::current_exception();
                next = jobs.size();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads ? threads : io::worker_count(),
                                                      static_cast<unsigned>(jobs.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    std::filesystem::create_directories(out_dir);
    Manifest m;
    m.width = cfg.grid;
    m.height = cfg.grid;
    m.cell_size = samples.empty() ? 0.0 : 10.0 / cfg.grid;
    if (!jobs.empty())
        m.cell_size = jobs.front().layout.width / cfg.grid;
    m.catalog = cfg.catalog;
    m.max_reflections = cfg.max_reflections;
    m.seed = cfg.seed;
    m.config_json = sweep_config_json(cfg);

    const std::size_t per = static_cast<std::size_t>(cfg.shard_size);
    const std::size_t rec_bytes = 4 * record_floats(static_cast<int>(cfg.catalog.size()), cfg.grid * cfg.grid);
    for (std::size_t begin = 0, shard = 0; begin < samples.size(); begin += per, ++shard) {
        const std::size_t end = std::min(samples.size(), begin + per);
        std::ostringstream name;
        name << "shard-" << std::setw(5) << std::setfill('0') << shard << ".rads";
        const auto bytes = encode_shard({samples.data() + begin, end - begin});
        io::write_file(out_dir / name.str(), bytes);
        m.shards.push_back({name.str(), end - begin, io::hex64(io::fnv1a(bytes))});
        for (std::size_t i = begin; i < end; ++i)
            m.samples.push_back({i, samples[i].meta, name.str(), kShardHeaderBytes + (i - begin) * rec_bytes,
                                 io::hex64(record_hash(samples[i]))});
    }
    io::write_text(out_dir / kManifestFile, m.to_json());
    return m;
}

Manifest read_manifest(const std::filesystem::path& dir)
{
    return Manifest::from_json(io::read_text(dir / kManifestFile));
}

std::vector<Sample> load_samples(const Manifest& m, const std::filesystem::path& dir,
                                 std::span<const std::size_t> indices)
{
    std::map<std::string, std::vector<std::uint8_t>> cache;
    std::vector<Sample> out;
    out.reserve(indices.size());
    for (std::size_t idx : indices) {
        if (idx >= m.samples.size())
            throw DataError("sample index " + std::to_string(idx) + " out of range");
        const ManifestEntry& e = m.samples[idx];
        auto it = cache.find(e.shard);
        if (it == cache.end())
            it = cache.emplace(e.shard, io::read_file(dir / e.shard)).first;
        io::ByteReader r(it->second);
        const ShardHeader h = read_header(r);
        if (static_cast<int>(h.width) != m.width || static_cast<int>(h.height) != m.height
            || h.k != m.catalog.size())
            throw DataError("shard " + e.shard + " dimensions disagree with the manifest");
        r.seek(e.offset);
        Sample s = decode_record(r, h, m.catalog);
        s.meta = e.meta;
        if (io::hex64(record_hash(s)) != e.hash)
            throw DataError("sample " + std::to_string(idx) + " content hash mismatch in " + e.shard);
        if (!same_freq(s.condition.freq.frequency(), e.meta.freq_hz))
            throw DataError("sample " + std::to_string(idx) + " frequency code disagrees with metadata");
        out.push_back(std::move(s));
    }
    return out;
}

// ---- task splits ---------------------------------------------------------

TaskSplit split_tasks(const Manifest& m, int task)
{
    TaskSplit split;
    auto is_upa = [](const SampleMeta& s, int n) { return s.upa[0] == n && s.upa[1] == n; };
    std::set<std::string> seen;
    if (task == 1) {
        const std::set<std::string> train_rooms{"room1", "room2", "room3", "room4"};
        for (const auto& e : m.samples) {
            if (!is_upa(e.meta, 4))
                continue;
            if (train_rooms.contains(e.meta.room)) {
                split.train.push_back(e.index);
                seen.insert(e.meta.room);
            } else if (e.meta.room == "lshape") {
                split.test.push_back(e.index);
                seen.insert(e.meta.room);
            }
        }
        for (const char* r : {"room1", "room2", "room3", "room4", "lshape"})
            if (!seen.contains(r))
                throw DataError(std::string("task 1 needs 4x4 UPA samples for '") + r + "', none in manifest");
    } else if (task == 2) {
        for (const auto& e : m.samples) {
            if (e.meta.room != "room1" || !same_freq(e.meta.freq_hz, 28e9))
                continue;
            for (int n : {4, 6, 8, 12})
                if (is_upa(e.meta, n)) {
                    split.train.push_back(e.index);
                    seen.insert(std::to_string(n));
                }
            if (is_upa(e.meta, 10)) {
                split.test.push_back(e.index);
                seen.insert("10");
            }
        }
        for (const char* n : {"4", "6", "8", "12", "10"})
            if (!seen.contains(n))
                throw DataError(std::string("task 2 needs room1 28 GHz samples with a ") + n + "x" + n
                                + " UPA, none in manifest");
    } else {
        throw ConfigError("task must be 1 or 2");
    }
    std::vector<std::size_t> inter;
    std::set_intersection(split.train.begin(), split.train.end(), split.test.begin(), split.test.end(),
                          std::back_inserter(inter));
    if (!inter.empty())
        throw DataError("train and test splits overlap");
    return split;
}

} // namespace rfgan
