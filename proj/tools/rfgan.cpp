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
#include "rfgan/losses.hpp"
#include "rfgan/metrics.hpp"
#include "rfgan/model.hpp"
#include "rfgan/render.hpp"
#include "rfgan/trainer.hpp"

#include "suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <regex>

namespace {

using namespace rfgan;
using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

// Published full-scale results (MAE, RMSE, PSNR dB, MS-SSIM): task 1, task 2,
// and their average. Reference ceilings only.
constexpr std::array<std::array<double, 4>, 3> kReference{
    {{0.06, 0.23, 12.81, 0.91}, {0.13, 0.36, 8.75, 0.70}, {0.09, 0.29, 10.78, 0.80}}};

void echo(const std::string& command, const json& resolved)
{
    std::cout << "config " << command << " " << resolved.dump() << "\n";
}

std::array<int, 2> parse_upa(const std::string& s)
{
    static const std::regex re(R"((\d+)\s*[xX]\s*(\d+))");
    std::smatch m;
    if (!std::regex_match(s, m, re))
        throw ConfigError("--upa must look like RxC, got '" + s + "'");
    return {std::stoi(m[1]), std::stoi(m[2])};
}

std::vector<Sample> load_split(const Manifest& m, const fs::path& dir, const std::vector<std::size_t>& idx)
{
    return load_samples(m, dir, idx);
}

std::string metrics_line(const char* label, const MetricsReport& r)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-10s %8.4f %8.4f %9.3f %8.4f", label, r.mae, r.rmse, r.psnr_db, r.ms_ssim);
    return buf;
}

// ---- gen-dataset ------------------------------------------------------------

struct GenArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
};

int run_gen(const GenArgs& a)
{
    SweepConfig cfg = parse_sweep_config(io::read_text(a.config));
    if (a.seed)
        cfg.seed = *a.seed;
    cfg.validate();
    echo("gen-dataset", {{"out", a.out}, {"sweep", json::parse(sweep_config_json(cfg))}});
    const Manifest m = run_sweep(cfg, a.out, a.threads);
    std::cout << "samples " << m.samples.size() << "\n";
    std::cout << "manifest_hash " << m.hash() << "\n";
    return 0;
}

// ---- train ------------------------------------------------------------------

struct TrainArgs {
    std::string data;
    int task = 1;
    std::string out;
    std::string config;
    std::string resume;
    std::optional<int> steps, batch, eval_interval;
    std::optional<std::uint64_t> seed;
    std::optional<double> mae, fl, fm, vgg, gl, lr_g, lr_d;
    std::vector<std::size_t> only;
    bool quiet = false;
};

int run_train(const TrainArgs& a)
{
    TrainConfig cfg = a.config.empty() ? TrainConfig{} : parse_train_config(io::read_text(a.config));
    const Manifest m = read_manifest(a.data);
    if (a.steps)
        cfg.steps = *a.steps;
    if (a.batch)
        cfg.batch_size = *a.batch;
    if (a.eval_interval)
        cfg.eval_interval = *a.eval_interval;
    if (a.seed)
        cfg.seed = *a.seed;
    if (a.mae)
        cfg.weights.mae = *a.mae;
    if (a.fl)
        cfg.weights.fl = *a.fl;
    if (a.fm)
        cfg.weights.fm = *a.fm;
    if (a.vgg)
        cfg.weights.vgg = *a.vgg;
    if (a.gl)
        cfg.weights.gl = *a.gl;
    if (a.lr_g)
        cfg.lr_g = *a.lr_g;
    if (a.lr_d)
        cfg.lr_d = *a.lr_d;
    cfg.generator.target_resolution = m.width;
    cfg.discriminator.input_resolution = m.width;
    cfg.generator.cond_channels = cfg.discriminator.cond_channels = 4 + static_cast<int>(m.catalog.size());
    cfg.validate();

    std::vector<std::size_t> idx = a.only.empty() ? split_tasks(m, a.task).train : a.only;
    echo("train", {{"data", a.data},
                   {"task", a.task},
                   {"out", a.out},
                   {"resume", a.resume},
                   {"manifest_hash", m.hash()},
                   {"train_samples", idx.size()},
                   {"train", json::parse(train_config_json(cfg))}});
    const auto data = load_split(m, a.data, idx);
    const long report_every = std::max(1, cfg.steps / 20);
    const auto progress = [&](long step, const StepReport& r) {
        if (!a.quiet && (step % report_every == 0 || step == cfg.steps))
            std::printf("step %6ld  total %.4f  mae %.4f  gl %.4f  d %.4f\n", step, r.g.total, r.g.mae, r.g.gl,
                        r.d_loss);
    };
    const TrainResult res = train(cfg, data, a.out, a.resume, progress);
    std::cout << "initial_mae " << res.initial_mae << "\n";
    std::cout << "final_mae " << res.last.g.mae << "\n";
    std::cout << "checkpoint " << res.final_checkpoint.string() << "\n";
    return 0;
}

// ---- eval -------------------------------------------------------------------

struct EvalArgs {
    std::string ckpt;
    std::string data;
    int task = 1;
    int z_draws = 1;
    std::uint64_t eval_seed = 1234;
    std::string csv;
};

int run_eval(const EvalArgs& a)
{
    const Manifest m = read_manifest(a.data);
    const TaskSplit split = split_tasks(m, a.task);
    const Checkpoint ckpt = load_checkpoint(a.ckpt);
    const Generator<float> g = load_generator(ckpt);
    echo("eval", {{"ckpt", a.ckpt},
                  {"data", a.data},
                  {"task", a.task},
                  {"z_draws", a.z_draws},
                  {"eval_seed", a.eval_seed},
                  {"manifest_hash", m.hash()},
                  {"train_samples", split.train.size()},
                  {"test_samples", split.test.size()}});
    const auto test = load_split(m, a.data, split.test);
    const auto train_set = load_split(m, a.data, split.train);
    const EvalResult gan = evaluate(g, test, a.eval_seed, a.z_draws);
    const EvalResult base = evaluate_mean_baseline(train_set, test);

    if (!a.csv.empty()) {
        std::string text = "room,bs_u,bs_v,upa,freq_hz," + MetricsReport::header() + "\n";
        for (const auto& r : gan.rows)
            text += r.meta.room + "," + std::to_string(r.meta.bs_cell[0]) + "," + std::to_string(r.meta.bs_cell[1]) + ","
                    + std::to_string(r.meta.upa[0]) + "x" + std::to_string(r.meta.upa[1]) + ","
                    + std::to_string(r.meta.freq_hz) + "," + r.metrics.row() + "\n";
        io::write_text(a.csv, text);
    }

    const auto& ref = kReference[static_cast<std::size_t>(a.task - 1)];
    std::printf("%-10s %8s %8s %9s %8s\n", "", "MAE", "RMSE", "PSNR", "MS-SSIM");
    std::cout << metrics_line("gan", gan.aggregate) << "\n";
    std::cout << metrics_line("mean-map", base.aggregate) << "\n";
    std::cout << metrics_line("ref-task", {ref[0], ref[1], ref[2], ref[3], 0, 0}) << "\n";
    const auto& avg = kReference[2];
    std::cout << metrics_line("ref-avg", {avg[0], avg[1], avg[2], avg[3], 0, 0}) << "\n";
    if (gan.aggregate.psnr_capped > 0)
        std::cout << "note " << gan.aggregate.psnr_capped << " samples hit the PSNR cap of " << kPsnrCap << " dB\n";
    return 0;
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
    std::string ckpt;
    std::string scene;
    double freq_hz = 28e9;
    std::string upa = "4x4";
    std::string out;
    std::string png;
    std::string truth;
    std::string data;
    std::vector<double> catalog_ghz;
    std::uint64_t z_seed = 1234;
    std::string colormap = "viridis";
    int scale = 8;
};

int run_synth(const SynthArgs& a)
{
    const SceneDescriptor desc = load_scene_descriptor(a.scene);
    const Scene scene = build_room(desc.layout);
    if (const auto problems = validate_scene(scene); !problems.empty())
        throw ConfigError("scene " + a.scene + ": " + problems.front());
    const GridSpec grid = GridSpec::for_bounds(scene.bounds, desc.nx, desc.ny);

    std::vector<double> catalog = default_catalog();
    NormRange norm;
    if (!a.data.empty()) {
        const Manifest m = read_manifest(a.data);
        catalog = m.catalog;
        norm = m.norm;
    } else if (!a.catalog_ghz.empty()) {
        catalog.clear();
        for (double f : a.catalog_ghz)
            catalog.push_back(f * 1e9);
    }
    const auto [rows, cols] = parse_upa(a.upa);
    UpaConfig antenna;
    antenna.rows = rows;
    antenna.cols = cols;
    antenna.carrier_freq = a.freq_hz;
    antenna.validate();

    const Generator<float> g = load_generator(load_checkpoint(a.ckpt));
    if (g.cfg.target_resolution != desc.nx || desc.nx != desc.ny)
        throw ConfigError("scene grid " + std::to_string(desc.nx) + "x" + std::to_string(desc.ny)
                          + " does not match the checkpoint resolution " + std::to_string(g.cfg.target_resolution));
    const ConditioningSet cond = assemble_condition(rasterize_semantic(scene, grid), rasterize_pattern(antenna, grid),
                                                    encode_frequency(a.freq_hz, catalog));
    if (cond.channels() != g.cfg.cond_channels)
        throw ConfigError("frequency catalog has " + std::to_string(cond.freq.k()) + " entries but the checkpoint expects "
                          + std::to_string(g.cfg.cond_channels - 4));
    echo("synth", {{"ckpt", a.ckpt},
                   {"scene", a.scene},
                   {"freq_hz", a.freq_hz},
                   {"upa", a.upa},
                   {"catalog_hz", catalog},
                   {"z_seed", a.z_seed},
                   {"out", a.out},
                   {"png", a.png},
                   {"truth", a.truth}});

    MapFile out{grid.nx, grid.ny, norm, synthesize(g, cond, a.z_seed)};
    write_map_file(a.out, out);
    if (!a.png.empty())
        write_png(a.png, render_map(out.values, out.width, out.height, parse_colormap(a.colormap), a.scale));
    if (!a.truth.empty()) {
        const RfMap rf = generate_rf_map(scene, antenna, a.freq_hz, grid, {});
        write_map_file(a.truth, {grid.nx, grid.ny, {rf.min_dbm, rf.max_dbm}, normalize_rss(rf)});
    }
    const auto [lo, hi] = std::minmax_element(out.values.begin(), out.values.end());
    std::printf("wrote %s (%dx%d, range [%.4f, %.4f])\n", a.out.c_str(), out.width, out.height, *lo, *hi);
    return 0;
}

// ---- render -----------------------------------------------------------------

struct RenderArgs {
    std::string map;
    std::vector<std::string> compare;
    std::string out;
    std::string colormap = "viridis";
    int scale = 8;
};

int run_render(const RenderArgs& a)
{
    const Colormap cmap = parse_colormap(a.colormap);
    if (a.scale < 1)
        throw ConfigError("--scale must be >= 1");
    if (a.map.empty() == a.compare.empty())
        throw ConfigError("render needs exactly one of --map or --compare");
    echo("render", {{"map", a.map}, {"compare", a.compare}, {"out", a.out}, {"colormap", a.colormap}, {"scale", a.scale}});
    Image img;
    if (!a.map.empty()) {
        const MapFile m = read_map_file(a.map);
        img = render_map(m.values, m.width, m.height, cmap, a.scale);
    } else {
        img = render_compare(read_map_file(a.compare[0]), read_map_file(a.compare[1]), cmap, a.scale);
    }
    write_png(a.out, img);
    std::printf("wrote %s (%dx%d)\n", a.out.c_str(), img.width, img.height);
    return 0;
}

// ---- oracle-check -----------------------------------------------------------

int run_oracles(bool inject)
{
    if (inject)
        set_sobel_perturbation(1e-2);
    echo("oracle-check", {{"inject_sobel_perturbation", inject}});
    bool ok = true;
    for (const auto& r : oracle::run_oracle_suites()) {
        std::cout << oracle::format_result(r) << std::endl;
        ok = ok && r.pass;
    }
    std::cout << (ok ? "all oracle suites passed" : "oracle failures") << "\n";
    return ok ? 0 : kExitNumerical;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Indoor RF map generation, training and evaluation"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen-dataset", "Trace a sweep into shards and a manifest");
    g->add_option("--config", gen.config, "Sweep config (JSON)")->required()->check(CLI::ExistingFile);
    g->add_option("--out", gen.out, "Output directory")->required();
    g->add_option("--seed", gen.seed, "Override the config seed");
    g->add_option("--threads", gen.threads, "Worker threads (0: all, capped by RADIANCE_THREADS)");

    TrainArgs tr;
    auto* t = app.add_subcommand("train", "Train the generator and discriminator");
    t->add_option("--data", tr.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    t->add_option("--task", tr.task, "Task split (1 or 2)")->check(CLI::Range(1, 2));
    t->add_option("--out", tr.out, "Run directory")->required();
    t->add_option("--config", tr.config, "Train config (JSON)")->check(CLI::ExistingFile);
    t->add_option("--resume", tr.resume, "Checkpoint to resume from")->check(CLI::ExistingFile);
    t->add_option("--steps", tr.steps, "Total steps");
    t->add_option("--batch", tr.batch, "Batch size");
    t->add_option("--eval-interval", tr.eval_interval, "Checkpoint interval");
    t->add_option("--seed", tr.seed, "Training seed");
    t->add_option("--lambda-mae", tr.mae);
    t->add_option("--lambda-fl", tr.fl);
    t->add_option("--lambda-fm", tr.fm);
    t->add_option("--lambda-vgg", tr.vgg);
    t->add_option("--lambda-gl", tr.gl);
    t->add_option("--lr-g", tr.lr_g);
    t->add_option("--lr-d", tr.lr_d);
    t->add_option("--samples", tr.only, "Train on these manifest indices instead of the task split");
    t->add_flag("--quiet", tr.quiet, "No per-step progress");

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "Score a checkpoint on a task's test split");
    e->add_option("--ckpt", ev.ckpt, "Checkpoint")->required()->check(CLI::ExistingFile);
    e->add_option("--data", ev.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    e->add_option("--task", ev.task, "Task split (1 or 2)")->check(CLI::Range(1, 2));
    e->add_option("--z-draws", ev.z_draws, "Noise draws per test sample")->check(CLI::PositiveNumber);
    e->add_option("--eval-seed", ev.eval_seed, "Seed of the evaluation noise");
    e->add_option("--csv", ev.csv, "Per-sample metrics CSV");

    SynthArgs sy;
    auto* s = app.add_subcommand("synth", "Generate a map for a scene descriptor");
    s->add_option("--ckpt", sy.ckpt, "Checkpoint")->required()->check(CLI::ExistingFile);
    s->add_option("--scene", sy.scene, "Scene descriptor (JSON)")->required()->check(CLI::ExistingFile);
    s->add_option("--freq", sy.freq_hz, "Carrier frequency in Hz")->required();
    s->add_option("--upa", sy.upa, "Array size RxC");
    s->add_option("--out", sy.out, "Output map file")->required();
    s->add_option("--png", sy.png, "Also render a PNG");
    s->add_option("--truth", sy.truth, "Also trace the scene and write the ground-truth map");
    s->add_option("--data", sy.data, "Take the frequency catalog and range from this dataset");
    s->add_option("--catalog-ghz", sy.catalog_ghz, "Frequency catalog in GHz");
    s->add_option("--z-seed", sy.z_seed, "Noise seed");
    s->add_option("--colormap", sy.colormap)->check(CLI::IsMember({"viridis", "jet"}));
    s->add_option("--scale", sy.scale)->check(CLI::PositiveNumber);

    RenderArgs re;
    auto* r = app.add_subcommand("render", "Render a map file as a PNG heatmap");
    r->add_option("--map", re.map, "Map file")->check(CLI::ExistingFile);
    r->add_option("--compare", re.compare, "REAL FAKE map files side by side")->expected(2)->check(CLI::ExistingFile);
    r->add_option("--out", re.out, "Output PNG")->required();
    r->add_option("--colormap", re.colormap)->check(CLI::IsMember({"viridis", "jet"}));
    r->add_option("--scale", re.scale, "Pixels per cell")->check(CLI::PositiveNumber);

    bool inject = false;
    auto* o = app.add_subcommand("oracle-check", "Run the reference-implementation suites");
    o->add_flag("--inject-sobel-perturbation", inject, "Perturb the Sobel kernel by 1e-2 (the GL suite must fail)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*g)
            return run_gen(gen);
        if (*t)
            return run_train(tr);
        if (*e)
            return run_eval(ev);
        if (*s)
            return run_synth(sy);
        if (*r)
            return run_render(re);
        if (*o)
            return run_oracles(inject);
    } catch (const NumericalError& err) {
        std::cerr << "numerical error: " << err.what() << "\n";
        return kExitNumerical;
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitData;
    } catch (const DataError& err) {
        std::cerr << "data error: " << err.what() << "\n";
        return kExitData;
    } catch (const ShapeError& err) {
        std::cerr << "shape error: " << err.what() << "\n";
        return kExitData;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
