// svedefog - command-line front end: capture simulation, dataset synthesis,
// demultiplexing, the full reconstruction pipeline, evaluation, and the
// built-in invariant self-test.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "svedefog/config.hpp"
#include "svedefog/imageio.hpp"
#include "svedefog/metrics.hpp"
#include "svedefog/pipeline.hpp"
#include "svedefog/pyramid.hpp"
#include "svedefog/synth.hpp"

namespace fs = std::filesystem;
using namespace svedefog;

namespace {

struct CommonConfigArgs {
    std::string config_path;
    std::vector<std::string> sets;  // key=value overrides

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "key=value config file");
        app->add_option("--set", sets, "override a config key (key=value, repeatable)");
    }

    Config load() const {
        std::vector<std::pair<std::string, std::string>> overrides;
        for (const std::string& kv : sets) {
            const size_t eq = kv.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
            overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        }
        return load_config(config_path, overrides);
    }
};

void echo_sidecar(const std::string& out_path, const Config& cfg) {
    write_config_sidecar(out_path + ".config", cfg);
}

void write_output_image(const std::string& path, const ImageF& img) {
    const std::string ext = fs::path(path).extension().string();
    if (ext == ".pfm") {
        write_pfm(path, img);  // float export stays unclamped
    } else if (ext == ".png") {
        write_png(path, quantize(img, 16));
    } else if (ext == ".pgm") {
        write_pgm(path, quantize(img, 16));
    } else {
        throw std::runtime_error("unsupported output extension '" + ext +
                                 "' (use .pfm, .png or .pgm)");
    }
}

int cmd_simulate(const std::string& scene_path, const std::string& out_path,
                 const CommonConfigArgs& cargs) {
    const Config cfg = cargs.load();
    const ImageF scene = read_image_f(scene_path);
    const ImageU16 raw = simulate_capture(scene, cfg.attenuator(), cfg.sensor());
    write_pgm(out_path, raw);
    write_raw_sidecar(out_path + ".meta", cfg.attenuator(), cfg.sensor());
    echo_sidecar(out_path, cfg);
    std::printf("wrote %s (%dx%d, %d-bit)\n", out_path.c_str(), raw.width, raw.height,
                raw.bit_depth);
    return 0;
}

int cmd_demux(const std::string& raw_path, const std::string& out_prefix, bool full_res,
              const CommonConfigArgs& cargs) {
    Config cfg = cargs.load();
    const ImageU16 raw = read_image_u16(raw_path);
    if (fs::exists(raw_path + ".meta")) {
        AttenuatorPattern pat = cfg.attenuator();
        SensorModel cam = cfg.sensor();
        read_raw_sidecar(raw_path + ".meta", pat, cam);
        cfg.pattern = pat.transmittances;
        cfg.bit_depth = cam.bit_depth;
    }
    ExposureStack stack = demux(raw, cfg.attenuator());
    if (full_res) stack = reconstruct_full(stack, cfg.interp_gain);
    for (int k = 1; k <= stack.k(); ++k)
        write_pfm(out_prefix + std::to_string(k) + ".pfm", stack.images[k - 1]);
    echo_sidecar(out_prefix + "stack", cfg);
    const ConsistencyReport rep = exposure_consistency_check(stack, cfg.attenuator());
    std::fputs(rep.to_text().c_str(), stdout);
    return 0;
}

int cmd_pipeline(const std::string& raw_path, const std::string& out_path,
                 const PipelineOptions& opt_in, const CommonConfigArgs& cargs) {
    PipelineOptions opt = opt_in;
    opt.cfg = cargs.load();
    const ImageU16 raw = read_image_u16(raw_path);
    if (fs::exists(raw_path + ".meta")) {
        AttenuatorPattern pat = opt.cfg.attenuator();
        SensorModel cam = opt.cfg.sensor();
        read_raw_sidecar(raw_path + ".meta", pat, cam);
        opt.cfg.pattern = pat.transmittances;
        opt.cfg.bit_depth = cam.bit_depth;
    }
    if (opt.dump_dir.empty())
        opt.dump_dir = (fs::path(out_path).parent_path() / "dump").string();
    const PipelineResult res = run_pipeline(raw, opt);
    write_output_image(out_path, res.fused);
    echo_sidecar(out_path, opt.cfg);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_synth_make(const DatasetSpec& spec, const std::string& out_dir,
                   const CommonConfigArgs& cargs) {
    DatasetSpec s = spec;
    const Config cfg = cargs.load();
    s.pattern = cfg.attenuator();
    s.sensor = cfg.sensor();
    const std::string manifest = make_dataset(s, out_dir);
    write_config_sidecar((fs::path(out_dir) / "effective.config").string(), cfg);
    std::printf("wrote %s (%d scenes x %zu haze levels)\n", manifest.c_str(), s.num_scenes,
                s.haze_levels.size());
    return 0;
}

int cmd_metrics(const std::string& manifest, const std::string& methods_csv,
                const std::string& out_path, const CommonConfigArgs& cargs) {
    const Config cfg = cargs.load();
    std::vector<std::string> methods;
    std::istringstream ss(methods_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) methods.push_back(tok);
    }
    const MetricReport report = evaluate(manifest, methods, cfg);
    const std::string tsv = report.to_tsv();
    if (out_path.empty()) {
        std::fputs(tsv.c_str(), stdout);
    } else {
        std::ofstream out(out_path);
        out << tsv;
        echo_sidecar(out_path, cfg);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

// Fast invariant sweep over the load-bearing algebra.
int cmd_selftest() {
    int failures = 0;
    auto check = [&failures](const char* name, bool ok) {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
        if (!ok) ++failures;
    };

    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    {
        ImageF img(96, 64);
        for (double& v : img.data) v = uni(gen);
        const ImageF back = collapse(laplacian_pyramid(img, pyramid_depth(64, 96)));
        double err = 0.0;
        for (size_t i = 0; i < img.data.size(); ++i)
            err = std::max(err, std::abs(back.data[i] - img.data[i]));
        check("pyramid round-trip < 1e-6", err < 1e-6);
    }
    {
        ImageF j(64, 64);
        for (double& v : j.data) v = uni(gen);
        HazeSpec hz;
        hz.t_uniform = 0.6;
        const auto [hazy, t] = apply_haze(j, hz);
        double err = 0.0;
        for (size_t i = 0; i < j.data.size(); ++i)
            err = std::max(err, std::abs(hazy.data[i] -
                                         (j.data[i] * t.data[i] + hz.a * (1.0 - t.data[i]))));
        check("scattering model exact to 1e-12", err < 1e-12);
    }
    {
        std::vector<ImageF> layers(4, ImageF(64, 64));
        for (ImageF& l : layers)
            for (double& v : l.data) v = 0.05 + 0.9 * uni(gen);
        HazeMap hm;
        hm.f = ImageF(64, 64);
        for (double& v : hm.f.data) v = uni(gen);
        const RegionMap rm = segment(hm, 4);
        FusionConfig fc;
        const std::vector<ImageF> wl = illum_weight(layers, rm, fc);
        const std::vector<ImageF> wr = refl_weight(layers);
        double worst = 0.0;
        for (size_t i = 0; i < layers[0].data.size(); ++i) {
            double sl = 0.0, sr = 0.0;
            for (int k = 0; k < 4; ++k) {
                sl += wl[k].data[i];
                sr += wr[k].data[i];
            }
            worst = std::max({worst, std::abs(sl - 1.0), std::abs(sr - 1.0)});
        }
        check("weight normalization < 1e-6", worst < 1e-6);
    }
    std::printf(failures == 0 ? "selftest: all invariants hold\n"
                              : "selftest: %d failure(s)\n",
                failures);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"svedefog - single-shot SVE dehazing/fusion pipeline"};
    app.require_subcommand(1);

    CommonConfigArgs cargs;

    // simulate
    auto* sim = app.add_subcommand("simulate", "render a raw SVE mosaic from a radiance map");
    std::string sim_scene, sim_out = "raw.pgm";
    sim->add_option("scene", sim_scene, "input radiance map (PFM/PGM/PNG)")->required();
    sim->add_option("--out", sim_out, "output raw mosaic (PGM)");
    std::string sim_pattern, sim_bits, sim_noise, sim_prnu, sim_seed;
    sim->add_option("--pattern", sim_pattern, "transmittances t1,t2,t3,t4");
    sim->add_option("--bit-depth", sim_bits, "sensor bit depth");
    sim->add_option("--noise-sigma", sim_noise, "read noise (normalized)");
    sim->add_option("--prnu", sim_prnu, "PRNU relative sigma");
    sim->add_option("--seed", sim_seed, "RNG seed");
    cargs.attach(sim);

    // demux
    auto* dmx = app.add_subcommand("demux", "split a raw mosaic into exposure sub-images");
    std::string dmx_raw, dmx_prefix = "exposure_";
    bool dmx_full = false;
    dmx->add_option("raw", dmx_raw, "raw mosaic (PGM)")->required();
    dmx->add_option("--out-prefix", dmx_prefix, "output PFM prefix");
    dmx->add_flag("--reconstruct", dmx_full, "interpolate to full resolution");
    cargs.attach(dmx);

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "full dehazing/fusion reconstruction");
    std::string pipe_raw, pipe_out = "out.pfm";
    PipelineOptions popt;
    bool no_a = false, no_b = false;
    std::string recombine_flag;
    pipe->add_option("raw", pipe_raw, "raw mosaic (PGM)")->required();
    pipe->add_option("--out", pipe_out, "output image (.pfm/.png/.pgm)");
    pipe->add_flag("--no-module-a", no_a, "ablation: global gamma instead of sub-regional");
    pipe->add_flag("--no-module-b", no_b, "ablation: uniform fusion weights");
    pipe->add_flag("--dump-all", popt.dump_all, "write every stage artifact");
    pipe->add_flag("--dump-features", popt.dump_features, "write feature/haze maps");
    pipe->add_flag("--dump-regions", popt.dump_regions, "write the region label map");
    pipe->add_option("--dump-dir", popt.dump_dir, "artifact directory");
    pipe->add_option("--recombine", recombine_flag, "separate|literal");
    std::string pipe_zeta, pipe_wgif_radius, pipe_wgif_reg, pipe_detail_gain, pipe_sigma_g;
    pipe->add_option("--zeta", pipe_zeta, "reference brightness z1,z2,z3,z4");
    pipe->add_option("--wgif-radius", pipe_wgif_radius, "decomposition filter radius");
    pipe->add_option("--wgif-reg", pipe_wgif_reg, "decomposition filter regularization");
    pipe->add_option("--detail-gain", pipe_detail_gain, "reflectance detail gain");
    pipe->add_option("--sigma-g", pipe_sigma_g, "illumination weight spread");
    cargs.attach(pipe);

    // synth
    auto* synth = app.add_subcommand("synth", "synthetic dataset generation");
    synth->require_subcommand(1);
    auto* make = synth->add_subcommand("make", "generate scenes, haze levels and raw captures");
    DatasetSpec dspec;
    std::string haze_csv = "0.9,0.7,0.5,0.3", kinds_csv = "plume,texture";
    std::string synth_out = "dataset";
    make->add_option("--scenes", dspec.num_scenes, "number of scenes");
    make->add_option("--width", dspec.width, "scene width");
    make->add_option("--height", dspec.height, "scene height");
    make->add_option("--haze-levels", haze_csv, "uniform transmissions, comma separated");
    make->add_option("--atmos", dspec.atmos, "atmospheric light A");
    make->add_option("--dynamic-range", dspec.plume_dynamic_range, "plume peak radiance");
    make->add_option("--master-seed", dspec.master_seed, "dataset seed");
    make->add_option("--kinds", kinds_csv, "scene kinds cycled over items");
    make->add_option("--out", synth_out, "output directory")->required();
    cargs.attach(make);
    auto* replay = synth->add_subcommand("replay", "regenerate a dataset from its manifest");
    std::string replay_manifest_path, replay_out;
    replay->add_option("--manifest", replay_manifest_path, "manifest path")->required();
    replay->add_option("--out", replay_out, "output directory")->required();

    // metrics
    auto* met = app.add_subcommand("metrics", "evaluate methods over a dataset");
    met->require_subcommand(1);
    auto* eval = met->add_subcommand("eval", "run metrics over each manifest item");
    std::string met_manifest, met_methods = "pipeline,mertens", met_out;
    eval->add_option("--manifest", met_manifest, "dataset manifest")->required();
    eval->add_option("--methods", met_methods, "comma-separated method list");
    eval->add_option("--out", met_out, "TSV report path (stdout when omitted)");
    cargs.attach(eval);

    // selftest
    app.add_subcommand("selftest", "run the built-in invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            std::cout << app.help();
            return 0;
        }
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (sim->parsed()) {
            if (!sim_pattern.empty()) cargs.sets.push_back("pattern=" + sim_pattern);
            if (!sim_bits.empty()) cargs.sets.push_back("bit_depth=" + sim_bits);
            if (!sim_noise.empty()) cargs.sets.push_back("noise_sigma=" + sim_noise);
            if (!sim_prnu.empty()) cargs.sets.push_back("prnu_sigma=" + sim_prnu);
            if (!sim_seed.empty()) cargs.sets.push_back("seed=" + sim_seed);
            return cmd_simulate(sim_scene, sim_out, cargs);
        }
        if (dmx->parsed()) return cmd_demux(dmx_raw, dmx_prefix, dmx_full, cargs);
        if (pipe->parsed()) {
            popt.module_a = !no_a;
            popt.module_b = !no_b;
            if (!recombine_flag.empty()) cargs.sets.push_back("recombine=" + recombine_flag);
            if (!pipe_zeta.empty()) cargs.sets.push_back("zeta=" + pipe_zeta);
            if (!pipe_wgif_radius.empty()) cargs.sets.push_back("wgif_radius=" + pipe_wgif_radius);
            if (!pipe_wgif_reg.empty()) cargs.sets.push_back("wgif_reg=" + pipe_wgif_reg);
            if (!pipe_detail_gain.empty()) cargs.sets.push_back("detail_gain=" + pipe_detail_gain);
            if (!pipe_sigma_g.empty()) cargs.sets.push_back("sigma_g=" + pipe_sigma_g);
            return cmd_pipeline(pipe_raw, pipe_out, popt, cargs);
        }
        if (synth->parsed()) {
            if (make->parsed()) {
                dspec.haze_levels.clear();
                std::istringstream hs(haze_csv);
                std::string tok;
                while (std::getline(hs, tok, ',')) dspec.haze_levels.push_back(std::stod(tok));
                dspec.kinds.clear();
                std::istringstream ks(kinds_csv);
                while (std::getline(ks, tok, ',')) dspec.kinds.push_back(scene_kind_from_name(tok));
                return cmd_synth_make(dspec, synth_out, cargs);
            }
            if (replay->parsed()) {
                const std::string manifest = replay_manifest(replay_manifest_path, replay_out);
                std::printf("wrote %s\n", manifest.c_str());
                return 0;
            }
        }
        if (met->parsed() && eval->parsed())
            return cmd_metrics(met_manifest, met_methods, met_out, cargs);
        if (app.get_subcommand("selftest")->parsed()) return cmd_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
