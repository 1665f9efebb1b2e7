#include "svedefog/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "svedefog/imageio.hpp"
#include "svedefog/rng.hpp"

namespace svedefog {

namespace {

namespace fs = std::filesystem;

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Seeded value noise in [0,1]: random lattice values, smoothstep-bilinear
// interpolation, no gradients needed.
double value_noise(uint64_t seed, double x, double y, double cell, uint64_t octave) {
    const double gx = x / cell;
    const double gy = y / cell;
    const int64_t ix = static_cast<int64_t>(std::floor(gx));
    const int64_t iy = static_cast<int64_t>(std::floor(gy));
    const double fx = smoothstep(gx - ix);
    const double fy = smoothstep(gy - iy);
    auto lattice = [&](int64_t lx, int64_t ly) {
        return hash_uniform(seed, static_cast<uint64_t>(lx) * 2654435761u,
                            static_cast<uint64_t>(ly) * 40503u, octave);
    };
    const double v00 = lattice(ix, iy), v10 = lattice(ix + 1, iy);
    const double v01 = lattice(ix, iy + 1), v11 = lattice(ix + 1, iy + 1);
    const double top = v00 + (v10 - v00) * fx;
    const double bot = v01 + (v11 - v01) * fx;
    return top + (bot - top) * fy;
}

double fractal_noise(uint64_t seed, double x, double y, double base_cell, int octaves) {
    double acc = 0.0, amp = 1.0, norm = 0.0, cell = base_cell;
    for (int o = 0; o < octaves; ++o) {
        acc += amp * value_noise(seed, x, y, cell, o);
        norm += amp;
        amp *= 0.5;
        cell = std::max(cell / 2.0, 1.0);
    }
    return acc / norm;
}

ImageF scene_checkerboard(const SceneSpec& spec) {
    ImageF img(spec.width, spec.height);
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x)
            img.at(x, y) = (((x / 8) + (y / 8)) % 2 == 0) ? 0.1 : 0.9;
    return img;
}

ImageF scene_ramp(const SceneSpec& spec) {
    ImageF img(spec.width, spec.height);
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x)
            img.at(x, y) = spec.width > 1 ? static_cast<double>(x) / (spec.width - 1) : 0.0;
    return img;
}

ImageF scene_textured(const SceneSpec& spec) {
    ImageF img(spec.width, spec.height);
    const double cell = std::max(4.0, spec.width / 8.0);
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) {
            const double n = fractal_noise(spec.seed, x, y, cell, 4);
            img.at(x, y) = 0.05 + 0.9 * n;
        }
    return img;
}

// Bright elongated plume over a dark, lightly textured background. The
// field is rescaled so its maximum equals dynamic_range exactly, which can
// exceed 1 to exercise SVE saturation handling.
ImageF scene_plume(const SceneSpec& spec) {
    ImageF img(spec.width, spec.height);
    const double peak = std::max(spec.dynamic_range, 1.0);
    const double cx = spec.width * 0.5;
    const double cy = spec.height * 0.4;
    const double sx = spec.width * 0.08;
    const double sy = spec.height * 0.3;
    double maxv = 0.0;
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            const double bg =
                0.04 + 0.08 * fractal_noise(spec.seed, x, y, spec.width / 6.0, 3);
            const double dx = (x - cx) / sx;
            const double dy = (y - cy) / sy;
            const double body = std::exp(-0.5 * (dx * dx + dy * dy));
            // particulate texture riding on the plume
            const double tex =
                0.75 + 0.5 * fractal_noise(spec.seed ^ 0x9D2CULL, x, y, 6.0, 3);
            const double v = bg + peak * body * tex;
            img.at(x, y) = v;
            maxv = std::max(maxv, v);
        }
    }
    const double rescale = peak / maxv;
    for (double& v : img.data) v *= rescale;
    return img;
}

}  // namespace

SceneKind scene_kind_from_name(const std::string& name) {
    if (name == "checkerboard") return SceneKind::checkerboard;
    if (name == "ramp") return SceneKind::ramp;
    if (name == "textured-noise" || name == "texture") return SceneKind::textured_noise;
    if (name == "plume-phantom" || name == "plume") return SceneKind::plume_phantom;
    throw std::invalid_argument("unknown scene kind '" + name + "'");
}

std::string scene_kind_name(SceneKind kind) {
    switch (kind) {
        case SceneKind::checkerboard: return "checkerboard";
        case SceneKind::ramp: return "ramp";
        case SceneKind::textured_noise: return "textured-noise";
        case SceneKind::plume_phantom: return "plume-phantom";
    }
    return "?";
}

TFieldKind t_field_from_name(const std::string& name) {
    if (name == "uniform") return TFieldKind::uniform;
    if (name == "gaussian-blobs") return TFieldKind::gaussian_blobs;
    if (name == "smooth-noise") return TFieldKind::smooth_noise;
    throw std::invalid_argument("unknown transmission field '" + name + "'");
}

std::string t_field_name(TFieldKind kind) {
    switch (kind) {
        case TFieldKind::uniform: return "uniform";
        case TFieldKind::gaussian_blobs: return "gaussian-blobs";
        case TFieldKind::smooth_noise: return "smooth-noise";
    }
    return "?";
}

void HazeSpec::validate() const {
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("HazeSpec: A must be in [0,1]");
    if (!(t_min > 0.0 && t_min <= 1.0))
        throw std::invalid_argument("HazeSpec: t_min must be in (0,1]");
    if (t_mode == TFieldKind::uniform && (t_uniform < 0.0 || t_uniform > 1.0))
        throw std::invalid_argument("HazeSpec: uniform t must be in [0,1]");
    if (corr_length <= 0.0) throw std::invalid_argument("HazeSpec: corr_length must be > 0");
    if (num_blobs < 1) throw std::invalid_argument("HazeSpec: num_blobs must be >= 1");
}

ImageF make_scene(const SceneSpec& spec) {
    if (spec.width % 2 != 0 || spec.height % 2 != 0)
        throw std::invalid_argument("make_scene: dimensions must be even");
    if (spec.width <= 0 || spec.height <= 0)
        throw std::invalid_argument("make_scene: dimensions must be positive");
    switch (spec.kind) {
        case SceneKind::checkerboard: return scene_checkerboard(spec);
        case SceneKind::ramp: return scene_ramp(spec);
        case SceneKind::textured_noise: return scene_textured(spec);
        case SceneKind::plume_phantom: return scene_plume(spec);
    }
    throw std::invalid_argument("make_scene: bad kind");
}

std::pair<ImageF, ImageF> apply_haze(const ImageF& j, const HazeSpec& spec) {
    spec.validate();
    ImageF t(j.width, j.height);
    switch (spec.t_mode) {
        case TFieldKind::uniform: {
            const double v = std::clamp(spec.t_uniform, spec.t_min, 1.0);
            for (double& p : t.data) p = v;
            break;
        }
        case TFieldKind::gaussian_blobs: {
            for (double& p : t.data) p = 1.0;
            for (int b = 0; b < spec.num_blobs; ++b) {
                const double bx = hash_uniform(spec.seed, b, 0, 10) * j.width;
                const double by = hash_uniform(spec.seed, b, 1, 10) * j.height;
                const double rad =
                    (0.1 + 0.25 * hash_uniform(spec.seed, b, 2, 10)) * std::min(j.width, j.height);
                const double amp = 0.4 + 0.5 * hash_uniform(spec.seed, b, 3, 10);
                for (int y = 0; y < j.height; ++y)
                    for (int x = 0; x < j.width; ++x) {
                        const double dx = (x - bx) / rad;
                        const double dy = (y - by) / rad;
                        t.at(x, y) -= amp * std::exp(-0.5 * (dx * dx + dy * dy));
                    }
            }
            for (double& p : t.data) p = std::clamp(p, spec.t_min, 1.0);
            break;
        }
        case TFieldKind::smooth_noise: {
            for (int y = 0; y < j.height; ++y)
                for (int x = 0; x < j.width; ++x) {
                    const double n = value_noise(spec.seed, x, y, spec.corr_length, 99);
                    t.at(x, y) = spec.t_min + (1.0 - spec.t_min) * n;
                }
            break;
        }
    }

    ImageF hazy(j.width, j.height);
    for (size_t i = 0; i < hazy.data.size(); ++i)
        hazy.data[i] = j.data[i] * t.data[i] + spec.a * (1.0 - t.data[i]);
    return {std::move(hazy), std::move(t)};
}

namespace {

std::string item_base(int idx) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "scene%04d", idx);
    return buf;
}

}  // namespace

std::string make_dataset(const DatasetSpec& spec, const std::string& out_dir) {
    if (spec.num_scenes < 1) throw std::invalid_argument("make_dataset: num_scenes must be >= 1");
    if (spec.haze_levels.empty())
        throw std::invalid_argument("make_dataset: at least one haze level required");
    if (spec.kinds.empty()) throw std::invalid_argument("make_dataset: no scene kinds");
    spec.pattern.validate();
    spec.sensor.validate();

    fs::create_directories(out_dir);
    const std::string manifest_path = (fs::path(out_dir) / "manifest.txt").string();
    std::ofstream mf(manifest_path);
    if (!mf) throw std::runtime_error("make_dataset: cannot write " + manifest_path);
    mf.precision(17);

    mf << "# svedefog dataset manifest v1\n";
    mf << "num_scenes=" << spec.num_scenes << "\n";
    mf << "width=" << spec.width << "\n";
    mf << "height=" << spec.height << "\n";
    mf << "haze_levels=";
    for (size_t i = 0; i < spec.haze_levels.size(); ++i)
        mf << (i ? "," : "") << spec.haze_levels[i];
    mf << "\n";
    mf << "atmos=" << spec.atmos << "\n";
    mf << "plume_dynamic_range=" << spec.plume_dynamic_range << "\n";
    mf << "master_seed=" << spec.master_seed << "\n";
    mf << "kinds=";
    for (size_t i = 0; i < spec.kinds.size(); ++i)
        mf << (i ? "," : "") << scene_kind_name(spec.kinds[i]);
    mf << "\n";
    mf << "pattern=" << spec.pattern.transmittances[0] << "," << spec.pattern.transmittances[1]
       << "," << spec.pattern.transmittances[2] << "," << spec.pattern.transmittances[3] << "\n";
    mf << "bit_depth=" << spec.sensor.bit_depth << "\n";
    mf << "read_noise_sigma=" << spec.sensor.read_noise_sigma << "\n";
    mf << "prnu_sigma=" << spec.sensor.prnu_sigma << "\n";

    for (int idx = 0; idx < spec.num_scenes; ++idx) {
        SceneSpec sc;
        sc.kind = spec.kinds[idx % spec.kinds.size()];
        sc.width = spec.width;
        sc.height = spec.height;
        sc.dynamic_range =
            sc.kind == SceneKind::plume_phantom ? spec.plume_dynamic_range : 1.0;
        sc.seed = hash_combine(spec.master_seed, idx, 0, 7001);

        const ImageF gt = make_scene(sc);
        const std::string gt_name = item_base(idx) + "_gt.pfm";
        write_pfm((fs::path(out_dir) / gt_name).string(), gt);
        mf << "gt idx=" << idx << " kind=" << scene_kind_name(sc.kind)
           << " seed=" << sc.seed << " dynamic_range=" << sc.dynamic_range
           << " path=" << gt_name << "\n";

        for (size_t lvl = 0; lvl < spec.haze_levels.size(); ++lvl) {
            HazeSpec hz;
            hz.a = spec.atmos;
            hz.t_mode = TFieldKind::uniform;
            hz.t_uniform = spec.haze_levels[lvl];
            hz.seed = hash_combine(spec.master_seed, idx, lvl, 7002);
            const auto [hazy, tmap] = apply_haze(gt, hz);
            (void)tmap;

            const std::string hazy_name =
                item_base(idx) + "_h" + std::to_string(lvl) + "_hazy.pfm";
            write_pfm((fs::path(out_dir) / hazy_name).string(), hazy);

            SensorModel cam = spec.sensor;
            cam.seed = hash_combine(spec.master_seed, idx, lvl, 7003);
            const ImageU16 raw = simulate_capture(hazy, spec.pattern, cam);
            const std::string raw_name =
                item_base(idx) + "_h" + std::to_string(lvl) + "_raw.pgm";
            write_pgm((fs::path(out_dir) / raw_name).string(), raw);
            write_raw_sidecar((fs::path(out_dir) / (raw_name + ".meta")).string(),
                              spec.pattern, cam);

            mf << "hazy idx=" << idx << " level=" << lvl << " t=" << spec.haze_levels[lvl]
               << " t_mode=uniform atmos=" << spec.atmos << " seed=" << hz.seed
               << " path=" << hazy_name << "\n";
            mf << "raw idx=" << idx << " level=" << lvl << " seed=" << cam.seed
               << " path=" << raw_name << "\n";
        }
    }
    return manifest_path;
}

namespace {

std::map<std::string, std::string> parse_attrs(std::istringstream& ss) {
    std::map<std::string, std::string> attrs;
    std::string tok;
    while (ss >> tok) {
        const size_t eq = tok.find('=');
        if (eq != std::string::npos) attrs[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return attrs;
}

}  // namespace

DatasetManifest load_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("load_manifest: cannot open " + manifest_path);
    DatasetManifest man;
    man.base_dir = fs::path(manifest_path).parent_path().string();
    man.spec.kinds.clear();
    man.spec.haze_levels.clear();

    std::map<std::pair<int, int>, DatasetItem> items;
    std::map<int, std::string> gt_paths;

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string head;
        ss >> head;
        if (head == "gt" || head == "hazy" || head == "raw") {
            auto attrs = parse_attrs(ss);
            const int idx = std::stoi(attrs.at("idx"));
            const std::string abs = (fs::path(man.base_dir) / attrs.at("path")).string();
            if (head == "gt") {
                gt_paths[idx] = abs;
            } else {
                const int lvl = std::stoi(attrs.at("level"));
                DatasetItem& it = items[{idx, lvl}];
                it.scene_index = idx;
                it.level = lvl;
                if (head == "hazy") {
                    it.hazy_path = abs;
                    it.t = std::stod(attrs.at("t"));
                } else {
                    it.raw_path = abs;
                }
            }
        } else {
            const size_t eq = head.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = head.substr(0, eq);
            const std::string val = head.substr(eq + 1);
            if (key == "num_scenes") man.spec.num_scenes = std::stoi(val);
            else if (key == "width") man.spec.width = std::stoi(val);
            else if (key == "height") man.spec.height = std::stoi(val);
            else if (key == "atmos") man.spec.atmos = std::stod(val);
            else if (key == "plume_dynamic_range") man.spec.plume_dynamic_range = std::stod(val);
            else if (key == "master_seed") man.spec.master_seed = std::stoull(val);
            else if (key == "bit_depth") man.spec.sensor.bit_depth = std::stoi(val);
            else if (key == "read_noise_sigma") man.spec.sensor.read_noise_sigma = std::stod(val);
            else if (key == "prnu_sigma") man.spec.sensor.prnu_sigma = std::stod(val);
            else if (key == "haze_levels") {
                std::istringstream vs(val);
                std::string tok;
                while (std::getline(vs, tok, ',')) man.spec.haze_levels.push_back(std::stod(tok));
            } else if (key == "kinds") {
                std::istringstream vs(val);
                std::string tok;
                while (std::getline(vs, tok, ',')) man.spec.kinds.push_back(scene_kind_from_name(tok));
            } else if (key == "pattern") {
                std::istringstream vs(val);
                std::string tok;
                for (int i = 0; i < 4 && std::getline(vs, tok, ','); ++i)
                    man.spec.pattern.transmittances[i] = std::stod(tok);
            }
        }
    }

    for (auto& [key, item] : items) {
        item.gt_path = gt_paths.at(item.scene_index);
        man.items.push_back(item);
    }
    return man;
}

std::string replay_manifest(const std::string& manifest_path, const std::string& out_dir) {
    const DatasetManifest man = load_manifest(manifest_path);
    return make_dataset(man.spec, out_dir);
}

}  // namespace svedefog
