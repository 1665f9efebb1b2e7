#include "svedefog/pipeline.hpp"

#include <filesystem>
#include <stdexcept>

#include "svedefog/imageio.hpp"

namespace svedefog {

namespace {

namespace fs = std::filesystem;

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("[stage ") + name + "] " + e.what());
    }
}

void dump_stack(const std::string& dir, const std::string& prefix,
                const std::vector<ImageF>& layers) {
    for (size_t k = 0; k < layers.size(); ++k)
        write_pfm((fs::path(dir) / (prefix + std::to_string(k + 1) + ".pfm")).string(),
                  layers[k]);
}

}  // namespace

PipelineResult run_pipeline(const ImageU16& raw, const PipelineOptions& opt) {
    const Config& cfg = opt.cfg;
    const AttenuatorPattern pattern = cfg.attenuator();
    const bool dumping = !opt.dump_dir.empty() &&
                         (opt.dump_all || opt.dump_features || opt.dump_regions);
    if (dumping) fs::create_directories(opt.dump_dir);

    PipelineResult res;

    ExposureStack quarter = stage("demux", [&] { return demux(raw, pattern); });
    ExposureStack full =
        stage("reconstruct", [&] { return reconstruct_full(quarter, cfg.interp_gain); });
    const int K = full.k();

    auto [haze, features] =
        stage("haze_map", [&] { return haze_map(full, cfg.haze_params()); });

    RegionMap regions = stage("segment", [&] { return segment(haze, cfg.regions); });
    if (regions.num_regions != K)
        throw std::runtime_error("[stage segment] regions=" + std::to_string(cfg.regions) +
                                 " but the gamma pairing requires M == K == " +
                                 std::to_string(K));

    std::vector<ImageF> illum, refl;
    stage("decompose", [&] {
        for (int k = 0; k < K; ++k) {
            LayerPair lp = decompose(full.images[k], cfg.wgif_radius, cfg.wgif_reg);
            illum.push_back(std::move(lp.l));
            refl.push_back(std::move(lp.r));
        }
        return 0;
    });

    GammaSchedule schedule;
    std::vector<ImageF> illum_corr;
    stage("gamma", [&] {
        const std::vector<double> zeta(cfg.zeta.begin(), cfg.zeta.end());
        schedule = gamma_schedule(illum, regions, zeta, /*use_regions=*/opt.module_a);
        for (int k = 0; k < K; ++k)
            illum_corr.push_back(apply_gamma(illum[k], schedule.gamma[k]));
        return 0;
    });

    std::vector<ImageF> refl_enh;
    stage("reflectance", [&] {
        for (int k = 0; k < K; ++k)
            refl_enh.push_back(
                enhance_reflectance(refl[k], cfg.wgif_radius, cfg.wgif_reg, cfg.detail_gain));
        return 0;
    });

    WeightStack weights;
    stage("weights", [&] {
        if (opt.module_b) {
            weights.w_l = illum_weight(illum_corr, regions, cfg.fusion());
            weights.w_r = refl_weight(refl_enh);
        } else {
            const ImageF uniform(full.width(), full.height(), 1.0 / K);
            weights.w_l.assign(K, uniform);
            weights.w_r.assign(K, uniform);
        }
        weights.normalized = true;
        return 0;
    });

    res.fused = stage("fuse", [&] {
        return fuse_pyramid(illum_corr, refl_enh, weights.w_l, weights.w_r, cfg.fusion());
    });

    if (dumping) {
        if (opt.dump_features || opt.dump_all) {
            write_pfm((fs::path(opt.dump_dir) / "haze_f.pfm").string(), haze.f);
            write_pfm((fs::path(opt.dump_dir) / "feat_bi.pfm").string(), features.bi);
            write_pfm((fs::path(opt.dump_dir) / "feat_wc.pfm").string(), features.wc);
            write_pfm((fs::path(opt.dump_dir) / "feat_cf.pfm").string(), features.cf);
            write_pfm((fs::path(opt.dump_dir) / "feat_v.pfm").string(), features.v);
            write_png((fs::path(opt.dump_dir) / "haze_f.png").string(),
                      quantize(haze.f, 8));
        }
        if (opt.dump_regions || opt.dump_all) {
            // Label map spread across the 8-bit range for visibility.
            ImageU16 lab(regions.width, regions.height, 8);
            const int M = regions.num_regions;
            for (size_t i = 0; i < lab.data.size(); ++i)
                lab.data[i] = static_cast<uint16_t>(
                    M > 1 ? (regions.labels[i] - 1) * 255 / (M - 1) : 0);
            write_png((fs::path(opt.dump_dir) / "regions.png").string(), lab);
        }
        if (opt.dump_all) {
            dump_stack(opt.dump_dir, "illum_", illum);
            dump_stack(opt.dump_dir, "refl_", refl);
            dump_stack(opt.dump_dir, "illum_corr_", illum_corr);
            dump_stack(opt.dump_dir, "refl_enh_", refl_enh);
            dump_stack(opt.dump_dir, "weight_l_", weights.w_l);
            dump_stack(opt.dump_dir, "weight_r_", weights.w_r);
            dump_stack(opt.dump_dir, "exposure_", full.images);
        }
    }

    if (opt.keep_artifacts) {
        res.quarter = std::move(quarter);
        res.full = std::move(full);
        res.haze = std::move(haze);
        res.features = std::move(features);
        res.regions = std::move(regions);
        res.illum = std::move(illum);
        res.refl = std::move(refl);
        res.illum_corr = std::move(illum_corr);
        res.refl_enh = std::move(refl_enh);
        res.weights = std::move(weights);
        res.schedule = std::move(schedule);
    }
    return res;
}

}  // namespace svedefog
