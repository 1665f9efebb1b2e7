#include "svedefog/fuse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "svedefog/filter.hpp"
#include "svedefog/pyramid.hpp"

namespace svedefog {

namespace {

constexpr double kWeightEps = 1e-6;

void check_layers(const std::vector<ImageF>& layers, const char* op) {
    if (layers.empty()) throw std::invalid_argument(std::string(op) + ": no layers");
    for (const ImageF& l : layers)
        if (!l.same_size(layers[0]))
            throw std::invalid_argument(std::string(op) + ": layer dimensions differ");
}

int bin_of(double v, int bins) {
    int b = static_cast<int>(v * bins);
    return std::clamp(b, 0, bins - 1);
}

}  // namespace

void FusionConfig::validate() const {
    if (!(sigma_g > 0.0)) throw std::invalid_argument("FusionConfig: sigma_g must be > 0");
    if (hist_bins < 2) throw std::invalid_argument("FusionConfig: hist_bins must be >= 2");
    if (depth_override && *depth_override < 1)
        throw std::invalid_argument("FusionConfig: depth_override must be >= 1");
}

std::vector<ImageF> illum_weight_hist(const std::vector<ImageF>& l_corr, int hist_bins) {
    check_layers(l_corr, "illum_weight_hist");
    if (hist_bins < 2) throw std::invalid_argument("illum_weight_hist: hist_bins must be >= 2");
    const int K = static_cast<int>(l_corr.size());
    const size_t npix = l_corr[0].pixel_count();

    // CDF gradient per layer: central differences over bins reduce to the
    // mean of adjacent bin densities.
    std::vector<std::vector<double>> grad(K, std::vector<double>(hist_bins, 0.0));
    for (int k = 0; k < K; ++k) {
        std::vector<double> hist(hist_bins, 0.0);
        for (double v : l_corr[k].data) hist[bin_of(v, hist_bins)] += 1.0;
        for (double& h : hist) h /= static_cast<double>(npix);
        std::vector<double> cdf(hist_bins, 0.0);
        double acc = 0.0;
        for (int b = 0; b < hist_bins; ++b) {
            acc += hist[b];
            cdf[b] = acc;
        }
        for (int b = 0; b < hist_bins; ++b) {
            if (b == 0)
                grad[k][b] = cdf[1] - cdf[0];
            else if (b == hist_bins - 1)
                grad[k][b] = cdf[b] - cdf[b - 1];
            else
                grad[k][b] = (cdf[b + 1] - cdf[b - 1]) / 2.0;
        }
    }

    std::vector<ImageF> w(K, ImageF(l_corr[0].width, l_corr[0].height));
    std::vector<double> inv(K);
    for (size_t i = 0; i < npix; ++i) {
        double sum = 0.0;
        for (int k = 0; k < K; ++k) {
            inv[k] = 1.0 / (grad[k][bin_of(l_corr[k].data[i], hist_bins)] + kWeightEps);
            sum += inv[k];
        }
        for (int k = 0; k < K; ++k) w[k].data[i] = inv[k] / (sum + kWeightEps);
    }
    return w;
}

std::vector<ImageF> illum_weight_gauss(const std::vector<ImageF>& l_corr,
                                       const RegionMap& regions, double sigma_g) {
    check_layers(l_corr, "illum_weight_gauss");
    if (!(sigma_g > 0.0)) throw std::invalid_argument("illum_weight_gauss: sigma_g must be > 0");
    const int K = static_cast<int>(l_corr.size());
    if (regions.num_regions != K)
        throw std::invalid_argument("illum_weight_gauss: requires M == K");

    std::vector<double> u(K);
    for (int k = 1; k <= K; ++k) {
        const int m = K - k + 1;
        const auto regional = regional_geomean(l_corr[k - 1], regions, m);
        u[k - 1] = regional ? *regional : global_geomean(l_corr[k - 1]);
    }

    const double denom = 2.0 * sigma_g * sigma_g;
    std::vector<ImageF> w(K, ImageF(l_corr[0].width, l_corr[0].height));
    const size_t npix = l_corr[0].pixel_count();
    std::vector<double> raw(K);
    for (size_t i = 0; i < npix; ++i) {
        double psi = 0.0;
        for (int k = 0; k < K; ++k) {
            const double d = l_corr[k].data[i] - u[k];
            raw[k] = std::exp(-d * d / denom);
            psi += raw[k];
        }
        for (int k = 0; k < K; ++k) w[k].data[i] = raw[k] / psi;
    }
    return w;
}

std::vector<ImageF> illum_weight(const std::vector<ImageF>& l_corr,
                                 const RegionMap& regions, const FusionConfig& cfg) {
    cfg.validate();
    const std::vector<ImageF> w1 = illum_weight_hist(l_corr, cfg.hist_bins);
    const std::vector<ImageF> w2 = illum_weight_gauss(l_corr, regions, cfg.sigma_g);
    const int K = static_cast<int>(l_corr.size());
    const size_t npix = l_corr[0].pixel_count();

    std::vector<ImageF> w(K, ImageF(l_corr[0].width, l_corr[0].height));
    for (size_t i = 0; i < npix; ++i) {
        double sum = 0.0;
        for (int k = 0; k < K; ++k) {
            const double p = w1[k].data[i] * w2[k].data[i];
            w[k].data[i] = p;
            sum += p;
        }
        if (sum > 0.0) {
            for (int k = 0; k < K; ++k) w[k].data[i] /= sum;
        } else {
            for (int k = 0; k < K; ++k) w[k].data[i] = 1.0 / K;
        }
    }
    return w;
}

std::vector<ImageF> refl_weight(const std::vector<ImageF>& r_enh) {
    check_layers(r_enh, "refl_weight");
    const int K = static_cast<int>(r_enh.size());
    const size_t npix = r_enh[0].pixel_count();

    // Relative edge strength: 3x3 variance against its own neighborhood mean.
    std::vector<ImageF> sal(K);
    for (int k = 0; k < K; ++k) {
        const ImageF var = local_variance(r_enh[k], 1);
        const ImageF nb = box_mean(var, 1);
        sal[k] = ImageF(var.width, var.height);
        for (size_t i = 0; i < npix; ++i)
            sal[k].data[i] = (var.data[i] + kWeightEps) / (nb.data[i] + kWeightEps);
    }

    std::vector<ImageF> w(K, ImageF(r_enh[0].width, r_enh[0].height));
    for (size_t i = 0; i < npix; ++i) {
        double sum = 0.0;
        for (int k = 0; k < K; ++k) sum += sal[k].data[i];
        for (int k = 0; k < K; ++k) w[k].data[i] = sal[k].data[i] / sum;
    }
    return w;
}

namespace {

void check_normalized(const std::vector<ImageF>& w, const char* what) {
    const size_t npix = w[0].pixel_count();
    for (size_t i = 0; i < npix; ++i) {
        double sum = 0.0;
        for (const ImageF& img : w) {
            if (img.data[i] < 0.0)
                throw std::invalid_argument(std::string("fuse_pyramid: negative ") + what);
            sum += img.data[i];
        }
        if (std::abs(sum - 1.0) > 1e-4)
            throw std::invalid_argument(std::string("fuse_pyramid: ") + what +
                                        " not normalized (per-pixel sum off by > 1e-4)");
    }
}

// Sum over k of Lap(layer_k) .* Gauss(weight_k), level by level.
std::vector<ImageF> blend_levels(const std::vector<ImageF>& layers,
                                 const std::vector<ImageF>& weights, int depth) {
    const int K = static_cast<int>(layers.size());
    std::vector<ImageF> acc;
    for (int k = 0; k < K; ++k) {
        const Pyramid lap = laplacian_pyramid(layers[k], depth);
        const std::vector<ImageF> gw = gaussian_levels(weights[k], depth + 1);
        if (acc.empty()) {
            acc.resize(lap.levels.size());
            for (size_t l = 0; l < acc.size(); ++l)
                acc[l] = ImageF(lap.levels[l].width, lap.levels[l].height, 0.0);
        }
        for (size_t l = 0; l < acc.size(); ++l)
            for (size_t i = 0; i < acc[l].data.size(); ++i)
                acc[l].data[i] += lap.levels[l].data[i] * gw[l].data[i];
    }
    return acc;
}

}  // namespace

ImageF fuse_pyramid(const std::vector<ImageF>& l_corr, const std::vector<ImageF>& r_enh,
                    const std::vector<ImageF>& w_l, const std::vector<ImageF>& w_r,
                    const FusionConfig& cfg) {
    cfg.validate();
    check_layers(l_corr, "fuse_pyramid");
    const int K = static_cast<int>(l_corr.size());
    if (static_cast<int>(r_enh.size()) != K || static_cast<int>(w_l.size()) != K ||
        static_cast<int>(w_r.size()) != K)
        throw std::invalid_argument("fuse_pyramid: stack sizes differ");
    for (int k = 0; k < K; ++k)
        if (!r_enh[k].same_size(l_corr[0]) || !w_l[k].same_size(l_corr[0]) ||
            !w_r[k].same_size(l_corr[0]))
            throw std::invalid_argument("fuse_pyramid: dimension mismatch across stacks");
    check_normalized(w_l, "illumination weights");
    check_normalized(w_r, "reflectance weights");

    const int depth = cfg.depth_override ? *cfg.depth_override
                                         : pyramid_depth(l_corr[0].height, l_corr[0].width);

    ImageF out(l_corr[0].width, l_corr[0].height);
    if (cfg.recombine == RecombineMode::separate_then_multiply) {
        Pyramid lp{PyramidKind::laplacian, blend_levels(l_corr, w_l, depth)};
        Pyramid rp{PyramidKind::laplacian, blend_levels(r_enh, w_r, depth)};
        const ImageF lf = collapse(lp);
        const ImageF rf = collapse(rp);
        for (size_t i = 0; i < out.data.size(); ++i)
            out.data[i] = clamp01(lf.data[i] * rf.data[i]);
    } else {
        // Literal per-band product of the weighted illumination and
        // reflectance contributions, summed over k, single collapse.
        std::vector<ImageF> acc;
        for (int k = 0; k < K; ++k) {
            const Pyramid lap_l = laplacian_pyramid(l_corr[k], depth);
            const Pyramid lap_r = laplacian_pyramid(r_enh[k], depth);
            const std::vector<ImageF> gw_l = gaussian_levels(w_l[k], depth + 1);
            const std::vector<ImageF> gw_r = gaussian_levels(w_r[k], depth + 1);
            if (acc.empty()) {
                acc.resize(lap_l.levels.size());
                for (size_t l = 0; l < acc.size(); ++l)
                    acc[l] = ImageF(lap_l.levels[l].width, lap_l.levels[l].height, 0.0);
            }
            for (size_t l = 0; l < acc.size(); ++l)
                for (size_t i = 0; i < acc[l].data.size(); ++i)
                    acc[l].data[i] += lap_l.levels[l].data[i] * gw_l[l].data[i] *
                                      lap_r.levels[l].data[i] * gw_r[l].data[i];
        }
        const ImageF fused = collapse(Pyramid{PyramidKind::laplacian, std::move(acc)});
        for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = clamp01(fused.data[i]);
    }
    return out;
}

}  // namespace svedefog
