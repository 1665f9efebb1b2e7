#include "svedefog/hazemap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace svedefog {

namespace {

constexpr double kVarEps = 1e-6;

void check_stack(const ExposureStack& stack, int min_k, const char* op) {
    if (stack.k() < min_k)
        throw std::invalid_argument(std::string(op) + ": needs at least " +
                                    std::to_string(min_k) + " exposures");
    for (const ImageF& img : stack.images)
        if (!img.same_size(stack.images[0]))
            throw std::invalid_argument(std::string(op) + ": exposure dimensions differ");
}

// Central differences inside, one-sided at the borders.
ImageF gradient_magnitude(const ImageF& img) {
    const int w = img.width, h = img.height;
    ImageF out(w, h);
    for (int y = 0; y < h; ++y) {
        const double* up = img.row(y > 0 ? y - 1 : 0);
        const double* cur = img.row(y);
        const double* dn = img.row(y < h - 1 ? y + 1 : h - 1);
        const double dy_scale = (y > 0 && y < h - 1) ? 0.5 : 1.0;
        double* d = out.row(y);
        for (int x = 0; x < w; ++x) {
            const int xl = x > 0 ? x - 1 : 0;
            const int xr = x < w - 1 ? x + 1 : w - 1;
            const double dx_scale = (x > 0 && x < w - 1) ? 0.5 : 1.0;
            const double gx = (cur[xr] - cur[xl]) * dx_scale;
            const double gy = (dn[x] - up[x]) * dy_scale;
            d[x] = std::sqrt(gx * gx + gy * gy);
        }
    }
    return out;
}

ImageF spatial_extreme(const ImageF& img, int radius, bool take_max) {
    if (radius <= 0) return img;
    const int w = img.width, h = img.height;
    // Separable: rows then columns.
    ImageF mid(w, h), out(w, h);
    for (int y = 0; y < h; ++y) {
        const double* s = img.row(y);
        double* d = mid.row(y);
        for (int x = 0; x < w; ++x) {
            double v = s[x];
            for (int o = std::max(0, x - radius); o <= std::min(w - 1, x + radius); ++o)
                v = take_max ? std::max(v, s[o]) : std::min(v, s[o]);
            d[x] = v;
        }
    }
    for (int y = 0; y < h; ++y) {
        double* d = out.row(y);
        for (int x = 0; x < w; ++x) {
            double v = mid.at(x, y);
            for (int o = std::max(0, y - radius); o <= std::min(h - 1, y + radius); ++o)
                v = take_max ? std::max(v, mid.at(x, o)) : std::min(v, mid.at(x, o));
            d[x] = v;
        }
    }
    return out;
}

}  // namespace

void HazeParams::validate() const {
    const double sum = alpha + beta + gamma + sigma;
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("HazeParams: combination weights must sum to 1, got " +
                                    std::to_string(sum));
    if (alpha < 0 || beta < 0 || gamma < 0 || sigma < 0)
        throw std::invalid_argument("HazeParams: combination weights must be >= 0");
    if (eps_bright <= 0)
        throw std::invalid_argument("HazeParams: eps_bright must be > 0");
    if (patch_radius < 0)
        throw std::invalid_argument("HazeParams: patch_radius must be >= 0");
}

ImageF brightness_feature(const ExposureStack& stack) {
    check_stack(stack, 2, "brightness_feature");
    const int K = stack.k();
    std::vector<double> mu(K);
    for (int k = 0; k < K; ++k) mu[k] = mean(stack.images[k]);

    ImageF out(stack.width(), stack.height());
    const double inv_k = 1.0 / K;
    for (size_t i = 0; i < out.data.size(); ++i) {
        double acc = 0.0;
        for (int k = 0; k < K; ++k) {
            const double t = mu[k] / 2.0;
            const double dev = std::max(stack.images[k].data[i], t) - mu[k];
            acc += dev * dev;
        }
        out.data[i] = inv_k * std::sqrt(acc);
    }
    return out;
}

ImageF weber_contrast_feature(const ExposureStack& stack) {
    check_stack(stack, 1, "weber_contrast_feature");
    const int K = stack.k();
    ImageF out(stack.width(), stack.height(), 0.0);
    for (int k = 0; k < K; ++k) {
        const ImageF grad = gradient_magnitude(stack.images[k]);
        for (size_t i = 0; i < out.data.size(); ++i)
            out.data[i] += grad.data[i] / (stack.images[k].data[i] + 1.0);
    }
    for (double& v : out.data) v /= K;
    return out;
}

std::pair<ImageF, ImageF> channels(const ExposureStack& stack, int patch_radius) {
    check_stack(stack, 1, "channels");
    if (patch_radius < 0) throw std::invalid_argument("channels: patch_radius must be >= 0");
    ImageF dark = stack.images[0];
    ImageF bright = stack.images[0];
    for (int k = 1; k < stack.k(); ++k) {
        for (size_t i = 0; i < dark.data.size(); ++i) {
            dark.data[i] = std::min(dark.data[i], stack.images[k].data[i]);
            bright.data[i] = std::max(bright.data[i], stack.images[k].data[i]);
        }
    }
    dark = spatial_extreme(dark, patch_radius, /*take_max=*/false);
    bright = spatial_extreme(bright, patch_radius, /*take_max=*/true);
    return {std::move(dark), std::move(bright)};
}

ImageF contrast_feature(const ImageF& dark, const ImageF& bright, double eps_bright) {
    if (!dark.same_size(bright))
        throw std::invalid_argument("contrast_feature: channel dimensions differ");
    if (eps_bright <= 0.0)
        throw std::invalid_argument("contrast_feature: eps_bright must be > 0");
    ImageF out(dark.width, dark.height);
    for (size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = 1.0 - dark.data[i] / std::max(bright.data[i], eps_bright);
    return out;
}

ImageF variance_feature(const ExposureStack& stack, bool* all_zero) {
    check_stack(stack, 2, "variance_feature");
    const int K = stack.k();
    const size_t npix = stack.images[0].pixel_count();

    // Population variance across exposures, two-pass for stability.
    ImageF var(stack.width(), stack.height());
    double max_var = 0.0;
    for (size_t i = 0; i < npix; ++i) {
        double m = 0.0;
        for (int k = 0; k < K; ++k) m += stack.images[k].data[i];
        m /= K;
        double acc = 0.0;
        for (int k = 0; k < K; ++k) {
            const double d = stack.images[k].data[i] - m;
            acc += d * d;
        }
        var.data[i] = acc / K;
        max_var = std::max(max_var, var.data[i]);
    }

    if (all_zero) *all_zero = (max_var == 0.0);
    if (max_var == 0.0) return ImageF(stack.width(), stack.height(), 0.0);

    // Geometric mean over max(Var, eps); zero-variance pixels contribute eps.
    std::vector<double> logs(npix);
    for (size_t i = 0; i < npix; ++i) logs[i] = std::log(std::max(var.data[i], kVarEps));
    const double geo = std::exp(pairwise_sum(logs) / static_cast<double>(npix));

    ImageF out(stack.width(), stack.height());
    for (size_t i = 0; i < npix; ++i)
        out.data[i] = (var.data[i] - geo) / (geo + kVarEps);
    return out;
}

ImageF normalize_feature(const ImageF& f, double c, FeatureOrientation orientation) {
    if (!(c > 0.0)) throw std::invalid_argument("normalize_feature: c must be > 0");
    ImageF out(f.width, f.height);
    const bool flip = orientation == FeatureOrientation::haze_increasing;
    for (size_t i = 0; i < f.data.size(); ++i) {
        const double m = std::exp(-f.data[i] * f.data[i] / c);
        out.data[i] = flip ? 1.0 - m : m;
    }
    return out;
}

namespace {

double auto_scale(const ImageF& f, double c_override) {
    if (c_override > 0.0) return c_override;
    std::vector<double> sq(f.data.size());
    for (size_t i = 0; i < sq.size(); ++i) sq[i] = f.data[i] * f.data[i];
    const double msq = pairwise_sum(sq) / static_cast<double>(sq.size());
    return std::max(2.0 * msq, 1e-12);
}

}  // namespace

std::pair<HazeMap, FeatureMaps> haze_map(const ExposureStack& stack,
                                         const HazeParams& params) {
    params.validate();
    check_stack(stack, 2, "haze_map");

    FeatureMaps fm;
    fm.bi_raw = brightness_feature(stack);
    fm.wc_raw = weber_contrast_feature(stack);
    auto [dark, bright] = channels(stack, params.patch_radius);
    fm.cf_raw = contrast_feature(dark, bright, params.eps_bright);
    fm.v_raw = variance_feature(stack, &fm.v_degenerate);

    fm.bi = normalize_feature(fm.bi_raw, auto_scale(fm.bi_raw, params.c_bi),
                              FeatureOrientation::haze_increasing);
    fm.wc = normalize_feature(fm.wc_raw, auto_scale(fm.wc_raw, params.c_wc),
                              FeatureOrientation::haze_decreasing);
    fm.cf = normalize_feature(fm.cf_raw, auto_scale(fm.cf_raw, params.c_cf),
                              FeatureOrientation::haze_decreasing);
    fm.v = normalize_feature(fm.v_raw, auto_scale(fm.v_raw, params.c_v),
                             FeatureOrientation::haze_increasing);

    HazeMap map;
    map.f = ImageF(stack.width(), stack.height());
    for (size_t i = 0; i < map.f.data.size(); ++i)
        map.f.data[i] = clamp01(params.alpha * fm.bi.data[i] + params.beta * fm.wc.data[i] +
                                params.gamma * fm.cf.data[i] + params.sigma * fm.v.data[i]);
    return {std::move(map), std::move(fm)};
}

}  // namespace svedefog
