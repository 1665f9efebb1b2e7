#include "svedefog/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "svedefog/filter.hpp"

namespace svedefog {

namespace {

constexpr double kGeoEps = 1e-6;

}  // namespace

size_t RegionMap::region_size(int m) const {
    size_t n = 0;
    for (int v : labels) n += (v == m);
    return n;
}

RegionMap segment(const HazeMap& haze, int num_regions) {
    if (num_regions < 1) throw std::invalid_argument("segment: M must be >= 1");
    const ImageF& f = haze.f;
    if (f.empty()) throw std::invalid_argument("segment: empty haze map");

    const auto [lo_it, hi_it] = std::minmax_element(f.data.begin(), f.data.end());
    const double lo = *lo_it, hi = *hi_it;

    RegionMap rm;
    rm.width = f.width;
    rm.height = f.height;
    rm.num_regions = num_regions;
    rm.degenerate = (hi == lo);
    rm.thresholds.resize(num_regions + 1);
    for (int m = 1; m <= num_regions + 1; ++m)
        rm.thresholds[m - 1] =
            static_cast<double>(num_regions - m + 1) / num_regions * (hi - lo) + lo;

    rm.labels.resize(f.data.size());
    for (size_t i = 0; i < f.data.size(); ++i) {
        const double v = f.data[i];
        int label = num_regions;
        for (int m = 1; m < num_regions; ++m) {
            // Region m spans [theta_{m+1}, theta_m]; ties go to lower m.
            if (v >= rm.thresholds[m]) {
                label = m;
                break;
            }
        }
        rm.labels[i] = label;
    }
    return rm;
}

LayerPair decompose(const ImageF& img, int radius, double reg) {
    LayerPair lp;
    lp.l = guided_smooth(img, radius, reg, /*edge_weighted=*/true);
    for (double& v : lp.l.data) v = std::clamp(v, kIlluminationFloor, 1.0);
    lp.r = ImageF(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i)
        lp.r.data[i] = img.data[i] / lp.l.data[i];
    return lp;
}

std::optional<double> regional_geomean(const ImageF& l, const RegionMap& regions, int m) {
    if (m < 1 || m > regions.num_regions)
        throw std::invalid_argument("regional_geomean: region index out of range");
    if (static_cast<int>(l.width) != regions.width || static_cast<int>(l.height) != regions.height)
        throw std::invalid_argument("regional_geomean: layer/region dimensions differ");
    std::vector<double> logs;
    logs.reserve(l.data.size());
    for (size_t i = 0; i < l.data.size(); ++i)
        if (regions.labels[i] == m)
            logs.push_back(std::log(std::max(l.data[i], kGeoEps)));
    if (logs.empty()) return std::nullopt;
    return std::exp(pairwise_sum(logs) / static_cast<double>(logs.size()));
}

double global_geomean(const ImageF& l) {
    std::vector<double> logs(l.data.size());
    for (size_t i = 0; i < logs.size(); ++i)
        logs[i] = std::log(std::max(l.data[i], kGeoEps));
    return std::exp(pairwise_sum(logs) / static_cast<double>(logs.size()));
}

GammaSchedule gamma_schedule(const std::vector<ImageF>& illum_layers,
                             const RegionMap& regions, const std::vector<double>& zeta,
                             bool use_regions) {
    const int K = static_cast<int>(illum_layers.size());
    if (K == 0) throw std::invalid_argument("gamma_schedule: no layers");
    if (static_cast<int>(zeta.size()) != K)
        throw std::invalid_argument("gamma_schedule: zeta count must match K");
    if (use_regions && regions.num_regions != K)
        throw std::invalid_argument("gamma_schedule: requires M == K");
    for (double z : zeta)
        if (!(z > 0.0 && z <= 1.0))
            throw std::invalid_argument("gamma_schedule: zeta must lie in (0,1]");

    GammaSchedule sched;
    sched.zeta = zeta;
    sched.geomean.resize(K);
    sched.gamma.resize(K);
    sched.used_fallback.assign(K, false);
    for (int k = 1; k <= K; ++k) {
        double g;
        if (use_regions) {
            const int m = K - k + 1;  // highest-haze region pairs with last exposure
            const auto regional = regional_geomean(illum_layers[k - 1], regions, m);
            if (regional) {
                g = *regional;
            } else {
                g = global_geomean(illum_layers[k - 1]);
                sched.used_fallback[k - 1] = true;
            }
        } else {
            g = global_geomean(illum_layers[k - 1]);
        }
        sched.geomean[k - 1] = g;
        sched.gamma[k - 1] = std::pow(2.0 + g, 2.0 * g - zeta[k - 1]);
    }
    return sched;
}

ImageF apply_gamma(const ImageF& l, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("apply_gamma: gamma must be > 0");
    ImageF out(l.width, l.height);
    for (size_t i = 0; i < l.data.size(); ++i)
        out.data[i] = std::pow(l.data[i], gamma);
    return out;
}

ImageF enhance_reflectance(const ImageF& r, int radius, double reg, double gain) {
    if (gain < 1.0) throw std::invalid_argument("enhance_reflectance: gain must be >= 1");
    const ImageF base = guided_smooth(r, radius, reg, /*edge_weighted=*/true);
    ImageF out(r.width, r.height);
    for (size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = std::max(0.0, r.data[i] + (gain - 1.0) * (r.data[i] - base.data[i]));
    return out;
}

}  // namespace svedefog
