// enhance.hpp - haze-driven segmentation and sub-regional adaptive
// enhancement.
//
// The haze map is partitioned into M bands between thresholds
//   theta_m = (M - m + 1)/M * (max F - min F) + min F,   m = 1..M+1
// so region 1 is anchored at max F (most haze). Each exposure is decomposed
// into illumination and reflectance (I = L * R) with an edge-weighted
// self-guided filter; illumination gets an adaptive gamma
//   gamma_k = (2 + G)^(2G - zeta_k),  G = geometric mean of L_k over the
// paired region m = K - k + 1; reflectance gets detail amplification.

#pragma once

#include <optional>
#include <vector>

#include "svedefog/hazemap.hpp"
#include "svedefog/image.hpp"

namespace svedefog {

struct RegionMap {
    int width = 0;
    int height = 0;
    int num_regions = 0;               // M
    std::vector<int> labels;           // per pixel, 1..M; 1 = most haze
    std::vector<double> thresholds;    // theta_1..theta_{M+1}, non-increasing
    bool degenerate = false;           // constant F: everything landed in region 1

    int label(int x, int y) const { return labels[static_cast<size_t>(y) * width + x]; }
    size_t region_size(int m) const;
};

struct LayerPair {
    ImageF l;  // illumination, in [eps_l, 1]
    ImageF r;  // reflectance, >= 0, unclamped above 1
};

struct GammaSchedule {
    std::vector<double> zeta;       // reference brightness per exposure
    std::vector<double> geomean;    // G fed into each exponent
    std::vector<double> gamma;      // resulting exponents, all > 0
    std::vector<bool> used_fallback;  // paired region empty -> global geomean
};

// Boundary ties go to the lower-index (higher-haze) region; every pixel is
// assigned exactly one label.
RegionMap segment(const HazeMap& haze, int num_regions);

inline constexpr double kIlluminationFloor = 1e-4;

// Retinex split: L = clamped edge-aware smoothing, R = I / L. L*R
// reconstructs I wherever I > 0.
LayerPair decompose(const ImageF& img, int radius = 8, double reg = 1e-2);

// Geometric mean of L over region m (1e-6 floor inside the log);
// empty region yields nullopt.
std::optional<double> regional_geomean(const ImageF& l, const RegionMap& regions, int m);

// Whole-image geometric mean with the same floor.
double global_geomean(const ImageF& l);

// Computes gamma_k for every exposure. use_regions=false is the Module A
// ablation: every G comes from the whole-image geometric mean.
GammaSchedule gamma_schedule(const std::vector<ImageF>& illum_layers,
                             const RegionMap& regions, const std::vector<double>& zeta,
                             bool use_regions = true);

// L^gamma per pixel; monotone on (0,1] for gamma > 0.
ImageF apply_gamma(const ImageF& l, double gamma);

// R' = r + (gain - 1) * (r - base), base being the same edge-aware smoothing
// used by decompose; clamped at 0. gain 1 is the exact identity.
ImageF enhance_reflectance(const ImageF& r, int radius = 8, double reg = 1e-2,
                           double gain = 1.5);

}  // namespace svedefog
