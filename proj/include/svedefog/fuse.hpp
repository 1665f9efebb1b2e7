// fuse.hpp - dual-channel weight estimation and adaptive pyramid fusion.
//
// Illumination weights blend two cues, multiplied then renormalized:
//   histogram weight  ~ inverse gradient of each layer's cumulative
//                       histogram at the pixel's intensity
//   gaussian weight   ~ exp(-(L' - u_k)^2 / (2 sigma^2)) around each
//                       exposure's paired-region geometric mean
// Reflectance weights score relative 3x3 edge strength. Fusion blends each
// channel's Laplacian pyramid against the weights' Gaussian pyramids; the
// default recombination collapses the channels separately and multiplies
// (I = L * R), the literal per-band product form is kept behind a flag.

#pragma once

#include <optional>
#include <vector>

#include "svedefog/enhance.hpp"
#include "svedefog/image.hpp"

namespace svedefog {

struct WeightStack {
    std::vector<ImageF> w_l;
    std::vector<ImageF> w_r;
    bool normalized = false;
};

enum class RecombineMode { separate_then_multiply, literal_per_band };

struct FusionConfig {
    double sigma_g = 0.2;
    int hist_bins = 256;
    RecombineMode recombine = RecombineMode::separate_then_multiply;
    std::optional<int> depth_override;

    void validate() const;
};

// Per-pixel sum over k is 1 (to the epsilon guards); weights >= 0.
std::vector<ImageF> illum_weight_hist(const std::vector<ImageF>& l_corr,
                                      int hist_bins = 256);

std::vector<ImageF> illum_weight_gauss(const std::vector<ImageF>& l_corr,
                                       const RegionMap& regions, double sigma_g);

// Composite illumination weight: hist * gauss, renormalized per pixel;
// an all-zero product falls back to uniform 1/K at that pixel.
std::vector<ImageF> illum_weight(const std::vector<ImageF>& l_corr,
                                 const RegionMap& regions, const FusionConfig& cfg);

std::vector<ImageF> refl_weight(const std::vector<ImageF>& r_enh);

// Multi-scale blend of corrected illumination and enhanced reflectance under
// their weight maps. Output clamped to [0,1]. Weights must be normalized
// (per-pixel sums = 1) and all stacks must share dimensions.
ImageF fuse_pyramid(const std::vector<ImageF>& l_corr, const std::vector<ImageF>& r_enh,
                    const std::vector<ImageF>& w_l, const std::vector<ImageF>& w_r,
                    const FusionConfig& cfg);

}  // namespace svedefog
