// hazemap.hpp - data-driven haze distribution perception.
//
// Four per-pixel features are extracted from the exposure stack, squashed
// through exp(-f^2/c), oriented so each rises with haze likelihood, and
// blended into a single map F in [0,1]:
//   BI  mean thresholded brightness deviation across exposures
//   WC  mean Weber contrast (gradient over intensity + 1)
//   CF  1 - dark/bright channel ratio across exposures
//   V   cross-exposure variance against its image-wide geometric mean

#pragma once

#include <utility>

#include "svedefog/image.hpp"
#include "svedefog/sve.hpp"

namespace svedefog {

struct FeatureMaps {
    ImageF bi_raw, wc_raw, cf_raw, v_raw;
    ImageF bi, wc, cf, v;  // normalized + oriented, in [0,1]
    bool v_degenerate = false;  // every pixel had zero cross-exposure variance
};

struct HazeParams {
    // Combination weights; must sum to 1.
    double alpha = 0.2;  // BI
    double beta = 0.2;   // WC
    double gamma = 0.3;  // CF
    double sigma = 0.3;  // V

    // Per-feature mapping constants for exp(-f^2/c); 0 selects the
    // auto scale 2*mean(f^2).
    double c_bi = 0.0, c_wc = 0.0, c_cf = 0.0, c_v = 0.0;

    // Guard for the bright-channel division, one quantization step of the
    // source bit depth on [0,1] data.
    double eps_bright = 1.0 / 65535.0;

    // Neighborhood radius for the dark/bright channels (0 = pure
    // cross-exposure extrema).
    int patch_radius = 0;

    void validate() const;
};

struct HazeMap {
    ImageF f;  // in [0,1], larger = more likely haze
};

ImageF brightness_feature(const ExposureStack& stack);
ImageF weber_contrast_feature(const ExposureStack& stack);

// dark(x) <= bright(x) everywhere; extrema over exposures and the
// (2r+1)^2 neighborhood.
std::pair<ImageF, ImageF> channels(const ExposureStack& stack, int patch_radius);

ImageF contrast_feature(const ImageF& dark, const ImageF& bright,
                        double eps_bright = 1.0 / 65535.0);

// all_zero (optional) reports the degenerate all-constant-stack case, where
// V is defined as 0 everywhere.
ImageF variance_feature(const ExposureStack& stack, bool* all_zero = nullptr);

enum class FeatureOrientation { haze_increasing, haze_decreasing };

// exp(-f^2/c), flipped to 1-m for haze-increasing features so the output
// always rises with haze likelihood.
ImageF normalize_feature(const ImageF& f, double c, FeatureOrientation orientation);

std::pair<HazeMap, FeatureMaps> haze_map(const ExposureStack& stack,
                                         const HazeParams& params);

}  // namespace svedefog
