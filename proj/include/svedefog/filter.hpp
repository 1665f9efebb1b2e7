// filter.hpp - box statistics and the edge-weighted self-guided smoother
// behind the Retinex decomposition and reflectance enhancement.

#pragma once

#include "svedefog/image.hpp"

namespace svedefog {

// Mean over the (2r+1)^2 window, truncated at borders (divides by the
// actual in-bounds pixel count, so constants are preserved exactly).
ImageF box_mean(const ImageF& img, int radius);

// Population variance over the same window: E[x^2] - E[x]^2, floored at 0.
ImageF local_variance(const ImageF& img, int radius);

// Self-guided filter (guide == input). When edge_weighted is set, the
// regularization is divided per pixel by
//   w(x) = (var(x) + eps) / (mean(var) + eps)
// so high-variance (edge) pixels are smoothed less.
ImageF guided_smooth(const ImageF& img, int radius, double reg, bool edge_weighted);

}  // namespace svedefog
