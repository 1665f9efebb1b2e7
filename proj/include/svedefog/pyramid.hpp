// pyramid.hpp - Gaussian/Laplacian pyramids used by the fusion stages.
//
// Conventions, fixed for reproducibility:
//   kernel      5-tap [1,4,6,4,1]/16, applied separably
//   boundaries  symmetric (mirror) extension
//   downsample  blur then keep even indices; size ceil(n/2)
//   upsample    zero-insertion followed by the kernel at 2x gain, written in
//               sample space (even taps [1,6,1]/8, odd taps [1,1]/2), cropped
//               to the recorded target size
//
// collapse(laplacian_pyramid(img, d)) reproduces img to ~1e-6.

#pragma once

#include <vector>

#include "svedefog/image.hpp"

namespace svedefog {

enum class PyramidKind { gaussian, laplacian };

struct Pyramid {
    PyramidKind kind = PyramidKind::gaussian;
    // gaussian: `depth` levels, level 0 = input.
    // laplacian: `depth` detail levels followed by the Gaussian residual.
    std::vector<ImageF> levels;
};

// Decomposition depth from image size: floor(log2(min(h,w))) - 2.
// Requires min(h,w) >= 8.
int pyramid_depth(int h, int w);

// Requires depth >= 1 and min(w,h) / 2^(depth-1) >= 2.
Pyramid gaussian_pyramid(const ImageF& img, int depth);
Pyramid laplacian_pyramid(const ImageF& img, int depth);

// Rebuilds the source image from a laplacian pyramid.
ImageF collapse(const Pyramid& pyr);

// Building blocks, exposed for the fusion stage and tests.
ImageF blur5(const ImageF& img);
ImageF downsample2(const ImageF& img);  // blur + decimate
ImageF upsample2(const ImageF& img, int target_w, int target_h);

// Gaussian levels without the public-depth validation; used internally for
// weight pyramids whose depth is already pinned by the image pyramid.
std::vector<ImageF> gaussian_levels(const ImageF& img, int count);

}  // namespace svedefog
