// image.hpp - grayscale image buffers shared by every pipeline stage.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace svedefog {

// Single-channel floating-point image, row-major, nominal range [0,1].
// Values outside [0,1] are allowed while in radiance space (HDR scenes,
// unclamped reflectance); clamping happens only at export.
struct ImageF {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    ImageF() = default;
    ImageF(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

    double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }

    double* row(int y) { return data.data() + static_cast<size_t>(y) * width; }
    const double* row(int y) const { return data.data() + static_cast<size_t>(y) * width; }

    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
    bool empty() const { return data.empty(); }
    bool same_size(const ImageF& o) const { return width == o.width && height == o.height; }
};

// Integer sensor frame. Samples occupy the low `bit_depth` bits.
struct ImageU16 {
    int width = 0;
    int height = 0;
    int bit_depth = 16;  // effective bits, 8..16
    std::vector<uint16_t> data;

    ImageU16() = default;
    ImageU16(int w, int h, int bits, uint16_t fill = 0)
        : width(w), height(h), bit_depth(bits),
          data(static_cast<size_t>(w) * h, fill) {}

    uint16_t& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    uint16_t at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }

    uint16_t max_value() const { return static_cast<uint16_t>((1u << bit_depth) - 1u); }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

// Scale integer samples to [0,1] by 1/(2^bit_depth - 1).
ImageF normalize(const ImageU16& img);

// Quantize [0,1] floats to the given bit depth (values clamped first).
ImageU16 quantize(const ImageF& img, int bit_depth);

// Fixed-order pairwise summation; deterministic regardless of data source.
double pairwise_sum(const double* v, size_t n);
double pairwise_sum(const std::vector<double>& v);

// Mean of all samples (pairwise reduction).
double mean(const ImageF& img);

// Throws std::runtime_error naming `what` if any sample is NaN/Inf.
void require_finite(const ImageF& img, const std::string& what);

// Mirror (symmetric half-sample) index into [0, n).
inline int mirror_index(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace svedefog
