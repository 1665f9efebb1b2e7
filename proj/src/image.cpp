#include "svedefog/image.hpp"

#include <cmath>
#include <stdexcept>

namespace svedefog {

ImageF normalize(const ImageU16& img) {
    if (img.bit_depth < 8 || img.bit_depth > 16)
        throw std::invalid_argument("normalize: bit_depth must be in [8,16], got " +
                                    std::to_string(img.bit_depth));
    const double scale = 1.0 / ((1u << img.bit_depth) - 1u);
    ImageF out(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = img.data[i] * scale;
    return out;
}

ImageU16 quantize(const ImageF& img, int bit_depth) {
    if (bit_depth < 8 || bit_depth > 16)
        throw std::invalid_argument("quantize: bit_depth must be in [8,16]");
    const double maxval = (1u << bit_depth) - 1u;
    ImageU16 out(img.width, img.height, bit_depth);
    for (size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = static_cast<uint16_t>(std::lround(clamp01(img.data[i]) * maxval));
    return out;
}

double pairwise_sum(const double* v, size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

double mean(const ImageF& img) {
    if (img.empty()) throw std::invalid_argument("mean: empty image");
    return pairwise_sum(img.data) / static_cast<double>(img.data.size());
}

void require_finite(const ImageF& img, const std::string& what) {
    for (double v : img.data)
        if (!std::isfinite(v))
            throw std::runtime_error(what + ": non-finite sample");
}

}  // namespace svedefog
