#include "svedefog/pyramid.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "svedefog/parallel.hpp"

namespace svedefog {

namespace {

constexpr double kTap0 = 6.0 / 16.0;
constexpr double kTap1 = 4.0 / 16.0;
constexpr double kTap2 = 1.0 / 16.0;

ImageF blur5_h(const ImageF& src) {
    ImageF dst(src.width, src.height);
    const int w = src.width;
    parallel_rows(src.height, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const double* s = src.row(y);
            double* d = dst.row(y);
            for (int x = 0; x < w; ++x) {
                d[x] = kTap2 * (s[mirror_index(x - 2, w)] + s[mirror_index(x + 2, w)]) +
                       kTap1 * (s[mirror_index(x - 1, w)] + s[mirror_index(x + 1, w)]) +
                       kTap0 * s[x];
            }
        }
    });
    return dst;
}

ImageF blur5_v(const ImageF& src) {
    ImageF dst(src.width, src.height);
    const int w = src.width;
    const int h = src.height;
    parallel_rows(h, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const double* m2 = src.row(mirror_index(y - 2, h));
            const double* m1 = src.row(mirror_index(y - 1, h));
            const double* c0 = src.row(y);
            const double* p1 = src.row(mirror_index(y + 1, h));
            const double* p2 = src.row(mirror_index(y + 2, h));
            double* d = dst.row(y);
            for (int x = 0; x < w; ++x)
                d[x] = kTap2 * (m2[x] + p2[x]) + kTap1 * (m1[x] + p1[x]) + kTap0 * c0[x];
        }
    });
    return dst;
}

void check_depth(const ImageF& img, int depth, const char* op) {
    if (depth < 1)
        throw std::invalid_argument(std::string(op) + ": depth must be >= 1");
    const int m = std::min(img.width, img.height);
    // min / 2^(depth-1) >= 2
    if (depth > 30 || (m >> (depth - 1)) < 2)
        throw std::invalid_argument(std::string(op) + ": depth " + std::to_string(depth) +
                                    " too large for " + std::to_string(img.width) + "x" +
                                    std::to_string(img.height) + " image");
}

// 1D upsample weights in sample space; idx mirrored into range.
double up_even(const double* s, int v, int n) {
    return (s[mirror_index(v - 1, n)] + 6.0 * s[v] + s[mirror_index(v + 1, n)]) / 8.0;
}
double up_odd(const double* s, int v, int n) {
    return (s[mirror_index(v, n)] + s[mirror_index(v + 1, n)]) / 2.0;
}

}  // namespace

int pyramid_depth(int h, int w) {
    const int m = std::min(h, w);
    if (m < 8)
        throw std::invalid_argument("pyramid_depth: min dimension " + std::to_string(m) +
                                    " below 8");
    return std::bit_width(static_cast<unsigned>(m)) - 1 - 2;
}

ImageF blur5(const ImageF& img) { return blur5_v(blur5_h(img)); }

ImageF downsample2(const ImageF& img) {
    const ImageF blurred = blur5(img);
    const int dw = (img.width + 1) / 2;
    const int dh = (img.height + 1) / 2;
    ImageF dst(dw, dh);
    for (int y = 0; y < dh; ++y) {
        const double* s = blurred.row(2 * y);
        double* d = dst.row(y);
        for (int x = 0; x < dw; ++x) d[x] = s[2 * x];
    }
    return dst;
}

ImageF upsample2(const ImageF& img, int target_w, int target_h) {
    if (target_w < 2 * img.width - 1 || target_w > 2 * img.width ||
        target_h < 2 * img.height - 1 || target_h > 2 * img.height)
        throw std::invalid_argument("upsample2: target size is not a 2x expansion");

    // Vertical pass: height -> target_h, width unchanged.
    ImageF mid(img.width, target_h);
    const int sh = img.height;
    for (int y = 0; y < target_h; ++y) {
        double* d = mid.row(y);
        if ((y & 1) == 0) {
            const int v = y / 2;
            for (int x = 0; x < img.width; ++x) {
                const double a = img.at(x, mirror_index(v - 1, sh));
                const double b = img.at(x, v);
                const double c = img.at(x, mirror_index(v + 1, sh));
                d[x] = (a + 6.0 * b + c) / 8.0;
            }
        } else {
            const int v = (y - 1) / 2;
            const int vn = mirror_index(v + 1, sh);
            for (int x = 0; x < img.width; ++x)
                d[x] = (img.at(x, v) + img.at(x, vn)) / 2.0;
        }
    }

    // Horizontal pass: width -> target_w.
    ImageF dst(target_w, target_h);
    const int sw = img.width;
    parallel_rows(target_h, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const double* s = mid.row(y);
            double* d = dst.row(y);
            for (int x = 0; x < target_w; ++x)
                d[x] = ((x & 1) == 0) ? up_even(s, x / 2, sw) : up_odd(s, (x - 1) / 2, sw);
        }
    });
    return dst;
}

std::vector<ImageF> gaussian_levels(const ImageF& img, int count) {
    std::vector<ImageF> levels;
    levels.reserve(count);
    levels.push_back(img);
    for (int l = 1; l < count; ++l) levels.push_back(downsample2(levels.back()));
    return levels;
}

Pyramid gaussian_pyramid(const ImageF& img, int depth) {
    check_depth(img, depth, "gaussian_pyramid");
    return Pyramid{PyramidKind::gaussian, gaussian_levels(img, depth)};
}

Pyramid laplacian_pyramid(const ImageF& img, int depth) {
    check_depth(img, depth, "laplacian_pyramid");
    std::vector<ImageF> gauss = gaussian_levels(img, depth + 1);
    Pyramid pyr;
    pyr.kind = PyramidKind::laplacian;
    pyr.levels.reserve(depth + 1);
    for (int l = 0; l < depth; ++l) {
        const ImageF up = upsample2(gauss[l + 1], gauss[l].width, gauss[l].height);
        ImageF detail(gauss[l].width, gauss[l].height);
        for (size_t i = 0; i < detail.data.size(); ++i)
            detail.data[i] = gauss[l].data[i] - up.data[i];
        pyr.levels.push_back(std::move(detail));
    }
    pyr.levels.push_back(std::move(gauss.back()));
    return pyr;
}

ImageF collapse(const Pyramid& pyr) {
    if (pyr.kind != PyramidKind::laplacian)
        throw std::invalid_argument("collapse: requires a laplacian pyramid");
    if (pyr.levels.empty())
        throw std::invalid_argument("collapse: empty pyramid");
    ImageF acc = pyr.levels.back();
    for (int l = static_cast<int>(pyr.levels.size()) - 2; l >= 0; --l) {
        const ImageF& detail = pyr.levels[l];
        ImageF up = upsample2(acc, detail.width, detail.height);
        for (size_t i = 0; i < up.data.size(); ++i) up.data[i] += detail.data[i];
        acc = std::move(up);
    }
    return acc;
}

}  // namespace svedefog
