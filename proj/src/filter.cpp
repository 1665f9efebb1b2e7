#include "svedefog/filter.hpp"

#include <algorithm>
#include <stdexcept>

namespace svedefog {

namespace {

constexpr double kEdgeEps = 1e-6;

// Summed-area table with a zero top row/left column.
std::vector<double> integral(const ImageF& img) {
    const int w = img.width, h = img.height;
    std::vector<double> sat(static_cast<size_t>(w + 1) * (h + 1), 0.0);
    for (int y = 0; y < h; ++y) {
        const double* src = img.row(y);
        double rowsum = 0.0;
        for (int x = 0; x < w; ++x) {
            rowsum += src[x];
            sat[static_cast<size_t>(y + 1) * (w + 1) + (x + 1)] =
                sat[static_cast<size_t>(y) * (w + 1) + (x + 1)] + rowsum;
        }
    }
    return sat;
}

}  // namespace

ImageF box_mean(const ImageF& img, int radius) {
    if (radius < 0) throw std::invalid_argument("box_mean: negative radius");
    if (radius == 0) return img;
    const int w = img.width, h = img.height;
    const std::vector<double> sat = integral(img);
    auto rect = [&](int x0, int y0, int x1, int y1) {
        // inclusive rect [x0,x1] x [y0,y1]
        return sat[static_cast<size_t>(y1 + 1) * (w + 1) + (x1 + 1)] -
               sat[static_cast<size_t>(y0) * (w + 1) + (x1 + 1)] -
               sat[static_cast<size_t>(y1 + 1) * (w + 1) + x0] +
               sat[static_cast<size_t>(y0) * (w + 1) + x0];
    };
    ImageF out(w, h);
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - radius);
        const int y1 = std::min(h - 1, y + radius);
        double* d = out.row(y);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - radius);
            const int x1 = std::min(w - 1, x + radius);
            const double area = static_cast<double>(x1 - x0 + 1) * (y1 - y0 + 1);
            d[x] = rect(x0, y0, x1, y1) / area;
        }
    }
    return out;
}

ImageF local_variance(const ImageF& img, int radius) {
    ImageF sq(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i) sq.data[i] = img.data[i] * img.data[i];
    const ImageF m = box_mean(img, radius);
    const ImageF msq = box_mean(sq, radius);
    ImageF var(img.width, img.height);
    for (size_t i = 0; i < var.data.size(); ++i)
        var.data[i] = std::max(0.0, msq.data[i] - m.data[i] * m.data[i]);
    return var;
}

ImageF guided_smooth(const ImageF& img, int radius, double reg, bool edge_weighted) {
    if (reg <= 0.0) throw std::invalid_argument("guided_smooth: regularization must be > 0");
    if (radius < 1) throw std::invalid_argument("guided_smooth: radius must be >= 1");

    const ImageF m = box_mean(img, radius);
    ImageF sq(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i) sq.data[i] = img.data[i] * img.data[i];
    const ImageF msq = box_mean(sq, radius);

    ImageF var(img.width, img.height);
    for (size_t i = 0; i < var.data.size(); ++i)
        var.data[i] = std::max(0.0, msq.data[i] - m.data[i] * m.data[i]);

    double mean_var = 0.0;
    if (edge_weighted) mean_var = pairwise_sum(var.data) / static_cast<double>(var.data.size());

    ImageF a(img.width, img.height), b(img.width, img.height);
    for (size_t i = 0; i < var.data.size(); ++i) {
        double lambda = reg;
        if (edge_weighted) {
            const double wgt = (var.data[i] + kEdgeEps) / (mean_var + kEdgeEps);
            lambda = reg / wgt;
        }
        const double ai = var.data[i] / (var.data[i] + lambda);
        a.data[i] = ai;
        b.data[i] = (1.0 - ai) * m.data[i];
    }

    const ImageF abar = box_mean(a, radius);
    const ImageF bbar = box_mean(b, radius);
    ImageF out(img.width, img.height);
    for (size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = abar.data[i] * img.data[i] + bbar.data[i];
    return out;
}

}  // namespace svedefog
