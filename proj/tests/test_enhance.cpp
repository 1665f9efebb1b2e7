#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <random>

#include "svedefog/enhance.hpp"
#include "svedefog/filter.hpp"

using namespace svedefog;

namespace {

ImageF random_image(int w, int h, uint32_t seed, double lo = 0.0, double hi = 1.0) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> uni(lo, hi);
    ImageF img(w, h);
    for (double& v : img.data) v = uni(gen);
    return img;
}

HazeMap haze_of(ImageF f) { return HazeMap{std::move(f)}; }

// Naive box mean: direct window sums, border truncated. Oracle for the
// SAT-based implementation.
ImageF naive_box(const ImageF& img, int r) {
    ImageF out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            int n = 0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    const int xx = x + dx, yy = y + dy;
                    if (xx < 0 || yy < 0 || xx >= img.width || yy >= img.height) continue;
                    acc += img.at(xx, yy);
                    ++n;
                }
            out.at(x, y) = acc / n;
        }
    return out;
}

// Direct transcription of the edge-weighted self-guided filter.
ImageF naive_guided(const ImageF& img, int r, double reg) {
    const ImageF m = naive_box(img, r);
    ImageF sq(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i) sq.data[i] = img.data[i] * img.data[i];
    const ImageF msq = naive_box(sq, r);
    ImageF var(img.width, img.height);
    double mean_var = 0.0;
    for (size_t i = 0; i < var.data.size(); ++i) {
        var.data[i] = std::max(0.0, msq.data[i] - m.data[i] * m.data[i]);
        mean_var += var.data[i];
    }
    mean_var /= static_cast<double>(var.data.size());
    ImageF a(img.width, img.height), b(img.width, img.height);
    for (size_t i = 0; i < var.data.size(); ++i) {
        const double wgt = (var.data[i] + 1e-6) / (mean_var + 1e-6);
        const double ai = var.data[i] / (var.data[i] + reg / wgt);
        a.data[i] = ai;
        b.data[i] = (1.0 - ai) * m.data[i];
    }
    const ImageF abar = naive_box(a, r);
    const ImageF bbar = naive_box(b, r);
    ImageF out(img.width, img.height);
    for (size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = abar.data[i] * img.data[i] + bbar.data[i];
    return out;
}

int transition_width(const ImageF& img, int row, double lo, double hi) {
    const double pad = 0.05 * (hi - lo);
    int n = 0;
    for (int x = 0; x < img.width; ++x) {
        const double v = img.at(x, row);
        if (v > lo + pad && v < hi - pad) ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("segment: uniform ramp splits into four equal bands") {
    ImageF f(64, 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 64; ++x) f.at(x, y) = static_cast<double>(x) / 63.0;
    const RegionMap rm = segment(haze_of(f), 4);
    CHECK_FALSE(rm.degenerate);
    REQUIRE(rm.thresholds.size() == 5);
    CHECK(rm.thresholds[0] == doctest::Approx(1.0));
    CHECK(rm.thresholds[1] == doctest::Approx(0.75));
    CHECK(rm.thresholds[4] == doctest::Approx(0.0));
    // quartile oracle: 16 columns per band, high F = region 1
    for (int m = 1; m <= 4; ++m) CHECK(rm.region_size(m) == 16u * 16u);
    CHECK(rm.label(63, 0) == 1);
    CHECK(rm.label(0, 0) == 4);
}

TEST_CASE("segment: constant map degenerates to a single region") {
    const RegionMap rm = segment(haze_of(ImageF(8, 8, 0.7)), 4);
    CHECK(rm.degenerate);
    for (int v : rm.labels) CHECK(v == 1);
    CHECK(rm.region_size(1) == 64u);
    CHECK(rm.region_size(2) == 0u);
}

TEST_CASE("segment: M=1 puts everything in one region") {
    const RegionMap rm = segment(haze_of(random_image(12, 12, 2)), 1);
    for (int v : rm.labels) CHECK(v == 1);
}

TEST_CASE("segment: exact boundary values go to the lower-index region") {
    ImageF f(5, 1);
    f.at(0, 0) = 0.0;
    f.at(1, 0) = 0.25;
    f.at(2, 0) = 0.5;
    f.at(3, 0) = 0.75;
    f.at(4, 0) = 1.0;
    const RegionMap rm = segment(haze_of(f), 4);
    CHECK(rm.label(4, 0) == 1);
    CHECK(rm.label(3, 0) == 1);  // tie at theta_2 -> region 1
    CHECK(rm.label(2, 0) == 2);  // tie at theta_3 -> region 2
    CHECK(rm.label(1, 0) == 3);
    CHECK(rm.label(0, 0) == 4);
}

TEST_CASE("segment covers every pixel exactly once") {
    const RegionMap rm = segment(haze_of(random_image(33, 17, 77)), 4);
    size_t total = 0;
    for (int m = 1; m <= 4; ++m) total += rm.region_size(m);
    CHECK(total == 33u * 17u);
}

TEST_CASE("guided smoothing matches the naive oracle") {
    const ImageF img = random_image(24, 20, 4);
    const ImageF got = guided_smooth(img, 3, 1e-2, true);
    const ImageF want = naive_guided(img, 3, 1e-2);
    for (size_t i = 0; i < got.data.size(); ++i)
        CHECK(got.data[i] == doctest::Approx(want.data[i]).epsilon(1e-10));

    const ImageF box_got = box_mean(img, 5);
    const ImageF box_want = naive_box(img, 5);
    for (size_t i = 0; i < box_got.data.size(); ++i)
        CHECK(box_got.data[i] == doctest::Approx(box_want.data[i]).epsilon(1e-10));
}

TEST_CASE("decompose: constant image gives L = c, R = 1") {
    const LayerPair lp = decompose(ImageF(32, 32, 0.37));
    for (double v : lp.l.data) CHECK(v == doctest::Approx(0.37).epsilon(1e-12));
    for (double v : lp.r.data) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decompose: L*R reconstructs the input") {
    const ImageF img = random_image(40, 30, 10, 0.0, 1.0);
    const LayerPair lp = decompose(img);
    for (size_t i = 0; i < img.data.size(); ++i) {
        CHECK(lp.l.data[i] >= kIlluminationFloor);
        CHECK(lp.l.data[i] <= 1.0);
        CHECK(lp.r.data[i] >= 0.0);
        CHECK(std::abs(lp.l.data[i] * lp.r.data[i] - img.data[i]) < 1e-6);
    }
}

TEST_CASE("decompose: edges survive better than box smoothing") {
    ImageF img(64, 16, 0.1);
    for (int y = 0; y < 16; ++y)
        for (int x = 32; x < 64; ++x) img.at(x, y) = 0.9;
    const LayerPair lp = decompose(img, 8, 1e-2);
    const ImageF boxed = box_mean(img, 8);
    CHECK(transition_width(lp.l, 8, 0.1, 0.9) <= transition_width(boxed, 8, 0.1, 0.9));
}

TEST_CASE("regional_geomean: closed-form cases") {
    RegionMap rm;
    rm.width = 2;
    rm.height = 1;
    rm.num_regions = 2;
    rm.labels = {1, 1};
    ImageF l(2, 1);
    l.at(0, 0) = 0.25;
    l.at(1, 0) = 1.0;
    CHECK(*regional_geomean(l, rm, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_FALSE(regional_geomean(l, rm, 2).has_value());

    rm.labels = {1, 2};
    CHECK(*regional_geomean(l, rm, 1) == doctest::Approx(0.25).epsilon(1e-12));

    // zero sample uses the epsilon floor, stays positive
    l.at(0, 0) = 0.0;
    const auto g = regional_geomean(l, rm, 1);
    CHECK(*g > 0.0);
    CHECK(*g == doctest::Approx(1e-6).epsilon(1e-9));
}

TEST_CASE("gamma schedule: closed-form exponents") {
    // single region, single layer keeps the arithmetic visible
    RegionMap rm;
    rm.width = 2;
    rm.height = 1;
    rm.num_regions = 1;
    rm.labels = {1, 1};
    ImageF l(2, 1, 0.5);

    GammaSchedule s1 = gamma_schedule({l}, rm, {1.0});
    CHECK(s1.geomean[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s1.gamma[0] == doctest::Approx(1.0).epsilon(1e-12));  // 2.5^0

    GammaSchedule s2 = gamma_schedule({l}, rm, {0.5});
    CHECK(s2.gamma[0] == doctest::Approx(std::pow(2.5, 0.5)).epsilon(1e-12));
    CHECK(s2.gamma[0] == doctest::Approx(1.5811).epsilon(1e-4));
}

TEST_CASE("gamma schedule: exposure k pairs with region K - k + 1") {
    // region 1 = left half, region 4 = right half bands of a 4-band map
    ImageF f(64, 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 64; ++x) f.at(x, y) = 1.0 - static_cast<double>(x) / 63.0;
    const RegionMap rm = segment(haze_of(f), 4);

    std::vector<ImageF> layers;
    for (int k = 0; k < 4; ++k) {
        ImageF l(64, 8);
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 64; ++x) l.at(x, y) = 0.1 + 0.2 * (x / 16);  // per-band constants
        layers.push_back(std::move(l));
    }
    const GammaSchedule sched = gamma_schedule(layers, rm, {0.5, 0.5, 0.5, 0.5});
    // k=4 pairs with region 1 (leftmost band, value 0.1); k=1 with region 4 (0.7)
    CHECK(sched.geomean[3] == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(sched.geomean[0] == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("gamma is continuous and strictly increasing in G") {
    for (double zeta : {0.3, 0.5, 1.0}) {
        double prev = -1.0;
        for (double g = 1e-4; g <= 1.0; g += 1e-3) {
            const double gamma = std::pow(2.0 + g, 2.0 * g - zeta);
            CHECK(gamma > 0.0);
            if (prev > 0.0) CHECK(gamma > prev);
            prev = gamma;
        }
    }
}

TEST_CASE("empty paired region falls back to the global geomean, no NaN") {
    // constant haze map: every pixel lands in region 1, regions 2..4 empty
    const RegionMap rm = segment(haze_of(ImageF(16, 16, 0.5)), 4);
    std::vector<ImageF> layers(4, random_image(16, 16, 21, 0.05, 1.0));
    const GammaSchedule sched = gamma_schedule(layers, rm, {0.5, 0.5, 0.5, 0.5});
    for (int k = 0; k < 4; ++k) {
        CHECK(std::isfinite(sched.gamma[k]));
        CHECK(sched.gamma[k] > 0.0);
    }
    // k=4 pairs with region 1 (populated); k=1..3 pair with empty regions
    CHECK_FALSE(sched.used_fallback[3]);
    CHECK(sched.used_fallback[0]);
    CHECK(sched.used_fallback[1]);
    CHECK(sched.used_fallback[2]);
}

TEST_CASE("apply_gamma: monotone on (0,1], stays in (0,1]") {
    const ImageF l = random_image(16, 16, 31, 0.01, 1.0);
    const ImageF out = apply_gamma(l, 1.7);
    for (size_t i = 0; i < out.data.size(); ++i) {
        CHECK(out.data[i] > 0.0);
        CHECK(out.data[i] <= 1.0);
    }
    for (size_t i = 1; i < out.data.size(); ++i) {
        const bool same_order = (l.data[i] > l.data[i - 1]) == (out.data[i] > out.data[i - 1]);
        if (l.data[i] != l.data[i - 1]) CHECK(same_order);
    }
}

TEST_CASE("enhance_reflectance: gain 1 is the exact identity") {
    const ImageF r = random_image(20, 20, 41, 0.0, 2.0);
    const ImageF out = enhance_reflectance(r, 8, 1e-2, 1.0);
    for (size_t i = 0; i < r.data.size(); ++i) CHECK(out.data[i] == r.data[i]);
}

TEST_CASE("enhance_reflectance: constants pass through") {
    const ImageF out = enhance_reflectance(ImageF(16, 16, 0.8), 8, 1e-2, 1.5);
    for (double v : out.data) CHECK(v == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("enhance_reflectance: detail amplified by gain around the base") {
    const ImageF r = random_image(24, 24, 51, 0.2, 1.4);
    const double gain = 1.5;
    const ImageF out = enhance_reflectance(r, 3, 1e-2, gain);
    const ImageF base = naive_guided(r, 3, 1e-2);  // independent smoothing oracle
    for (size_t i = 0; i < r.data.size(); ++i) {
        const double expect = std::max(0.0, base.data[i] + gain * (r.data[i] - base.data[i]));
        CHECK(out.data[i] == doctest::Approx(expect).epsilon(1e-9));
    }
}
