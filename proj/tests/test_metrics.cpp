#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <random>

#include "svedefog/metrics.hpp"
#include "svedefog/synth.hpp"

using namespace svedefog;
namespace fs = std::filesystem;

namespace {

ImageF random_image(int w, int h, uint32_t seed, double lo = 0.0, double hi = 1.0) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> uni(lo, hi);
    ImageF img(w, h);
    for (double& v : img.data) v = uni(gen);
    return img;
}

// Brute-force SSIM: per valid window, Gaussian-weighted moments computed
// directly. Independent of the separable implementation.
double naive_ssim(const ImageF& a, const ImageF& b) {
    const int rad = 5;
    double k[11];
    double ksum = 0.0;
    for (int i = -rad; i <= rad; ++i) {
        k[i + rad] = std::exp(-(i * i) / (2.0 * 1.5 * 1.5));
        ksum += k[i + rad];
    }
    for (double& v : k) v /= ksum;

    const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    double total = 0.0;
    int count = 0;
    for (int cy = rad; cy < a.height - rad; ++cy)
        for (int cx = rad; cx < a.width - rad; ++cx) {
            double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
            for (int dy = -rad; dy <= rad; ++dy)
                for (int dx = -rad; dx <= rad; ++dx) {
                    const double w = k[dy + rad] * k[dx + rad];
                    const double va = a.at(cx + dx, cy + dy);
                    const double vb = b.at(cx + dx, cy + dy);
                    mx += w * va;
                    my += w * vb;
                    mxx += w * va * va;
                    myy += w * vb * vb;
                    mxy += w * va * vb;
                }
            const double sx = mxx - mx * mx, sy = myy - my * my, sxy = mxy - mx * my;
            total += ((2 * mx * my + c1) * (2 * sxy + c2)) /
                     ((mx * mx + my * my + c1) * (sx + sy + c2));
            ++count;
        }
    return total / count;
}

}  // namespace

TEST_CASE("AG: constant image scores zero") {
    CHECK(average_gradient(ImageF(32, 32, 0.5)) == 0.0);
}

TEST_CASE("AG: ramp with 8-bit step s scores s/sqrt(2)") {
    const double s = 2.0;  // 8-bit units per pixel
    ImageF img(40, 24);
    for (int y = 0; y < 24; ++y)
        for (int x = 0; x < 40; ++x) img.at(x, y) = x * s / 255.0;
    CHECK(average_gradient(img) == doctest::Approx(s / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("AG: linear stretch raises the score, offsets do not") {
    const ImageF img = random_image(32, 32, 3, 0.2, 0.6);
    const double base = average_gradient(img);
    ImageF stretched = img, shifted = img;
    for (double& v : stretched.data) v = 0.2 + (v - 0.2) * 1.5;
    for (double& v : shifted.data) v += 0.1;
    CHECK(average_gradient(stretched) == doctest::Approx(base * 1.5).epsilon(1e-9));
    CHECK(average_gradient(stretched) > base);
    CHECK(average_gradient(shifted) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("IE: constant, uniform and two-value histograms") {
    CHECK(information_entropy(ImageF(16, 16, 0.42)) == 0.0);

    ImageF uniform(256, 256);
    for (int y = 0; y < 256; ++y)
        for (int x = 0; x < 256; ++x) uniform.at(x, y) = x / 255.0;
    CHECK(std::abs(information_entropy(uniform) - 8.0) < 1e-9);

    ImageF two(16, 16, 0.0);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 8; ++x) two.at(x, y) = 1.0;
    CHECK(information_entropy(two) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("IE is invariant to pixel permutation") {
    ImageF img = random_image(24, 24, 7);
    const double before = information_entropy(img);
    std::mt19937 gen(8);
    std::shuffle(img.data.begin(), img.data.end(), gen);
    CHECK(information_entropy(img) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("SSIM: identity, symmetry, and the brute-force oracle") {
    const ImageF a = random_image(24, 20, 11);
    const ImageF b = random_image(24, 20, 13);
    CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
    CHECK(ssim(a, b) == doctest::Approx(naive_ssim(a, b)).epsilon(1e-8));

    ImageF inverted(24, 20);
    for (size_t i = 0; i < a.data.size(); ++i) inverted.data[i] = 1.0 - a.data[i];
    CHECK(ssim(inverted, a) < 1.0);

    CHECK_THROWS_AS(ssim(a, random_image(10, 10, 17)), std::invalid_argument);
    CHECK_THROWS_AS(ssim(random_image(8, 8, 19), random_image(8, 8, 19)),
                    std::invalid_argument);
}

TEST_CASE("mertens: identical stack reproduces the input") {
    const ImageF img = random_image(48, 40, 23);
    ExposureStack s;
    s.images.assign(4, img);
    const ImageF out = mertens_baseline(s);
    for (size_t i = 0; i < img.data.size(); ++i)
        CHECK(std::abs(out.data[i] - img.data[i]) < 1e-5);
}

TEST_CASE("mertens: well-exposedness pulls toward the mid-gray layer") {
    ExposureStack s;
    s.images.push_back(ImageF(32, 32, 0.0));
    s.images.push_back(ImageF(32, 32, 0.5));
    const ImageF out = mertens_baseline(s);
    for (double v : out.data) CHECK(v > 0.4);
}

TEST_CASE("mertens: output bounded in [0,1], finite") {
    ExposureStack s;
    for (int k = 0; k < 4; ++k) s.images.push_back(random_image(40, 40, 29 + k));
    const ImageF out = mertens_baseline(s);
    for (double v : out.data) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("evaluate: empty method list yields an empty table") {
    DatasetSpec spec;
    spec.num_scenes = 1;
    spec.width = 48;
    spec.height = 48;
    spec.haze_levels = {0.5};
    const fs::path dir = fs::temp_directory_path() / "svedefog_eval_empty";
    fs::remove_all(dir);
    const std::string manifest = make_dataset(spec, dir.string());
    const MetricReport rep = evaluate(manifest, {});
    CHECK(rep.rows.empty());
    CHECK(rep.aggregate.empty());
}

TEST_CASE("evaluate: deterministic rows, duplicate methods deduplicated") {
    DatasetSpec spec;
    spec.num_scenes = 2;
    spec.width = 64;
    spec.height = 64;
    spec.haze_levels = {0.7, 0.3};
    spec.master_seed = 3;
    const fs::path dir = fs::temp_directory_path() / "svedefog_eval_det";
    fs::remove_all(dir);
    const std::string manifest = make_dataset(spec, dir.string());

    const MetricReport a = evaluate(manifest, {"mertens", "mertens"});
    CHECK(a.rows.size() == 4);  // deduplicated: one method x 4 items
    const MetricReport b = evaluate(manifest, {"mertens"});
    CHECK(a.to_tsv() == b.to_tsv());

    for (const MetricRow& row : a.rows) {
        CHECK(row.error.empty());
        REQUIRE(row.ssim.has_value());
        CHECK(*row.ssim <= 1.0);
        CHECK(*row.ssim >= -1.0);
    }
}

TEST_CASE("evaluate: missing files are reported per row, run continues") {
    DatasetSpec spec;
    spec.num_scenes = 1;
    spec.width = 48;
    spec.height = 48;
    spec.haze_levels = {0.9, 0.5};
    const fs::path dir = fs::temp_directory_path() / "svedefog_eval_missing";
    fs::remove_all(dir);
    const std::string manifest = make_dataset(spec, dir.string());
    fs::remove(dir / "scene0000_h0_raw.pgm");

    const MetricReport rep = evaluate(manifest, {"mertens"});
    REQUIRE(rep.rows.size() == 2);
    CHECK_FALSE(rep.rows[0].error.empty());
    CHECK(rep.rows[1].error.empty());
    REQUIRE(rep.aggregate.size() == 1);
    CHECK(rep.aggregate[0].ag > 0.0);
}
