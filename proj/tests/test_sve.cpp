#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <set>
#include <stdexcept>

#include "svedefog/sve.hpp"

using namespace svedefog;

namespace {

ImageF constant_scene(int w, int h, double v) { return ImageF(w, h, v); }

SensorModel noiseless(int bits) {
    SensorModel m;
    m.bit_depth = bits;
    return m;
}

}  // namespace

TEST_CASE("pattern validation") {
    AttenuatorPattern p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.transmittances == std::array<double, 4>{1.0, 0.55, 0.45, 0.0025});
    p.transmittances = {0.5, 0.6, 0.4, 0.1};  // not decreasing
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.transmittances = {1.0, 0.5, 0.25, 0.0};  // zero not allowed
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("simulate: constant full-scale scene quantizes to round(255 * t_k)") {
    const ImageU16 raw = simulate_capture(constant_scene(8, 6, 1.0), AttenuatorPattern{},
                                          noiseless(8));
    // oracle: round(255 * t) per macro-pixel cell
    CHECK(raw.at(0, 0) == 255);
    CHECK(raw.at(1, 0) == 140);  // round(255 * 0.55) = round(140.25)
    CHECK(raw.at(0, 1) == 115);  // round(255 * 0.45) = round(114.75)
    CHECK(raw.at(1, 1) == 1);    // round(255 * 0.0025) = round(0.6375)
    CHECK(raw.at(2, 2) == 255);  // pattern repeats
}

TEST_CASE("simulate: zero scene gives an all-zero mosaic") {
    const ImageU16 raw =
        simulate_capture(constant_scene(6, 4, 0.0), AttenuatorPattern{}, noiseless(16));
    for (uint16_t v : raw.data) CHECK(v == 0);
}

TEST_CASE("simulate: extreme radiance clips then quantizes") {
    const int bd = 16;
    const double maxc = (1 << bd) - 1;
    {
        // 500 * 0.0025 = 1.25 still exceeds full well: every cell saturates
        const ImageU16 raw = simulate_capture(constant_scene(4, 4, 500.0),
                                              AttenuatorPattern{}, noiseless(bd));
        for (int k = 1; k <= 4; ++k) {
            const double t = AttenuatorPattern{}.transmittances[k - 1];
            const uint16_t expect = static_cast<uint16_t>(
                std::lround(std::min(500.0 * t, 1.0) * maxc));
            CHECK(raw.at(AttenuatorPattern::col_offset(k),
                         AttenuatorPattern::row_offset(k)) == expect);
        }
    }
    {
        // 300 * 0.0025 = 0.75: the densest attenuator stays unsaturated
        const ImageU16 raw = simulate_capture(constant_scene(4, 4, 300.0),
                                              AttenuatorPattern{}, noiseless(bd));
        CHECK(raw.at(0, 0) == maxc);
        CHECK(raw.at(1, 0) == maxc);
        CHECK(raw.at(0, 1) == maxc);
        CHECK(raw.at(1, 1) == static_cast<uint16_t>(std::lround(0.75 * maxc)));
    }
}

TEST_CASE("simulate: rejects odd dimensions and negative radiance") {
    CHECK_THROWS_AS(simulate_capture(ImageF(5, 4, 0.1), AttenuatorPattern{}, noiseless(16)),
                    std::invalid_argument);
    ImageF neg(4, 4, 0.1);
    neg.at(0, 0) = -0.01;
    CHECK_THROWS_AS(simulate_capture(neg, AttenuatorPattern{}, noiseless(16)),
                    std::invalid_argument);
}

TEST_CASE("simulate: noise is deterministic per seed") {
    SensorModel m = noiseless(16);
    m.read_noise_sigma = 0.01;
    m.seed = 99;
    const ImageF scene = constant_scene(16, 16, 0.5);
    const ImageU16 a = simulate_capture(scene, AttenuatorPattern{}, m);
    const ImageU16 b = simulate_capture(scene, AttenuatorPattern{}, m);
    CHECK(a.data == b.data);
    m.seed = 100;
    const ImageU16 c = simulate_capture(scene, AttenuatorPattern{}, m);
    CHECK(a.data != c.data);
}

TEST_CASE("demux: native 2448x2048 frame splits into four 1224x1024 sub-images") {
    const ImageU16 raw(2448, 2048, 16, 0);
    const ExposureStack stack = demux(raw, AttenuatorPattern{});
    REQUIRE(stack.k() == 4);
    for (const ImageF& sub : stack.images) {
        CHECK(sub.width == 1224);
        CHECK(sub.height == 1024);
    }
}

TEST_CASE("demux: distinct per-cell constants separate cleanly") {
    ImageU16 raw(8, 6, 8);
    const uint16_t vals[4] = {200, 150, 100, 50};
    for (int y = 0; y < raw.height; ++y)
        for (int x = 0; x < raw.width; ++x) raw.at(x, y) = vals[(y % 2) * 2 + (x % 2)];
    const ExposureStack stack = demux(raw, AttenuatorPattern{});
    for (int k = 0; k < 4; ++k)
        for (double v : stack.images[k].data)
            CHECK(v == doctest::Approx(vals[k] / 255.0).epsilon(1e-12));
}

TEST_CASE("demux: every raw pixel lands in exactly one sub-image") {
    ImageU16 raw(10, 8, 16);
    for (size_t i = 0; i < raw.data.size(); ++i) raw.data[i] = static_cast<uint16_t>(i);
    const ExposureStack stack = demux(raw, AttenuatorPattern{});
    std::multiset<long> seen;
    for (const ImageF& sub : stack.images)
        for (double v : sub.data) seen.insert(std::lround(v * raw.max_value()));
    CHECK(seen.size() == raw.data.size());
    for (size_t i = 0; i < raw.data.size(); ++i) CHECK(seen.count(static_cast<long>(i)) == 1);
}

TEST_CASE("demux + division by t_k inverts a noiseless capture at sample sites") {
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> uni(0.01, 0.95);
    ImageF scene(24, 16);
    for (double& v : scene.data) v = uni(gen);

    const AttenuatorPattern pat;
    const ImageU16 raw = simulate_capture(scene, pat, noiseless(16));
    const ExposureStack stack = demux(raw, pat);
    const double step = 1.0 / 65535.0;
    for (int k = 1; k <= 4; ++k) {
        const int dr = AttenuatorPattern::row_offset(k);
        const int dc = AttenuatorPattern::col_offset(k);
        const double t = pat.transmittances[k - 1];
        for (int u = 0; u < stack.height(); ++u)
            for (int v = 0; v < stack.width(); ++v) {
                const double rec = stack.images[k - 1].at(v, u) / t;
                const double truth = scene.at(2 * v + dc, 2 * u + dr);
                CHECK(std::abs(rec - truth) <= step / t + 1e-12);
            }
    }
}

TEST_CASE("reconstruct: constants are reproduced exactly") {
    ExposureStack q;
    for (int k = 0; k < 4; ++k) q.images.push_back(ImageF(12, 10, 0.25 * (k + 1)));
    const ExposureStack full = reconstruct_full(q);
    REQUIRE(full.resolution == ExposureStack::Resolution::full);
    for (int k = 0; k < 4; ++k) {
        CHECK(full.images[k].width == 24);
        CHECK(full.images[k].height == 20);
        for (double v : full.images[k].data)
            CHECK(v == doctest::Approx(0.25 * (k + 1)).epsilon(1e-15));
    }
}

TEST_CASE("reconstruct: linear ramp is recovered against the analytic ramp") {
    // quarter images sampled from the full-grid ramp f(x) = x / (W-1)
    const int qw = 32, qh = 24;
    const int W = 2 * qw;
    ExposureStack q;
    for (int k = 1; k <= 4; ++k) {
        const int dc = AttenuatorPattern::col_offset(k);
        ImageF sub(qw, qh);
        for (int u = 0; u < qh; ++u)
            for (int v = 0; v < qw; ++v)
                sub.at(v, u) = static_cast<double>(2 * v + dc) / (W - 1);
        q.images.push_back(std::move(sub));
    }
    const ExposureStack full = reconstruct_full(q);
    for (int k = 0; k < 4; ++k)
        for (int y = 0; y < full.height(); ++y)
            for (int x = 0; x < full.width(); ++x)
                CHECK(std::abs(full.images[k].at(x, y) -
                               static_cast<double>(x) / (W - 1)) < 1e-3);
}

TEST_CASE("reconstruct: known sample sites are preserved bit-exactly") {
    std::mt19937 gen(23);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    ExposureStack q;
    for (int k = 0; k < 4; ++k) {
        ImageF sub(9, 7);
        for (double& v : sub.data) v = uni(gen);
        q.images.push_back(std::move(sub));
    }
    const ExposureStack full = reconstruct_full(q);
    for (int k = 1; k <= 4; ++k) {
        const int dr = AttenuatorPattern::row_offset(k);
        const int dc = AttenuatorPattern::col_offset(k);
        for (int u = 0; u < 7; ++u)
            for (int v = 0; v < 9; ++v)
                CHECK(full.images[k - 1].at(2 * v + dc, 2 * u + dr) ==
                      q.images[k - 1].at(v, u));
    }
}

TEST_CASE("reconstruct: commutes with constant offsets") {
    std::mt19937 gen(29);
    std::uniform_real_distribution<double> uni(0.0, 0.5);
    ExposureStack a, b;
    const double offset = 0.25;
    for (int k = 0; k < 4; ++k) {
        ImageF sub(11, 8);
        for (double& v : sub.data) v = uni(gen);
        ImageF shifted = sub;
        for (double& v : shifted.data) v += offset;
        a.images.push_back(std::move(sub));
        b.images.push_back(std::move(shifted));
    }
    const ExposureStack fa = reconstruct_full(a);
    const ExposureStack fb = reconstruct_full(b);
    for (int k = 0; k < 4; ++k)
        for (size_t i = 0; i < fa.images[k].data.size(); ++i)
            CHECK(std::abs(fb.images[k].data[i] - fa.images[k].data[i] - offset) < 1e-6);
}

TEST_CASE("consistency check: noiseless mid-gray scene matches transmittance ratios") {
    const AttenuatorPattern pat;
    const ImageU16 raw =
        simulate_capture(constant_scene(32, 32, 0.5), pat, noiseless(16));
    const ConsistencyReport rep = exposure_consistency_check(demux(raw, pat), pat);
    REQUIRE(rep.pairs.size() == 6);
    for (const PairCheck& pc : rep.pairs) {
        if (pc.k_den == 4) continue;  // 0.5 * 0.0025 sits below the noise floor
        CHECK_FALSE(pc.flagged);
        CHECK(pc.valid_fraction == 1.0);
        // within one quantization step of the expected ratio
        const double denom_lsb = 1.0 / 65535.0;
        CHECK(std::abs(pc.measured_ratio - pc.expected_ratio) <
              pc.expected_ratio * denom_lsb / 0.1 + 1e-6);
    }
    CHECK(rep.pairs[0].k_num == 1);
    CHECK(rep.pairs[0].k_den == 2);
    CHECK(rep.pairs[0].expected_ratio == doctest::Approx(1.0 / 0.55).epsilon(1e-12));
}

TEST_CASE("consistency check: saturated pairs are flagged, not fatal") {
    const AttenuatorPattern pat;
    const ImageU16 raw =
        simulate_capture(constant_scene(16, 16, 500.0), pat, noiseless(16));
    const ConsistencyReport rep = exposure_consistency_check(demux(raw, pat), pat);
    // k=1..3 saturate at radiance 500 (and k=4 saturates too: 500*0.0025 > 1)
    for (const PairCheck& pc : rep.pairs) {
        CHECK(pc.flagged);
        CHECK(pc.valid_fraction == 0.0);
    }
}

TEST_CASE("raw sidecar round-trips capture parameters") {
    AttenuatorPattern pat;
    pat.transmittances = {1.0, 0.5, 0.25, 0.01};
    SensorModel cam;
    cam.bit_depth = 12;
    cam.read_noise_sigma = 0.003;
    cam.seed = 42;
    const std::string path =
        (std::filesystem::temp_directory_path() / "svedefog_raw.meta").string();
    write_raw_sidecar(path, pat, cam);
    AttenuatorPattern pat2;
    SensorModel cam2;
    read_raw_sidecar(path, pat2, cam2);
    CHECK(pat2.transmittances == pat.transmittances);
    CHECK(cam2.bit_depth == 12);
    CHECK(cam2.read_noise_sigma == 0.003);
    CHECK(cam2.seed == 42);
}
