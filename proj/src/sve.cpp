#include "svedefog/sve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "svedefog/rng.hpp"

namespace svedefog {

void AttenuatorPattern::validate() const {
    for (int i = 0; i < 4; ++i) {
        if (!(transmittances[i] > 0.0 && transmittances[i] <= 1.0))
            throw std::invalid_argument("AttenuatorPattern: transmittance out of (0,1]");
        if (i > 0 && !(transmittances[i] < transmittances[i - 1]))
            throw std::invalid_argument("AttenuatorPattern: transmittances must strictly decrease");
    }
}

void SensorModel::validate() const {
    if (bit_depth < 8 || bit_depth > 16)
        throw std::invalid_argument("SensorModel: bit_depth must be in [8,16]");
    if (read_noise_sigma < 0.0 || prnu_sigma < 0.0)
        throw std::invalid_argument("SensorModel: noise parameters must be >= 0");
    if (full_well <= 0.0)
        throw std::invalid_argument("SensorModel: full_well must be > 0");
}

ImageU16 simulate_capture(const ImageF& scene, const AttenuatorPattern& pattern,
                          const SensorModel& model) {
    pattern.validate();
    model.validate();
    if (scene.width % 2 != 0 || scene.height % 2 != 0)
        throw std::invalid_argument("simulate_capture: scene dimensions must be even");
    for (double v : scene.data)
        if (v < 0.0) throw std::invalid_argument("simulate_capture: negative radiance");

    const double maxcode = (1u << model.bit_depth) - 1u;
    ImageU16 raw(scene.width, scene.height, model.bit_depth);
    for (int r = 0; r < scene.height; ++r) {
        for (int c = 0; c < scene.width; ++c) {
            const int cell = (r % 2) * 2 + (c % 2);  // k-1
            double v = scene.at(c, r) * pattern.transmittances[cell];
            if (model.prnu_sigma > 0.0)
                v *= 1.0 + model.prnu_sigma * hash_gauss(model.seed, r, c, 1);
            if (model.read_noise_sigma > 0.0)
                v += model.read_noise_sigma * hash_gauss(model.seed, r, c, 0);
            v = std::clamp(v, 0.0, model.full_well);
            raw.at(c, r) = static_cast<uint16_t>(std::lround(v / model.full_well * maxcode));
        }
    }
    return raw;
}

ExposureStack demux(const ImageU16& raw, const AttenuatorPattern& pattern) {
    pattern.validate();
    if (raw.width % 2 != 0 || raw.height % 2 != 0)
        throw std::invalid_argument("demux: raw dimensions must be even");

    const int qw = raw.width / 2;
    const int qh = raw.height / 2;
    const double scale = 1.0 / raw.max_value();
    ExposureStack stack;
    stack.resolution = ExposureStack::Resolution::quarter;
    for (int k = 1; k <= 4; ++k) {
        const int dr = AttenuatorPattern::row_offset(k);
        const int dc = AttenuatorPattern::col_offset(k);
        ImageF sub(qw, qh);
        for (int u = 0; u < qh; ++u)
            for (int v = 0; v < qw; ++v)
                sub.at(v, u) = raw.at(2 * v + dc, 2 * u + dr) * scale;
        stack.images.push_back(std::move(sub));
    }
    return stack;
}

namespace {

// Quarter-grid sample with linear extrapolation outside [0, n).
inline double sample_extrap(const double* s, int i, int n) {
    if (i < 0) return s[0] + (s[0] - s[std::min(1, n - 1)]) * static_cast<double>(-i);
    if (i >= n) return s[n - 1] + (s[n - 1] - s[std::max(n - 2, 0)]) * static_cast<double>(i - n + 1);
    return s[i];
}

// 1D half-grid interpolation: out[j] for j in [0, 2n) with known samples at
// j = 2i + phase. Stride-aware so it serves rows and columns alike.
void interp_axis(const double* src, int n, int src_stride, double* dst, int len,
                 int dst_stride, int phase, double gain) {
    std::vector<double> tmp(n);
    for (int i = 0; i < n; ++i) tmp[i] = src[static_cast<size_t>(i) * src_stride];
    for (int j = 0; j < len; ++j) {
        const int rel = j - phase;
        double v;
        if (rel >= 0 && rel % 2 == 0 && rel / 2 < n) {
            v = tmp[rel / 2];
        } else {
            const int i0 = (rel >= 0 ? rel : rel - 1) / 2;  // floor(rel/2)
            const double b = 0.5 * (sample_extrap(tmp.data(), i0, n) +
                                    sample_extrap(tmp.data(), i0 + 1, n));
            const double w = 0.5 * (sample_extrap(tmp.data(), i0 - 1, n) +
                                    sample_extrap(tmp.data(), i0 + 2, n));
            v = b + gain * (b - w) / 4.0;
        }
        dst[static_cast<size_t>(j) * dst_stride] = v;
    }
}

}  // namespace

ExposureStack reconstruct_full(const ExposureStack& stack, double gain) {
    if (stack.resolution != ExposureStack::Resolution::quarter)
        throw std::invalid_argument("reconstruct_full: expects a quarter-resolution stack");
    if (stack.k() != 4)
        throw std::invalid_argument("reconstruct_full: expects K=4 sub-images");

    const int qw = stack.width();
    const int qh = stack.height();
    const int fw = 2 * qw;
    const int fh = 2 * qh;

    ExposureStack out;
    out.resolution = ExposureStack::Resolution::full;
    for (int k = 1; k <= 4; ++k) {
        const ImageF& q = stack.images[k - 1];
        const int dr = AttenuatorPattern::row_offset(k);
        const int dc = AttenuatorPattern::col_offset(k);

        // Columns first: quarter rows -> full height.
        ImageF mid(qw, fh);
        for (int v = 0; v < qw; ++v)
            interp_axis(q.data.data() + v, qh, qw, mid.data.data() + v, fh, qw, dr, gain);
        // Then rows: quarter columns -> full width.
        ImageF full(fw, fh);
        for (int y = 0; y < fh; ++y)
            interp_axis(mid.row(y), qw, 1, full.row(y), fw, 1, dc, gain);
        out.images.push_back(std::move(full));
    }
    return out;
}

ConsistencyReport exposure_consistency_check(const ExposureStack& stack,
                                             const AttenuatorPattern& pattern,
                                             double saturation_level,
                                             double noise_floor) {
    pattern.validate();
    ConsistencyReport report;
    const size_t npix = stack.images.empty() ? 0 : stack.images[0].pixel_count();
    for (int j = 1; j <= stack.k(); ++j) {
        for (int k = j + 1; k <= stack.k(); ++k) {
            const ImageF& a = stack.images[j - 1];
            const ImageF& b = stack.images[k - 1];
            std::vector<double> ratios;
            ratios.reserve(npix);
            for (size_t i = 0; i < npix; ++i) {
                const double va = a.data[i];
                const double vb = b.data[i];
                if (va > noise_floor && vb > noise_floor &&
                    va < saturation_level && vb < saturation_level)
                    ratios.push_back(va / vb);
            }
            PairCheck pc;
            pc.k_num = j;
            pc.k_den = k;
            pc.expected_ratio = pattern.transmittances[j - 1] / pattern.transmittances[k - 1];
            pc.valid_fraction = npix ? static_cast<double>(ratios.size()) / npix : 0.0;
            if (ratios.empty()) {
                pc.flagged = true;
            } else {
                const size_t mid = ratios.size() / 2;
                std::nth_element(ratios.begin(), ratios.begin() + mid, ratios.end());
                double med = ratios[mid];
                if (ratios.size() % 2 == 0) {
                    const double lo = *std::max_element(ratios.begin(), ratios.begin() + mid);
                    med = 0.5 * (lo + med);
                }
                pc.measured_ratio = med;
            }
            report.pairs.push_back(pc);
        }
    }
    return report;
}

std::string ConsistencyReport::to_text() const {
    std::ostringstream os;
    os << "pair\tmeasured\texpected\tvalid_fraction\tflag\n";
    for (const PairCheck& pc : pairs) {
        os << pc.k_num << "/" << pc.k_den << "\t";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f\t%.6f\t%.6f\t%s\n", pc.measured_ratio,
                      pc.expected_ratio, pc.valid_fraction,
                      pc.flagged ? "NO_VALID_PIXELS" : "ok");
        os << buf;
    }
    return os.str();
}

void write_raw_sidecar(const std::string& path, const AttenuatorPattern& pattern,
                       const SensorModel& model) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_raw_sidecar: cannot open " + path);
    out.precision(17);
    out << "transmittances=" << pattern.transmittances[0] << "," << pattern.transmittances[1]
        << "," << pattern.transmittances[2] << "," << pattern.transmittances[3] << "\n";
    out << "bit_depth=" << model.bit_depth << "\n";
    out << "read_noise_sigma=" << model.read_noise_sigma << "\n";
    out << "prnu_sigma=" << model.prnu_sigma << "\n";
    out << "seed=" << model.seed << "\n";
}

void read_raw_sidecar(const std::string& path, AttenuatorPattern& pattern,
                      SensorModel& model) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_raw_sidecar: cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        const size_t eq = line.find('=');
        if (eq == std::string::npos || line.empty() || line[0] == '#') continue;
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "transmittances") {
            std::istringstream ss(val);
            std::string tok;
            for (int i = 0; i < 4 && std::getline(ss, tok, ','); ++i)
                pattern.transmittances[i] = std::stod(tok);
        } else if (key == "bit_depth") {
            model.bit_depth = std::stoi(val);
        } else if (key == "read_noise_sigma") {
            model.read_noise_sigma = std::stod(val);
        } else if (key == "prnu_sigma") {
            model.prnu_sigma = std::stod(val);
        } else if (key == "seed") {
            model.seed = std::stoull(val);
        }
    }
}

}  // namespace svedefog
