#include "svedefog/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "svedefog/imageio.hpp"
#include "svedefog/pipeline.hpp"
#include "svedefog/pyramid.hpp"
#include "svedefog/synth.hpp"

namespace svedefog {

double average_gradient(const ImageF& img) {
    if (img.width < 2 || img.height < 2) return 0.0;
    std::vector<double> mags;
    mags.reserve(static_cast<size_t>(img.width - 1) * (img.height - 1));
    for (int y = 0; y < img.height - 1; ++y) {
        const double* cur = img.row(y);
        const double* nxt = img.row(y + 1);
        for (int x = 0; x < img.width - 1; ++x) {
            const double dx = (cur[x + 1] - cur[x]) * 255.0;
            const double dy = (nxt[x] - cur[x]) * 255.0;
            mags.push_back(std::sqrt((dx * dx + dy * dy) / 2.0));
        }
    }
    return pairwise_sum(mags) / static_cast<double>(mags.size());
}

double information_entropy(const ImageF& img) {
    if (img.empty()) return 0.0;
    std::vector<double> hist(256, 0.0);
    for (double v : img.data)
        hist[static_cast<size_t>(std::lround(clamp01(v) * 255.0))] += 1.0;
    const double total = static_cast<double>(img.data.size());
    double bits = 0.0;
    for (double h : hist) {
        if (h <= 0.0) continue;
        const double p = h / total;
        bits -= p * std::log2(p);
    }
    return bits;
}

namespace {

constexpr int kSsimRadius = 5;  // 11x11 window

std::vector<double> ssim_kernel() {
    std::vector<double> k(2 * kSsimRadius + 1);
    double sum = 0.0;
    for (int i = -kSsimRadius; i <= kSsimRadius; ++i) {
        k[i + kSsimRadius] = std::exp(-(i * i) / (2.0 * 1.5 * 1.5));
        sum += k[i + kSsimRadius];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Separable Gaussian, output restricted to fully valid windows: the result
// has (w-10) x (h-10) samples.
ImageF gauss_valid(const ImageF& img, const std::vector<double>& k) {
    const int w = img.width, h = img.height;
    const int vw = w - 2 * kSsimRadius, vh = h - 2 * kSsimRadius;
    ImageF mid(vw, h);
    for (int y = 0; y < h; ++y) {
        const double* s = img.row(y);
        double* d = mid.row(y);
        for (int x = 0; x < vw; ++x) {
            double acc = 0.0;
            for (int i = 0; i < 2 * kSsimRadius + 1; ++i) acc += k[i] * s[x + i];
            d[x] = acc;
        }
    }
    ImageF out(vw, vh);
    for (int y = 0; y < vh; ++y) {
        double* d = out.row(y);
        for (int x = 0; x < vw; ++x) {
            double acc = 0.0;
            for (int i = 0; i < 2 * kSsimRadius + 1; ++i) acc += k[i] * mid.at(x, y + i);
            d[x] = acc;
        }
    }
    return out;
}

}  // namespace

double ssim(const ImageF& img, const ImageF& ref) {
    if (!img.same_size(ref))
        throw std::invalid_argument("ssim: image dimensions differ");
    if (img.width < 2 * kSsimRadius + 1 || img.height < 2 * kSsimRadius + 1)
        throw std::invalid_argument("ssim: images must be at least 11x11");

    constexpr double c1 = 0.01 * 0.01;  // (0.01 * D)^2, D = 1
    constexpr double c2 = 0.03 * 0.03;

    const std::vector<double> k = ssim_kernel();
    ImageF xx(img.width, img.height), yy(img.width, img.height), xy(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i) {
        xx.data[i] = img.data[i] * img.data[i];
        yy.data[i] = ref.data[i] * ref.data[i];
        xy.data[i] = img.data[i] * ref.data[i];
    }
    const ImageF mu_x = gauss_valid(img, k);
    const ImageF mu_y = gauss_valid(ref, k);
    const ImageF m_xx = gauss_valid(xx, k);
    const ImageF m_yy = gauss_valid(yy, k);
    const ImageF m_xy = gauss_valid(xy, k);

    std::vector<double> vals(mu_x.data.size());
    for (size_t i = 0; i < vals.size(); ++i) {
        const double mx = mu_x.data[i], my = mu_y.data[i];
        const double sx = m_xx.data[i] - mx * mx;
        const double sy = m_yy.data[i] - my * my;
        const double sxy = m_xy.data[i] - mx * my;
        vals[i] = ((2.0 * mx * my + c1) * (2.0 * sxy + c2)) /
                  ((mx * mx + my * my + c1) * (sx + sy + c2));
    }
    return pairwise_sum(vals) / static_cast<double>(vals.size());
}

ImageF mertens_baseline(const ExposureStack& stack) {
    const int K = stack.k();
    if (K == 0) throw std::invalid_argument("mertens_baseline: empty stack");
    for (const ImageF& img : stack.images)
        if (!img.same_size(stack.images[0]))
            throw std::invalid_argument("mertens_baseline: exposure dimensions differ");
    const int w = stack.width(), h = stack.height();

    // Per-layer weight: |Laplacian| contrast times well-exposedness.
    std::vector<ImageF> weights(K, ImageF(w, h));
    for (int k = 0; k < K; ++k) {
        const ImageF& img = stack.images[k];
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double c = img.at(x, y);
                const double lap = std::abs(4.0 * c - img.at(mirror_index(x - 1, w), y) -
                                            img.at(mirror_index(x + 1, w), y) -
                                            img.at(x, mirror_index(y - 1, h)) -
                                            img.at(x, mirror_index(y + 1, h)));
                const double e = std::exp(-(c - 0.5) * (c - 0.5) / (2.0 * 0.2 * 0.2));
                weights[k].at(x, y) = (lap + 1e-6) * e;
            }
        }
    }
    for (size_t i = 0; i < weights[0].data.size(); ++i) {
        double sum = 0.0;
        for (int k = 0; k < K; ++k) sum += weights[k].data[i];
        for (int k = 0; k < K; ++k) weights[k].data[i] /= sum;
    }

    const int depth = pyramid_depth(h, w);
    std::vector<ImageF> blended;
    for (int k = 0; k < K; ++k) {
        const Pyramid lap = laplacian_pyramid(stack.images[k], depth);
        const std::vector<ImageF> gw = gaussian_levels(weights[k], depth + 1);
        if (blended.empty()) {
            blended.resize(lap.levels.size());
            for (size_t l = 0; l < blended.size(); ++l)
                blended[l] = ImageF(lap.levels[l].width, lap.levels[l].height, 0.0);
        }
        for (size_t l = 0; l < blended.size(); ++l)
            for (size_t i = 0; i < blended[l].data.size(); ++i)
                blended[l].data[i] += lap.levels[l].data[i] * gw[l].data[i];
    }
    ImageF out = collapse(Pyramid{PyramidKind::laplacian, std::move(blended)});
    for (double& v : out.data) v = clamp01(v);
    return out;
}

namespace {

ImageF clamped(const ImageF& img) {
    ImageF out = img;
    for (double& v : out.data) v = clamp01(v);
    return out;
}

ImageF run_method(const std::string& method, const ImageU16& raw, const Config& cfg) {
    if (method == "mertens") {
        const ExposureStack stack = reconstruct_full(demux(raw, cfg.attenuator()),
                                                     cfg.interp_gain);
        return mertens_baseline(stack);
    }
    PipelineOptions opt;
    opt.cfg = cfg;
    if (method == "pipeline") {
        // defaults
    } else if (method == "pipeline-noa") {
        opt.module_a = false;
    } else if (method == "pipeline-nob") {
        opt.module_b = false;
    } else {
        throw std::invalid_argument("evaluate: unknown method '" + method + "'");
    }
    return run_pipeline(raw, opt).fused;
}

}  // namespace

MetricReport evaluate(const std::string& manifest_path,
                      const std::vector<std::string>& methods, const Config& cfg) {
    const DatasetManifest man = load_manifest(manifest_path);
    std::vector<std::string> sorted_methods = methods;
    std::sort(sorted_methods.begin(), sorted_methods.end());
    sorted_methods.erase(std::unique(sorted_methods.begin(), sorted_methods.end()),
                         sorted_methods.end());

    MetricReport report;
    for (const std::string& method : sorted_methods) {
        double sum_ag = 0.0, sum_ie = 0.0, sum_ssim = 0.0;
        int n = 0, n_ssim = 0;
        for (const DatasetItem& item : man.items) {
            MetricRow row;
            row.item = "scene" + std::to_string(item.scene_index) + "/h" +
                       std::to_string(item.level);
            row.method = method;
            try {
                const ImageU16 raw = read_image_u16(item.raw_path);
                Config item_cfg = cfg;
                item_cfg.bit_depth = raw.bit_depth;
                item_cfg.pattern = man.spec.pattern.transmittances;
                const ImageF out = run_method(method, raw, item_cfg);
                row.ag = average_gradient(out);
                row.ie = information_entropy(out);
                try {
                    const ImageF gt = clamped(read_image_f(item.gt_path));
                    row.ssim = ssim(out, gt);
                } catch (const std::exception&) {
                    // reference missing or unusable; AG/IE still stand
                }
                sum_ag += row.ag;
                sum_ie += row.ie;
                if (row.ssim) {
                    sum_ssim += *row.ssim;
                    ++n_ssim;
                }
                ++n;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            report.rows.push_back(std::move(row));
        }
        MetricRow agg;
        agg.item = "MEAN";
        agg.method = method;
        if (n > 0) {
            agg.ag = sum_ag / n;
            agg.ie = sum_ie / n;
        }
        if (n_ssim > 0) agg.ssim = sum_ssim / n_ssim;
        report.aggregate.push_back(std::move(agg));
    }
    return report;
}

std::string MetricReport::to_tsv() const {
    std::ostringstream os;
    os << "item\tmethod\tag\tie\tssim\n";
    auto emit = [&os](const MetricRow& r) {
        if (!r.error.empty()) {
            os << r.item << "\t" << r.method << "\tERROR\tERROR\tERROR\t# " << r.error << "\n";
            return;
        }
        char buf[128];
        if (r.ssim)
            std::snprintf(buf, sizeof buf, "%.6f\t%.6f\t%.6f", r.ag, r.ie, *r.ssim);
        else
            std::snprintf(buf, sizeof buf, "%.6f\t%.6f\t-", r.ag, r.ie);
        os << r.item << "\t" << r.method << "\t" << buf << "\n";
    };
    for (const MetricRow& r : rows) emit(r);
    for (const MetricRow& r : aggregate) emit(r);
    return os.str();
}

}  // namespace svedefog
