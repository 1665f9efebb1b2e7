// metrics.hpp - image quality metrics and the exposure-fusion baseline used
// for relative-ordering evaluation.
//
//   AG    mean of sqrt((dx^2 + dy^2)/2) over forward differences, on the
//         image scaled to 8-bit range
//   IE    Shannon entropy (bits) of the 256-bin histogram after 8-bit
//         quantization
//   SSIM  single-scale structural similarity, 11x11 Gaussian window
//         sigma 1.5, C1=(0.01)^2, C2=(0.03)^2 on unit dynamic range,
//         averaged over fully valid windows

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "svedefog/config.hpp"
#include "svedefog/image.hpp"
#include "svedefog/sve.hpp"

namespace svedefog {

double average_gradient(const ImageF& img);
double information_entropy(const ImageF& img);

// Requires identical dimensions, both at least 11x11.
double ssim(const ImageF& img, const ImageF& ref);

// Classic pixel-weighted exposure fusion: weight = (contrast + eps) *
// well-exposedness, Laplacian-pyramid blend under Gaussian weight pyramids.
// The saturation cue is omitted on a grayscale stack.
ImageF mertens_baseline(const ExposureStack& stack);

struct MetricRow {
    std::string item;
    std::string method;
    double ag = 0.0;
    double ie = 0.0;
    std::optional<double> ssim;
    std::string error;  // non-empty when the item could not be evaluated
};

struct MetricReport {
    std::vector<MetricRow> rows;       // per item, grouped by method
    std::vector<MetricRow> aggregate;  // one mean row per method
    std::string to_tsv() const;
};

// Runs each named method ("pipeline", "pipeline-noa", "pipeline-nob",
// "mertens") over every manifest item. AG/IE always; SSIM against the
// ground truth clamped to [0,1]. Missing files are reported per row and the
// run continues.
MetricReport evaluate(const std::string& manifest_path,
                      const std::vector<std::string>& methods,
                      const Config& cfg = Config{});

}  // namespace svedefog
