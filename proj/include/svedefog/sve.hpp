// sve.hpp - spatially varying exposure capture model.
//
// The sensor carries a repeating 2x2 attenuator pattern; exposure k = 1..4
// occupies the macro-pixel cell at row offset (k-1)/2, column offset
// (k-1) mod 2. A raw frame is demultiplexed into four quarter-resolution
// sub-images, one per exposure, then interpolated back to full resolution.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "svedefog/image.hpp"

namespace svedefog {

struct AttenuatorPattern {
    // Transmittances for k = 1..4, strictly decreasing, in (0,1].
    std::array<double, 4> transmittances{1.0, 0.55, 0.45, 0.0025};

    static int row_offset(int k) { return (k - 1) / 2; }
    static int col_offset(int k) { return (k - 1) % 2; }

    void validate() const;
};

struct SensorModel {
    double full_well = 1.0;        // normalized saturation level
    int bit_depth = 16;            // 8..16
    double read_noise_sigma = 0.0; // additive Gaussian, normalized units
    double prnu_sigma = 0.0;       // relative gain std-dev
    uint64_t seed = 0;

    void validate() const;
};

struct ExposureStack {
    enum class Resolution { quarter, full };
    std::vector<ImageF> images;
    Resolution resolution = Resolution::quarter;

    int k() const { return static_cast<int>(images.size()); }
    int width() const { return images.empty() ? 0 : images[0].width; }
    int height() const { return images.empty() ? 0 : images[0].height; }
};

// Forward model: per pixel, scene radiance times the cell transmittance,
// PRNU gain, additive read noise, clip to [0, full_well], quantize.
// Deterministic given the seed. Scene dimensions must be even and radiance
// non-negative (values above 1 represent HDR radiance and will clip).
ImageU16 simulate_capture(const ImageF& scene, const AttenuatorPattern& pattern,
                          const SensorModel& model);

// Splits the mosaic into four quarter-resolution sub-images, normalized
// to [0,1]. Every raw pixel lands in exactly one sub-image.
ExposureStack demux(const ImageU16& raw, const AttenuatorPattern& pattern);

// Gradient-corrected interpolation of each sub-image back to the raw grid.
// Per axis, a missing sample between known neighbors is predicted as the
// linear midpoint b plus gain*(b - w)/4 where w is the midpoint of the
// next-outer neighbor pair (gain 0.5 reproduces the classic 5-tap
// gradient-corrected filter). Known sample sites are preserved exactly;
// border accesses extrapolate linearly so ramps stay exact.
ExposureStack reconstruct_full(const ExposureStack& stack, double gain = 0.5);

// Calibration diagnostic: per exposure pair, median intensity ratio over
// pixels that are unsaturated and above the noise floor in both frames.
struct PairCheck {
    int k_num = 0;
    int k_den = 0;
    double measured_ratio = 0.0;
    double expected_ratio = 0.0;
    double valid_fraction = 0.0;
    bool flagged = false;  // no valid pixels
};

struct ConsistencyReport {
    std::vector<PairCheck> pairs;
    std::string to_text() const;
};

ConsistencyReport exposure_consistency_check(const ExposureStack& stack,
                                             const AttenuatorPattern& pattern,
                                             double saturation_level = 0.995,
                                             double noise_floor = 0.002);

// Raw-frame sidecar (plain-text key=value) so a mosaic on disk carries its
// capture parameters.
void write_raw_sidecar(const std::string& path, const AttenuatorPattern& pattern,
                       const SensorModel& model);
void read_raw_sidecar(const std::string& path, AttenuatorPattern& pattern,
                      SensorModel& model);

}  // namespace svedefog
