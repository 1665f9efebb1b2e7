// config.hpp - flat key=value configuration covering every tunable in the
// pipeline. Precedence: built-in defaults, then file, then flag overrides.
// Unknown keys are rejected by name; the effective config is echoed next to
// outputs so any run can be reproduced.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "svedefog/fuse.hpp"
#include "svedefog/hazemap.hpp"
#include "svedefog/sve.hpp"

namespace svedefog {

struct Config {
    // capture
    std::array<double, 4> pattern{1.0, 0.55, 0.45, 0.0025};
    int bit_depth = 16;
    double noise_sigma = 0.0;
    double prnu_sigma = 0.0;
    uint64_t seed = 0;
    double interp_gain = 0.5;

    // haze perception
    double alpha = 0.2, beta = 0.2, gamma = 0.3, sigma = 0.3;
    double c_bi = 0.0, c_wc = 0.0, c_cf = 0.0, c_v = 0.0;
    double eps_bright = 1.0 / 65535.0;
    int patch_radius = 0;

    // enhancement
    int regions = 4;
    // Reference brightness for the adaptive gamma. The correction is the
    // identity when a layer's paired-region geometric mean sits at zeta/2,
    // so 0.83 anchors the neutral point at ~0.41, the geometric-mean
    // brightness of a well-exposed unit-range image.
    std::array<double, 4> zeta{0.83, 0.83, 0.83, 0.83};
    int wgif_radius = 8;
    double wgif_reg = 1e-2;
    double detail_gain = 1.5;

    // fusion
    double sigma_g = 0.2;
    int hist_bins = 256;
    std::string recombine = "separate";  // "separate" | "literal"
    int depth_override = 0;              // 0 = from image size

    AttenuatorPattern attenuator() const;
    SensorModel sensor() const;
    HazeParams haze_params() const;
    FusionConfig fusion() const;
};

// Sets one key; throws std::invalid_argument naming the key when unknown or
// unparsable.
void config_set(Config& cfg, const std::string& key, const std::string& value);

// Defaults <- file (optional, "" skips) <- overrides, in that order.
// File syntax: key=value, '#' comments, blank lines. Parse errors carry the
// line number.
Config load_config(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& overrides = {});

// Full key=value listing; reloading it reproduces the same config.
std::string config_to_text(const Config& cfg);

void write_config_sidecar(const std::string& path, const Config& cfg);

}  // namespace svedefog
