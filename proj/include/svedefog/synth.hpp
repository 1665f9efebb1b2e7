// synth.hpp - synthetic ground-truth scenes and atmospheric haze, giving the
// pipeline a full-reference evaluation dataset without hardware captures.
//
// Haze follows the scattering model I(x) = J(x) t(x) + A (1 - t(x)) applied
// in radiance space; the SVE simulator downstream handles clipping. All
// generation is seeded and bit-reproducible.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "svedefog/image.hpp"
#include "svedefog/sve.hpp"

namespace svedefog {

enum class SceneKind { checkerboard, ramp, textured_noise, plume_phantom };

SceneKind scene_kind_from_name(const std::string& name);
std::string scene_kind_name(SceneKind kind);

struct SceneSpec {
    SceneKind kind = SceneKind::textured_noise;
    int width = 256;
    int height = 256;
    double dynamic_range = 1.0;  // peak radiance; > 1 exercises saturation
    uint64_t seed = 0;
};

enum class TFieldKind { uniform, gaussian_blobs, smooth_noise };

TFieldKind t_field_from_name(const std::string& name);
std::string t_field_name(TFieldKind kind);

struct HazeSpec {
    double a = 0.85;                          // atmospheric light, in [0,1]
    TFieldKind t_mode = TFieldKind::uniform;
    double t_uniform = 0.5;
    double t_min = 0.05;                      // transmission floor, in (0,1]
    double corr_length = 48.0;                // smooth-noise lattice spacing
    int num_blobs = 4;
    uint64_t seed = 0;

    void validate() const;
};

// Deterministic per seed; plume-phantom peaks at dynamic_range.
ImageF make_scene(const SceneSpec& spec);

// Returns (hazy, t). t lies in [t_min, 1]; the hazy image is the exact
// closed-form pixelwise blend.
std::pair<ImageF, ImageF> apply_haze(const ImageF& j, const HazeSpec& spec);

struct DatasetSpec {
    int num_scenes = 20;
    int width = 256;
    int height = 256;
    std::vector<double> haze_levels{0.9, 0.7, 0.5, 0.3};  // uniform t per level
    double atmos = 0.85;
    double plume_dynamic_range = 2.0;
    uint64_t master_seed = 1;
    // Scene kinds cycled over items.
    std::vector<SceneKind> kinds{SceneKind::plume_phantom, SceneKind::textured_noise};
    AttenuatorPattern pattern;
    SensorModel sensor;  // noiseless 16-bit default
};

// Writes ground-truth PFMs, hazy radiance PFMs, simulated raw mosaics with
// sidecars, and a manifest that records every parameter needed for exact
// regeneration. Returns the manifest path.
std::string make_dataset(const DatasetSpec& spec, const std::string& out_dir);

// Parses the generation header of a manifest and regenerates the dataset
// into out_dir (bit-identical to the original).
std::string replay_manifest(const std::string& manifest_path, const std::string& out_dir);

struct DatasetItem {
    int scene_index = 0;
    int level = 0;
    double t = 1.0;
    std::string gt_path;    // absolute
    std::string hazy_path;  // absolute
    std::string raw_path;   // absolute
};

struct DatasetManifest {
    DatasetSpec spec;
    std::string base_dir;
    std::vector<DatasetItem> items;
};

DatasetManifest load_manifest(const std::string& manifest_path);

}  // namespace svedefog
