// pipeline.hpp - end-to-end reconstruction from a raw SVE mosaic:
// demux -> full-resolution reconstruction -> haze perception -> segmentation
// -> per-exposure Retinex decomposition, adaptive gamma, reflectance
// enhancement -> dual-channel weights -> pyramid fusion.
//
// Ablations mirror the framework's two adaptive modules:
//   module_a=false  gamma from the whole-image geometric mean
//   module_b=false  uniform 1/K fusion weights

#pragma once

#include <string>

#include "svedefog/config.hpp"
#include "svedefog/enhance.hpp"
#include "svedefog/fuse.hpp"

namespace svedefog {

struct PipelineOptions {
    Config cfg;
    bool module_a = true;
    bool module_b = true;
    bool keep_artifacts = false;  // retain per-stage intermediates in the result
    std::string dump_dir;         // when non-empty, write stage artifacts here
    bool dump_features = false;
    bool dump_regions = false;
    bool dump_all = false;
};

struct PipelineResult {
    ImageF fused;
    // Populated when keep_artifacts is set.
    ExposureStack quarter;
    ExposureStack full;
    HazeMap haze;
    FeatureMaps features;
    RegionMap regions;
    std::vector<ImageF> illum, refl, illum_corr, refl_enh;
    WeightStack weights;
    GammaSchedule schedule;
};

// Errors from any stage are rethrown with the stage name prefixed.
PipelineResult run_pipeline(const ImageU16& raw, const PipelineOptions& opt);

}  // namespace svedefog
