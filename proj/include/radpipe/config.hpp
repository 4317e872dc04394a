#pragma once

#include <cstdint>
#include <string>

#include "radpipe/gbdt.hpp"
#include "radpipe/preprocess.hpp"
#include "radpipe/radiomics.hpp"

namespace radpipe {

struct PreprocessConfig {
    double sigma_mm = 0.5;
    double truncation = 3.0;
    bool reorient = true;
};

struct RoiConfig {
    double expand_fraction = 0.10;
    std::int64_t export_size = 224;
    int export_axis = 2;  // 2 axial (default), 1 coronal, 0 sagittal
};

struct EvalConfig {
    int k = 5;
};

// Everything the pipeline can be told from the outside. Defaults reproduce
// the documented reference behavior; a config file overrides individual keys.
struct PipelineConfig {
    PreprocessConfig preprocess;
    RoiConfig roi;
    TextureConfig radiomics;
    GbdtHyperParams gbdt;
    EvalConfig eval;

    void validate() const;
};

// Strict JSON parsing: unknown sections or keys and type mismatches raise
// ConfigError naming the offender. Missing keys keep their defaults.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config(const std::string& path);

}  // namespace radpipe
