#pragma once

#include <cstdint>
#include <vector>

#include "radpipe/feature_vector.hpp"
#include "radpipe/volume.hpp"

namespace radpipe {

// Knobs shared by the texture families. Defaults are the values used for
// every reported number; all are config-exposed.
struct TextureConfig {
    double bin_width = 25.0;     // gray-level bin width, intensity units
    int glcm_distance = 1;       // co-occurrence offset length, voxels
    int gldm_alpha = 0;          // dependence tolerance in levels
    int ngtdm_distance = 1;      // neighborhood Chebyshev radius, voxels
    double epsilon = 2.2e-16;    // guard for vanishing denominators
};

// Gray-level image over the ROI grid: 0 marks out-of-mask voxels, in-mask
// voxels carry level floor((x - min_in_mask)/bin_width) + 1 in [1, ng].
struct DiscretizedRoi {
    GridGeometry grid;
    std::vector<std::int32_t> levels;
    std::int32_t ng = 0;
    double bin_width = 0.0;
    double min_intensity = 0.0;
};

DiscretizedRoi discretize(const Volume& v, const Mask& m, const TextureConfig& c);

// Each family returns its features in the canonical documented order (the
// suffix order of canonical_feature_names()).
std::vector<double> first_order_features(const Volume& v, const Mask& m, const TextureConfig& c);
std::vector<double> shape_features(const Mask& m);
std::vector<double> glcm_features(const DiscretizedRoi& d, const TextureConfig& c);
std::vector<double> glrlm_features(const DiscretizedRoi& d);
std::vector<double> glszm_features(const DiscretizedRoi& d);
std::vector<double> ngtdm_features(const DiscretizedRoi& d, const TextureConfig& c);
std::vector<double> gldm_features(const DiscretizedRoi& d, const TextureConfig& c);

// All seven families concatenated in canonical order: exactly 107 finite
// values. A non-finite result raises an error naming the offending feature.
FeatureVector extract_all(const Volume& v, const Mask& m, const TextureConfig& c);

}  // namespace radpipe
