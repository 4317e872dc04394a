#pragma once

#include <string>
#include <vector>

#include "radpipe/config.hpp"
#include "radpipe/feature_vector.hpp"
#include "radpipe/phantom.hpp"
#include "radpipe/roi.hpp"
#include "radpipe/volume.hpp"

namespace radpipe {

struct CasePaths {
    std::string case_id;
    int label = 0;
    std::string image_path;
    std::string mask_path;
};

// Resolves <case_id>_img.nii / <case_id>_msk.nii next to the manifest.
std::vector<CasePaths> manifest_case_paths(const std::string& manifest_path);

struct RoiResult {
    Volume roi_volume;
    Mask roi_mask;
    BoundingBox box;  // the expanded box, in preprocessed-grid indices
};

// Reorient (if configured), denoise, locate the mask's bounding box, expand
// it, and crop both images to the expanded box.
RoiResult prepare_roi(const Volume& v, const Mask& m, const PipelineConfig& cfg);

// Full per-case feature path. Features are computed over the whole expanded
// box (the organ plus its captured surroundings), which is what the expansion
// exists for; the tight mask only anchors the box.
FeatureVector extract_case_features(const Volume& v, const Mask& m, const PipelineConfig& cfg);

struct CaseFailure {
    std::string case_id;
    std::string message;
};

struct BatchResult {
    std::vector<CaseRecord> records;  // successful cases, manifest order
    std::vector<CaseFailure> failures;
};

// Feature extraction over a manifest, optionally multi-threaded. Output is
// independent of the job count.
BatchResult extract_features_batch(const std::vector<CasePaths>& cases,
                                   const PipelineConfig& cfg, int jobs);

}  // namespace radpipe
