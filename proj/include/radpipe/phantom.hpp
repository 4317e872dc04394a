#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radpipe/feature_vector.hpp"
#include "radpipe/volume.hpp"

namespace radpipe {

// Synthetic case: an ellipsoidal organ in a noisy background. Positive cases
// add a darker, noisier halo shell just outside the organ, so the expanded
// ROI sees class signal that the tight mask alone does not.
struct PhantomParams {
    std::int64_t grid = 48;        // cube edge, voxels
    double spacing_mm = 1.0;
    double semi_axis_min = 8.0;    // organ semi-axes drawn uniformly
    double semi_axis_max = 14.0;
    double base_intensity = 60.0;
    double noise_std = 5.0;
    double halo_offset = -25.0;    // halo intensity = base + offset
    double halo_thickness_min = 2.0;
    double halo_thickness_max = 4.0;
    std::uint64_t seed = 0;
};

struct PhantomCase {
    Volume volume;
    Mask mask;
    CaseRecord record;  // case_id empty; label set; no features
};

// Bit-identical output for identical (params, label).
PhantomCase generate_case(const PhantomParams& p, int label);

struct ManifestRow {
    std::string case_id;
    int label = 0;
    std::uint64_t seed = 0;
};

// Writes <case_id>_img.nii / <case_id>_msk.nii pairs plus manifest.csv
// (case_id,label,seed) into out_dir. Per-case seeds are hash64(master_seed,
// case index); reruns are byte-identical.
std::vector<ManifestRow> generate_dataset(int n_pos, int n_neg, std::uint64_t master_seed,
                                          const std::string& out_dir);

void save_manifest(const std::vector<ManifestRow>& rows, const std::string& path);
std::vector<ManifestRow> load_manifest(const std::string& path);

}  // namespace radpipe
