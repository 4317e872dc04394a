#include "radpipe/pipeline.hpp"

#include <atomic>
#include <filesystem>
#include <thread>

#include "radpipe/error.hpp"
#include "radpipe/nifti.hpp"
#include "radpipe/preprocess.hpp"
#include "radpipe/radiomics.hpp"

namespace radpipe {

std::vector<CasePaths> manifest_case_paths(const std::string& manifest_path) {
    const std::vector<ManifestRow> rows = load_manifest(manifest_path);
    const std::filesystem::path dir = std::filesystem::path(manifest_path).parent_path();
    std::vector<CasePaths> cases;
    cases.reserve(rows.size());
    for (const auto& row : rows) {
        CasePaths c;
        c.case_id = row.case_id;
        c.label = row.label;
        c.image_path = (dir / (row.case_id + "_img.nii")).string();
        c.mask_path = (dir / (row.case_id + "_msk.nii")).string();
        cases.push_back(std::move(c));
    }
    return cases;
}

RoiResult prepare_roi(const Volume& v, const Mask& m, const PipelineConfig& cfg) {
    Volume vol = cfg.preprocess.reorient ? reorient_to_canonical(v) : v;
    Mask mask = cfg.preprocess.reorient ? reorient_to_canonical(m) : m;
    check_aligned(vol.grid, mask.grid);

    vol = gaussian_denoise(vol, {cfg.preprocess.sigma_mm, cfg.preprocess.truncation});

    RoiResult out;
    out.box = expand_box(mask_bounding_box(mask), cfg.roi.expand_fraction, mask.grid.dims);
    out.roi_volume = crop(vol, out.box);
    out.roi_mask = crop(mask, out.box);
    return out;
}

FeatureVector extract_case_features(const Volume& v, const Mask& m, const PipelineConfig& cfg) {
    const RoiResult roi = prepare_roi(v, m, cfg);
    // The feature region is the full expanded box: the paper's 10% expansion
    // exists precisely to include the peri-organ tissue in the features.
    Mask region;
    region.grid = roi.roi_volume.grid;
    region.voxels.assign(roi.roi_volume.voxels.size(), 1);
    return extract_all(roi.roi_volume, region, cfg.radiomics);
}

BatchResult extract_features_batch(const std::vector<CasePaths>& cases,
                                   const PipelineConfig& cfg, int jobs) {
    struct Slot {
        bool ok = false;
        CaseRecord record;
        std::string error;
    };
    std::vector<Slot> slots(cases.size());

    const auto process = [&](std::size_t i) {
        Slot& slot = slots[i];
        slot.record.case_id = cases[i].case_id;
        slot.record.label = cases[i].label;
        try {
            const Volume v = load_volume(cases[i].image_path);
            const Mask m = load_mask(cases[i].mask_path);
            slot.record.features = extract_case_features(v, m, cfg);
            slot.ok = true;
        } catch (const std::exception& e) {
            slot.error = e.what();
        }
    };

    const int workers = std::max(1, jobs);
    if (workers == 1 || cases.size() <= 1) {
        for (std::size_t i = 0; i < cases.size(); ++i) process(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t n_threads =
            std::min<std::size_t>(static_cast<std::size_t>(workers), cases.size());
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cases.size();
                     i = next.fetch_add(1))
                    process(i);
            });
        for (auto& thread : pool) thread.join();
    }

    BatchResult result;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (slots[i].ok)
            result.records.push_back(std::move(slots[i].record));
        else
            result.failures.push_back({cases[i].case_id, slots[i].error});
    }
    return result;
}

}  // namespace radpipe
