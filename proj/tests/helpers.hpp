#pragma once

// Small construction helpers shared by the test suites.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "radpipe/rng.hpp"
#include "radpipe/volume.hpp"

namespace testutil {

inline radpipe::Volume make_volume(const radpipe::Index3& dims, const std::vector<double>& values,
                                   const radpipe::Vec3& spacing = {1.0, 1.0, 1.0}) {
    radpipe::Volume v;
    v.grid.dims = dims;
    v.grid.spacing = spacing;
    v.voxels = values;
    return v;
}

inline radpipe::Mask make_mask(const radpipe::Index3& dims, const std::vector<std::uint8_t>& fg,
                               const radpipe::Vec3& spacing = {1.0, 1.0, 1.0}) {
    radpipe::Mask m;
    m.grid.dims = dims;
    m.grid.spacing = spacing;
    m.voxels = fg;
    return m;
}

inline radpipe::Mask full_mask(const radpipe::Index3& dims,
                               const radpipe::Vec3& spacing = {1.0, 1.0, 1.0}) {
    radpipe::Mask m;
    m.grid.dims = dims;
    m.grid.spacing = spacing;
    m.voxels.assign(m.grid.voxel_count(), 1);
    return m;
}

// Random ROI with at most `max_levels` distinct bins under bin width 25:
// values are 25*level + jitter inside the bin.
inline radpipe::Volume random_leveled_volume(const radpipe::Index3& dims, int max_levels,
                                             radpipe::SplitMix64& gen) {
    std::vector<double> values(static_cast<std::size_t>(dims[0] * dims[1] * dims[2]));
    for (auto& v : values) {
        const auto level = static_cast<double>(gen.next_below(static_cast<std::uint64_t>(max_levels)));
        v = 25.0 * level + gen.next_double() * 24.9;
    }
    return make_volume(dims, values);
}

// Random mask with the given fill probability; guaranteed at least
// `min_voxels` foreground voxels (re-rolls until satisfied).
inline radpipe::Mask random_mask(const radpipe::Index3& dims, double fill, std::size_t min_voxels,
                                 radpipe::SplitMix64& gen) {
    radpipe::Mask m;
    m.grid.dims = dims;
    for (;;) {
        m.voxels.assign(m.grid.voxel_count(), 0);
        std::size_t count = 0;
        for (auto& v : m.voxels)
            if (gen.next_double() < fill) {
                v = 1;
                ++count;
            }
        if (count >= min_voxels) return m;
    }
}

inline bool close_rel(double a, double b, double tol) {
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= tol * scale;
}

}  // namespace testutil
