#include <algorithm>
#include <cmath>
#include <limits>

#include "radpipe/error.hpp"
#include "radpipe/radiomics.hpp"
#include "texture_common.hpp"

namespace radpipe {

DiscretizedRoi discretize(const Volume& v, const Mask& m, const TextureConfig& c) {
    check_aligned(v.grid, m.grid);
    if (c.bin_width <= 0.0) throw RangeError("bin_width must be > 0");
    if (m.foreground_count() == 0) throw EmptyMaskError("discretize: mask has no foreground");

    double min_in_mask = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m.voxels.size(); ++i)
        if (m.voxels[i]) min_in_mask = std::min(min_in_mask, v.voxels[i]);

    DiscretizedRoi d;
    d.grid = v.grid;
    d.bin_width = c.bin_width;
    d.min_intensity = min_in_mask;
    d.levels.assign(v.voxels.size(), 0);
    for (std::size_t i = 0; i < m.voxels.size(); ++i) {
        if (!m.voxels[i]) continue;
        const auto level =
            static_cast<std::int32_t>(std::floor((v.voxels[i] - min_in_mask) / c.bin_width)) + 1;
        d.levels[i] = level;
        d.ng = std::max(d.ng, level);
    }
    return d;
}

namespace texture {

std::vector<std::int32_t> present_levels(const DiscretizedRoi& d) {
    std::vector<char> seen(static_cast<std::size_t>(d.ng) + 1, 0);
    for (std::int32_t l : d.levels)
        if (l > 0) seen[static_cast<std::size_t>(l)] = 1;
    std::vector<std::int32_t> levels;
    for (std::int32_t l = 1; l <= d.ng; ++l)
        if (seen[static_cast<std::size_t>(l)]) levels.push_back(l);
    return levels;
}

std::vector<double> mean_rows(const std::vector<std::vector<double>>& rows) {
    std::vector<double> mean(rows.front().size(), 0.0);
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) mean[i] += row[i];
    for (double& v : mean) v /= static_cast<double>(rows.size());
    return mean;
}

}  // namespace texture

}  // namespace radpipe
