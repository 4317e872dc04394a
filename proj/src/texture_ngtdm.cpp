#include <cmath>
#include <vector>

#include "radpipe/error.hpp"
#include "radpipe/radiomics.hpp"
#include "texture_common.hpp"

namespace radpipe {

std::vector<double> ngtdm_features(const DiscretizedRoi& d, const TextureConfig& c) {
    if (d.ng < 1) throw DegenerateRoiError("ngtdm: discretized ROI has no levels");
    const int dist = c.ngtdm_distance;
    if (dist < 1) throw RangeError("ngtdm_distance must be >= 1");

    // n[l] = voxels of level l+1 with a valid neighborhood; s[l] = accumulated
    // absolute difference from the neighborhood mean.
    std::vector<double> n(static_cast<std::size_t>(d.ng), 0.0);
    std::vector<double> s(static_cast<std::size_t>(d.ng), 0.0);
    double n_valid = 0.0;
    for (std::int64_t k = 0; k < d.grid.dims[2]; ++k)
        for (std::int64_t j = 0; j < d.grid.dims[1]; ++j)
            for (std::int64_t i = 0; i < d.grid.dims[0]; ++i) {
                const std::int32_t level = d.levels[d.grid.flat(i, j, k)];
                if (level == 0) continue;
                double sum = 0.0;
                std::int64_t count = 0;
                for (int dz = -dist; dz <= dist; ++dz)
                    for (int dy = -dist; dy <= dist; ++dy)
                        for (int dx = -dist; dx <= dist; ++dx) {
                            if (dx == 0 && dy == 0 && dz == 0) continue;
                            const std::int64_t ni = i + dx, nj = j + dy, nk = k + dz;
                            if (!d.grid.contains(ni, nj, nk)) continue;
                            const std::int32_t nl = d.levels[d.grid.flat(ni, nj, nk)];
                            if (nl == 0) continue;
                            sum += static_cast<double>(nl);
                            ++count;
                        }
                if (count == 0) continue;
                n[static_cast<std::size_t>(level - 1)] += 1.0;
                s[static_cast<std::size_t>(level - 1)] +=
                    std::abs(static_cast<double>(level) - sum / static_cast<double>(count));
                n_valid += 1.0;
            }
    if (n_valid == 0.0)
        throw DegenerateRoiError("ngtdm: no voxel has an in-mask neighbor");

    std::vector<std::int64_t> present;
    for (std::int64_t l = 0; l < d.ng; ++l)
        if (n[static_cast<std::size_t>(l)] > 0.0) present.push_back(l);
    const double ngp = static_cast<double>(present.size());

    double ps_sum = 0.0, s_sum = 0.0;
    for (std::int64_t l : present) {
        ps_sum += n[static_cast<std::size_t>(l)] / n_valid * s[static_cast<std::size_t>(l)];
        s_sum += s[static_cast<std::size_t>(l)];
    }

    const double coarseness = ps_sum < c.epsilon ? 1e6 : 1.0 / ps_sum;

    double contrast = 0.0;
    if (present.size() > 1) {
        double pair_sum = 0.0;
        for (std::int64_t a : present)
            for (std::int64_t b : present) {
                const double pa = n[static_cast<std::size_t>(a)] / n_valid;
                const double pb = n[static_cast<std::size_t>(b)] / n_valid;
                const double diff = static_cast<double>(a - b);
                pair_sum += pa * pb * diff * diff;
            }
        contrast = pair_sum / (ngp * (ngp - 1.0)) * (s_sum / n_valid);
    }

    double busyness_den = 0.0;
    for (std::int64_t a : present)
        for (std::int64_t b : present) {
            const double pa = n[static_cast<std::size_t>(a)] / n_valid;
            const double pb = n[static_cast<std::size_t>(b)] / n_valid;
            busyness_den += std::abs(static_cast<double>(a + 1) * pa -
                                     static_cast<double>(b + 1) * pb);
        }
    const double busyness = busyness_den < c.epsilon ? 0.0 : ps_sum / busyness_den;

    double complexity = 0.0, strength_num = 0.0;
    for (std::int64_t a : present)
        for (std::int64_t b : present) {
            const double pa = n[static_cast<std::size_t>(a)] / n_valid;
            const double pb = n[static_cast<std::size_t>(b)] / n_valid;
            const double sa = s[static_cast<std::size_t>(a)];
            const double sb = s[static_cast<std::size_t>(b)];
            const double diff = std::abs(static_cast<double>(a - b));
            complexity += diff * (pa * sa + pb * sb) / (pa + pb);
            strength_num += (pa + pb) * diff * diff;
        }
    complexity /= n_valid;
    const double strength = s_sum < c.epsilon ? 0.0 : strength_num / s_sum;

    return {coarseness, contrast, busyness, complexity, strength};
}

}  // namespace radpipe
