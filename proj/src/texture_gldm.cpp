#include <cmath>
#include <vector>

#include "radpipe/error.hpp"
#include "radpipe/radiomics.hpp"
#include "texture_common.hpp"

namespace radpipe {

std::vector<double> gldm_features(const DiscretizedRoi& d, const TextureConfig& c) {
    if (d.ng < 1) throw EmptyMaskError("gldm: discretized ROI has no levels");
    if (c.gldm_alpha < 0) throw RangeError("gldm_alpha must be >= 0");

    // dep[(level-1) * (27) + dependence]: dependence = number of 26-neighbors
    // whose level differs by at most alpha; at most 26.
    constexpr std::int64_t kMaxDep = 27;
    std::vector<double> dep(static_cast<std::size_t>(d.ng) * kMaxDep, 0.0);
    double n_voxels = 0.0;
    for (std::int64_t k = 0; k < d.grid.dims[2]; ++k)
        for (std::int64_t j = 0; j < d.grid.dims[1]; ++j)
            for (std::int64_t i = 0; i < d.grid.dims[0]; ++i) {
                const std::int32_t level = d.levels[d.grid.flat(i, j, k)];
                if (level == 0) continue;
                std::int64_t dependence = 0;
                for (int dz = -1; dz <= 1; ++dz)
                    for (int dy = -1; dy <= 1; ++dy)
                        for (int dx = -1; dx <= 1; ++dx) {
                            if (dx == 0 && dy == 0 && dz == 0) continue;
                            const std::int64_t ni = i + dx, nj = j + dy, nk = k + dz;
                            if (!d.grid.contains(ni, nj, nk)) continue;
                            const std::int32_t nl = d.levels[d.grid.flat(ni, nj, nk)];
                            if (nl == 0) continue;
                            if (std::abs(nl - level) <= c.gldm_alpha) ++dependence;
                        }
                dep[static_cast<std::size_t>((level - 1) * kMaxDep + dependence)] += 1.0;
                n_voxels += 1.0;
            }
    if (n_voxels == 0.0) throw EmptyMaskError("gldm: empty mask");

    double sde = 0.0, lde = 0.0, lgle = 0.0, hgle = 0.0;
    double sdlgle = 0.0, sdhgle = 0.0, ldlgle = 0.0, ldhgle = 0.0;
    double mu_level = 0.0, mu_dep = 0.0, dep_entropy = 0.0;
    std::vector<double> by_level(static_cast<std::size_t>(d.ng), 0.0);
    std::vector<double> by_dep(kMaxDep, 0.0);
    for (std::int64_t l = 0; l < d.ng; ++l)
        for (std::int64_t j = 0; j < kMaxDep; ++j) {
            const double v = dep[static_cast<std::size_t>(l * kMaxDep + j)];
            if (v == 0.0) continue;
            const double level = static_cast<double>(l + 1);
            // Dependence j maps to matrix column j+1.
            const double col = static_cast<double>(j + 1);
            const double level2 = level * level, col2 = col * col;
            sde += v / col2;
            lde += v * col2;
            lgle += v / level2;
            hgle += v * level2;
            sdlgle += v / (level2 * col2);
            sdhgle += v * level2 / col2;
            ldlgle += v * col2 / level2;
            ldhgle += v * level2 * col2;
            by_level[static_cast<std::size_t>(l)] += v;
            by_dep[static_cast<std::size_t>(j)] += v;
            const double p = v / n_voxels;
            mu_level += p * level;
            mu_dep += p * col;
            dep_entropy -= p * std::log2(p);
        }

    double gln = 0.0;
    for (double v : by_level) gln += v * v;
    double dn = 0.0;
    for (double v : by_dep) dn += v * v;

    double glv = 0.0, dv = 0.0;
    for (std::int64_t l = 0; l < d.ng; ++l)
        for (std::int64_t j = 0; j < kMaxDep; ++j) {
            const double v = dep[static_cast<std::size_t>(l * kMaxDep + j)];
            if (v == 0.0) continue;
            const double p = v / n_voxels;
            const double dl = static_cast<double>(l + 1) - mu_level;
            const double dj = static_cast<double>(j + 1) - mu_dep;
            glv += p * dl * dl;
            dv += p * dj * dj;
        }

    return {
        sde / n_voxels,
        lde / n_voxels,
        gln / n_voxels,
        dn / n_voxels,
        dn / (n_voxels * n_voxels),
        glv,
        dv,
        dep_entropy,
        lgle / n_voxels,
        hgle / n_voxels,
        sdlgle / n_voxels,
        sdhgle / n_voxels,
        ldlgle / n_voxels,
        ldhgle / n_voxels,
    };
}

}  // namespace radpipe
