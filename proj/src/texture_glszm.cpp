#include <cmath>
#include <map>
#include <vector>

#include "radpipe/error.hpp"
#include "radpipe/radiomics.hpp"
#include "texture_common.hpp"

namespace radpipe {

namespace {

// (level, zone size) -> count, zones being 26-connected equal-level
// components.
std::map<std::pair<std::int32_t, std::int64_t>, double> zone_matrix(const DiscretizedRoi& d) {
    std::map<std::pair<std::int32_t, std::int64_t>, double> zones;
    std::vector<char> visited(d.levels.size(), 0);
    std::vector<std::int64_t> stack;
    for (std::int64_t k = 0; k < d.grid.dims[2]; ++k)
        for (std::int64_t j = 0; j < d.grid.dims[1]; ++j)
            for (std::int64_t i = 0; i < d.grid.dims[0]; ++i) {
                const std::int64_t seed = d.grid.flat(i, j, k);
                const std::int32_t level = d.levels[seed];
                if (level == 0 || visited[static_cast<std::size_t>(seed)]) continue;
                std::int64_t size = 0;
                stack.push_back(seed);
                visited[static_cast<std::size_t>(seed)] = 1;
                while (!stack.empty()) {
                    const std::int64_t flat = stack.back();
                    stack.pop_back();
                    ++size;
                    const std::int64_t z = flat / (d.grid.dims[0] * d.grid.dims[1]);
                    const std::int64_t rem = flat % (d.grid.dims[0] * d.grid.dims[1]);
                    const std::int64_t y = rem / d.grid.dims[0];
                    const std::int64_t x = rem % d.grid.dims[0];
                    for (int dz = -1; dz <= 1; ++dz)
                        for (int dy = -1; dy <= 1; ++dy)
                            for (int dx = -1; dx <= 1; ++dx) {
                                if (dx == 0 && dy == 0 && dz == 0) continue;
                                const std::int64_t nx = x + dx, ny = y + dy, nz = z + dz;
                                if (!d.grid.contains(nx, ny, nz)) continue;
                                const std::int64_t nf = d.grid.flat(nx, ny, nz);
                                if (visited[static_cast<std::size_t>(nf)] ||
                                    d.levels[nf] != level)
                                    continue;
                                visited[static_cast<std::size_t>(nf)] = 1;
                                stack.push_back(nf);
                            }
                }
                zones[{level, size}] += 1.0;
            }
    return zones;
}

}  // namespace

std::vector<double> glszm_features(const DiscretizedRoi& d) {
    double n_voxels = 0.0;
    for (std::int32_t l : d.levels)
        if (l > 0) n_voxels += 1.0;
    if (n_voxels == 0.0) throw EmptyMaskError("glszm: empty mask");

    const auto zones = zone_matrix(d);
    double nz = 0.0;
    for (const auto& [key, v] : zones) nz += v;

    double sae = 0.0, lae = 0.0, lglze = 0.0, hglze = 0.0;
    double salgle = 0.0, sahgle = 0.0, lalgle = 0.0, lahgle = 0.0;
    double mu_level = 0.0, mu_size = 0.0, zone_entropy = 0.0;
    std::map<std::int32_t, double> by_level;
    std::map<std::int64_t, double> by_size;
    for (const auto& [key, v] : zones) {
        const double level = static_cast<double>(key.first);
        const double size = static_cast<double>(key.second);
        const double level2 = level * level, size2 = size * size;
        sae += v / size2;
        lae += v * size2;
        lglze += v / level2;
        hglze += v * level2;
        salgle += v / (level2 * size2);
        sahgle += v * level2 / size2;
        lalgle += v * size2 / level2;
        lahgle += v * level2 * size2;
        by_level[key.first] += v;
        by_size[key.second] += v;
        const double p = v / nz;
        mu_level += p * level;
        mu_size += p * size;
        zone_entropy -= p * std::log2(p);
    }

    double gln = 0.0;
    for (const auto& [level, v] : by_level) gln += v * v;
    double szn = 0.0;
    for (const auto& [size, v] : by_size) szn += v * v;

    double glv = 0.0, zv = 0.0;
    for (const auto& [key, v] : zones) {
        const double p = v / nz;
        const double dl = static_cast<double>(key.first) - mu_level;
        const double dz = static_cast<double>(key.second) - mu_size;
        glv += p * dl * dl;
        zv += p * dz * dz;
    }

    return {
        sae / nz,
        lae / nz,
        gln / nz,
        gln / (nz * nz),
        szn / nz,
        szn / (nz * nz),
        nz / n_voxels,  // ZonePercentage
        glv,
        zv,
        zone_entropy,
        lglze / nz,
        hglze / nz,
        salgle / nz,
        sahgle / nz,
        lalgle / nz,
        lahgle / nz,
    };
}

}  // namespace radpipe
