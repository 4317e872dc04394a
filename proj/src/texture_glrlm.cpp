#include <algorithm>
#include <cmath>
#include <vector>

#include "radpipe/error.hpp"
#include "radpipe/radiomics.hpp"
#include "texture_common.hpp"

namespace radpipe {

namespace {

// R[(level-1) * max_len + (length-1)] = number of maximal runs.
std::vector<double> run_length_matrix(const DiscretizedRoi& d, const std::array<int, 3>& dir,
                                      std::int64_t max_len) {
    std::vector<double> r(static_cast<std::size_t>(d.ng) * static_cast<std::size_t>(max_len),
                          0.0);
    for (std::int64_t k = 0; k < d.grid.dims[2]; ++k)
        for (std::int64_t j = 0; j < d.grid.dims[1]; ++j)
            for (std::int64_t i = 0; i < d.grid.dims[0]; ++i) {
                const std::int32_t level = d.levels[d.grid.flat(i, j, k)];
                if (level == 0) continue;
                // Only count from the first voxel of a maximal run.
                const std::int64_t pi = i - dir[0], pj = j - dir[1], pk = k - dir[2];
                if (d.grid.contains(pi, pj, pk) &&
                    d.levels[d.grid.flat(pi, pj, pk)] == level)
                    continue;
                std::int64_t len = 1;
                std::int64_t ni = i + dir[0], nj = j + dir[1], nk = k + dir[2];
                while (d.grid.contains(ni, nj, nk) &&
                       d.levels[d.grid.flat(ni, nj, nk)] == level) {
                    ++len;
                    ni += dir[0];
                    nj += dir[1];
                    nk += dir[2];
                }
                r[static_cast<std::size_t>((level - 1) * max_len + (len - 1))] += 1.0;
            }
    return r;
}

std::vector<double> glrlm_direction_features(const std::vector<double>& r, std::int64_t ng,
                                             std::int64_t max_len, double n_voxels) {
    double nr = 0.0;
    for (double v : r) nr += v;

    double sre = 0.0, lre = 0.0, lglre = 0.0, hglre = 0.0;
    double srlgle = 0.0, srhgle = 0.0, lrlgle = 0.0, lrhgle = 0.0;
    double mu_level = 0.0, mu_len = 0.0, run_entropy = 0.0;
    std::vector<double> by_level(static_cast<std::size_t>(ng), 0.0);
    std::vector<double> by_len(static_cast<std::size_t>(max_len), 0.0);
    for (std::int64_t i = 0; i < ng; ++i)
        for (std::int64_t l = 0; l < max_len; ++l) {
            const double v = r[static_cast<std::size_t>(i * max_len + l)];
            if (v == 0.0) continue;
            const double level = static_cast<double>(i + 1);
            const double len = static_cast<double>(l + 1);
            const double level2 = level * level, len2 = len * len;
            sre += v / len2;
            lre += v * len2;
            lglre += v / level2;
            hglre += v * level2;
            srlgle += v / (level2 * len2);
            srhgle += v * level2 / len2;
            lrlgle += v * len2 / level2;
            lrhgle += v * level2 * len2;
            by_level[static_cast<std::size_t>(i)] += v;
            by_len[static_cast<std::size_t>(l)] += v;
            const double p = v / nr;
            mu_level += p * level;
            mu_len += p * len;
            run_entropy -= p * std::log2(p);
        }

    double gln = 0.0;
    for (double v : by_level) gln += v * v;
    double rln = 0.0;
    for (double v : by_len) rln += v * v;

    double glv = 0.0, rv = 0.0;
    for (std::int64_t i = 0; i < ng; ++i)
        for (std::int64_t l = 0; l < max_len; ++l) {
            const double v = r[static_cast<std::size_t>(i * max_len + l)];
            if (v == 0.0) continue;
            const double p = v / nr;
            const double dl = static_cast<double>(i + 1) - mu_level;
            const double dr = static_cast<double>(l + 1) - mu_len;
            glv += p * dl * dl;
            rv += p * dr * dr;
        }

    return {
        sre / nr,
        lre / nr,
        gln / nr,
        gln / (nr * nr),
        rln / nr,
        rln / (nr * nr),
        nr / n_voxels,  // RunPercentage
        glv,
        rv,
        run_entropy,
        lglre / nr,
        hglre / nr,
        srlgle / nr,
        srhgle / nr,
        lrlgle / nr,
        lrhgle / nr,
    };
}

}  // namespace

std::vector<double> glrlm_features(const DiscretizedRoi& d) {
    double n_voxels = 0.0;
    for (std::int32_t l : d.levels)
        if (l > 0) n_voxels += 1.0;
    if (n_voxels == 0.0) throw EmptyMaskError("glrlm: empty mask");

    const std::int64_t max_len =
        std::max({d.grid.dims[0], d.grid.dims[1], d.grid.dims[2]});
    std::vector<std::vector<double>> rows;
    for (const auto& dir : texture::kDirections)
        rows.push_back(glrlm_direction_features(run_length_matrix(d, dir, max_len), d.ng,
                                                max_len, n_voxels));
    return texture::mean_rows(rows);
}

}  // namespace radpipe
