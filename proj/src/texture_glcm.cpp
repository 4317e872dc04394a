#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "radpipe/error.hpp"
#include "radpipe/radiomics.hpp"
#include "texture_common.hpp"

namespace radpipe {

namespace {

// Symmetric, normalized co-occurrence matrix for one direction, indexed by
// level-1. Returns false when the direction has no in-mask voxel pair.
bool cooccurrence(const DiscretizedRoi& d, const std::array<int, 3>& dir, int distance,
                  std::vector<double>& p) {
    const std::int64_t ng = d.ng;
    p.assign(static_cast<std::size_t>(ng * ng), 0.0);
    const std::int64_t ox = dir[0] * distance, oy = dir[1] * distance, oz = dir[2] * distance;
    double total = 0.0;
    for (std::int64_t k = 0; k < d.grid.dims[2]; ++k)
        for (std::int64_t j = 0; j < d.grid.dims[1]; ++j)
            for (std::int64_t i = 0; i < d.grid.dims[0]; ++i) {
                const std::int32_t a = d.levels[d.grid.flat(i, j, k)];
                if (a == 0) continue;
                const std::int64_t ni = i + ox, nj = j + oy, nk = k + oz;
                if (!d.grid.contains(ni, nj, nk)) continue;
                const std::int32_t b = d.levels[d.grid.flat(ni, nj, nk)];
                if (b == 0) continue;
                p[static_cast<std::size_t>((a - 1) * ng + (b - 1))] += 1.0;
                p[static_cast<std::size_t>((b - 1) * ng + (a - 1))] += 1.0;
                total += 2.0;
            }
    if (total == 0.0) return false;
    for (double& v : p) v /= total;
    return true;
}

double mcc_from_matrix(const std::vector<double>& p, std::int64_t ng,
                       const std::vector<double>& px) {
    std::vector<int> present;
    for (std::int64_t i = 0; i < ng; ++i)
        if (px[static_cast<std::size_t>(i)] > 0.0) present.push_back(static_cast<int>(i));
    const std::size_t m = present.size();
    if (m < 2) return 1.0;

    Eigen::MatrixXd q(m, m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            double sum = 0.0;
            for (std::size_t c = 0; c < m; ++c) {
                const double pik = p[static_cast<std::size_t>(present[a] * ng + present[c])];
                const double pjk = p[static_cast<std::size_t>(present[b] * ng + present[c])];
                sum += pik * pjk /
                       (px[static_cast<std::size_t>(present[a])] *
                        px[static_cast<std::size_t>(present[c])]);
            }
            q(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = sum;
        }

    Eigen::EigenSolver<Eigen::MatrixXd> solver(q, /*computeEigenvectors=*/false);
    std::vector<double> eigenvalues;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        eigenvalues.push_back(solver.eigenvalues()[i].real());
    std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());
    return std::sqrt(std::max(0.0, eigenvalues[1]));
}

std::vector<double> glcm_direction_features(const std::vector<double>& p, std::int64_t ng,
                                            std::size_t ng_present) {
    const auto at = [&](std::int64_t i, std::int64_t j) {
        return p[static_cast<std::size_t>(i * ng + j)];
    };

    std::vector<double> px(static_cast<std::size_t>(ng), 0.0);
    for (std::int64_t i = 0; i < ng; ++i)
        for (std::int64_t j = 0; j < ng; ++j) px[static_cast<std::size_t>(i)] += at(i, j);

    double mu = 0.0;
    for (std::int64_t i = 0; i < ng; ++i)
        mu += static_cast<double>(i + 1) * px[static_cast<std::size_t>(i)];
    double sigma2 = 0.0;
    for (std::int64_t i = 0; i < ng; ++i) {
        const double dlevel = static_cast<double>(i + 1) - mu;
        sigma2 += dlevel * dlevel * px[static_cast<std::size_t>(i)];
    }

    // Sum and difference marginals: k in [2, 2ng] and [0, ng-1].
    std::vector<double> p_sum(static_cast<std::size_t>(2 * ng + 1), 0.0);
    std::vector<double> p_diff(static_cast<std::size_t>(ng), 0.0);
    for (std::int64_t i = 0; i < ng; ++i)
        for (std::int64_t j = 0; j < ng; ++j) {
            p_sum[static_cast<std::size_t>(i + j + 2)] += at(i, j);
            p_diff[static_cast<std::size_t>(std::abs(i - j))] += at(i, j);
        }

    double autocorrelation = 0.0, cluster_prominence = 0.0, cluster_shade = 0.0;
    double cluster_tendency = 0.0, contrast = 0.0, joint_energy = 0.0, joint_entropy = 0.0;
    double idm = 0.0, idmn = 0.0, id = 0.0, idn = 0.0, inverse_variance = 0.0;
    double max_probability = 0.0, hxy1 = 0.0, hxy2 = 0.0;
    const double ngp = static_cast<double>(ng_present);
    for (std::int64_t i = 0; i < ng; ++i)
        for (std::int64_t j = 0; j < ng; ++j) {
            const double pij = at(i, j);
            const double li = static_cast<double>(i + 1), lj = static_cast<double>(j + 1);
            const double diff = li - lj;
            const double marg =
                px[static_cast<std::size_t>(i)] * px[static_cast<std::size_t>(j)];
            if (pij > 0.0) {
                autocorrelation += li * lj * pij;
                const double dev = li + lj - 2.0 * mu;
                cluster_prominence += dev * dev * dev * dev * pij;
                cluster_shade += dev * dev * dev * pij;
                cluster_tendency += dev * dev * pij;
                contrast += diff * diff * pij;
                joint_energy += pij * pij;
                joint_entropy -= pij * std::log2(pij);
                idm += pij / (1.0 + diff * diff);
                idmn += pij / (1.0 + diff * diff / (ngp * ngp));
                id += pij / (1.0 + std::abs(diff));
                idn += pij / (1.0 + std::abs(diff) / ngp);
                if (i != j) inverse_variance += pij / (diff * diff);
                max_probability = std::max(max_probability, pij);
                hxy1 -= pij * std::log2(marg);
            }
            if (marg > 0.0) hxy2 -= marg * std::log2(marg);
        }

    double hx = 0.0;
    for (std::int64_t i = 0; i < ng; ++i) {
        const double v = px[static_cast<std::size_t>(i)];
        if (v > 0.0) hx -= v * std::log2(v);
    }

    const double correlation =
        sigma2 > 0.0 ? (autocorrelation - mu * mu) / sigma2 : 1.0;
    const double imc1 = hx > 0.0 ? (joint_entropy - hxy1) / hx : 0.0;
    const double imc2_arg = 1.0 - std::exp(-2.0 * (hxy2 - joint_entropy));
    const double imc2 = imc2_arg > 0.0 ? std::sqrt(imc2_arg) : 0.0;

    double diff_avg = 0.0;
    for (std::int64_t k = 0; k < ng; ++k)
        diff_avg += static_cast<double>(k) * p_diff[static_cast<std::size_t>(k)];
    double diff_entropy = 0.0, diff_variance = 0.0;
    for (std::int64_t k = 0; k < ng; ++k) {
        const double v = p_diff[static_cast<std::size_t>(k)];
        if (v > 0.0) diff_entropy -= v * std::log2(v);
        const double dev = static_cast<double>(k) - diff_avg;
        diff_variance += dev * dev * v;
    }

    double sum_avg = 0.0, sum_entropy = 0.0;
    for (std::int64_t k = 2; k <= 2 * ng; ++k) {
        const double v = p_sum[static_cast<std::size_t>(k)];
        sum_avg += static_cast<double>(k) * v;
        if (v > 0.0) sum_entropy -= v * std::log2(v);
    }

    return {
        autocorrelation,
        mu,  // JointAverage
        cluster_prominence,
        cluster_shade,
        cluster_tendency,
        contrast,
        correlation,
        diff_avg,
        diff_entropy,
        diff_variance,
        joint_energy,
        joint_entropy,
        imc1,
        imc2,
        idm,
        idmn,
        id,
        idn,
        inverse_variance,
        max_probability,
        sum_avg,
        sum_entropy,
        sigma2,  // SumSquares
        mcc_from_matrix(p, ng, px),
    };
}

}  // namespace

std::vector<double> glcm_features(const DiscretizedRoi& d, const TextureConfig& c) {
    if (d.ng < 1) throw DegenerateRoiError("glcm: discretized ROI has no levels");
    const std::size_t ng_present = texture::present_levels(d).size();

    std::vector<std::vector<double>> rows;
    std::vector<double> p;
    for (const auto& dir : texture::kDirections)
        if (cooccurrence(d, dir, c.glcm_distance, p))
            rows.push_back(glcm_direction_features(p, d.ng, ng_present));
    if (rows.empty())
        throw DegenerateRoiError("glcm: no in-mask voxel pair in any direction");
    return texture::mean_rows(rows);
}

}  // namespace radpipe
