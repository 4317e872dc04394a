#include <algorithm>
#include <cmath>
#include <vector>

#include "radpipe/error.hpp"
#include "radpipe/radiomics.hpp"

namespace radpipe {

namespace {

// numpy-style linear-interpolation percentile on sorted data.
double percentile(const std::vector<double>& sorted, double q) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double rank = q / 100.0 * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(rank);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::vector<double> first_order_features(const Volume& v, const Mask& m, const TextureConfig& c) {
    check_aligned(v.grid, m.grid);
    std::vector<double> x;
    for (std::size_t i = 0; i < m.voxels.size(); ++i)
        if (m.voxels[i]) x.push_back(v.voxels[i]);
    if (x.empty()) throw EmptyMaskError("first-order features need a non-empty mask");

    const double n = static_cast<double>(x.size());
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());

    double sum = 0.0, sum_sq = 0.0;
    for (double xi : x) {
        sum += xi;
        sum_sq += xi * xi;
    }
    const double mean = sum / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0, abs_dev = 0.0;
    for (double xi : x) {
        const double d = xi - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
        abs_dev += std::abs(d);
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    const double minimum = sorted.front();
    const double maximum = sorted.back();
    const double p10 = percentile(sorted, 10.0);
    const double p90 = percentile(sorted, 90.0);
    const double median = x.size() % 2 == 1
                              ? sorted[x.size() / 2]
                              : 0.5 * (sorted[x.size() / 2 - 1] + sorted[x.size() / 2]);

    // Robust MAD: mean absolute deviation of the values within [P10, P90].
    double robust_sum = 0.0;
    std::size_t robust_n = 0;
    for (double xi : sorted)
        if (xi >= p10 && xi <= p90) {
            robust_sum += xi;
            ++robust_n;
        }
    double robust_mad = 0.0;
    if (robust_n > 0) {
        const double robust_mean = robust_sum / static_cast<double>(robust_n);
        for (double xi : sorted)
            if (xi >= p10 && xi <= p90) robust_mad += std::abs(xi - robust_mean);
        robust_mad /= static_cast<double>(robust_n);
    }

    // Entropy and Uniformity are defined on the discretized histogram.
    const DiscretizedRoi d = discretize(v, m, c);
    std::vector<double> counts(static_cast<std::size_t>(d.ng), 0.0);
    for (std::int32_t l : d.levels)
        if (l > 0) counts[static_cast<std::size_t>(l - 1)] += 1.0;
    double entropy = 0.0, uniformity = 0.0;
    for (double cnt : counts) {
        if (cnt == 0.0) continue;
        const double p = cnt / n;
        entropy -= p * std::log2(p);
        uniformity += p * p;
    }

    const double voxel_volume =
        v.grid.spacing[0] * v.grid.spacing[1] * v.grid.spacing[2];
    const double skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    const double kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;

    return {
        sum_sq,                    // Energy
        voxel_volume * sum_sq,     // TotalEnergy
        entropy,                   // Entropy
        minimum,                   // Minimum
        p10,                       // 10thPercentile
        p90,                       // 90thPercentile
        maximum,                   // Maximum
        mean,                      // Mean
        median,                    // Median
        percentile(sorted, 75.0) - percentile(sorted, 25.0),  // InterquartileRange
        maximum - minimum,         // Range
        abs_dev / n,               // MeanAbsoluteDeviation
        robust_mad,                // RobustMeanAbsoluteDeviation
        std::sqrt(sum_sq / n),     // RootMeanSquared
        skewness,                  // Skewness
        kurtosis,                  // Kurtosis (non-excess)
        m2,                        // Variance (population)
        uniformity,                // Uniformity
    };
}

}  // namespace radpipe
