#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <doctest.h>

#include <cmath>
#include <vector>

#include "radpipe/error.hpp"
#include "radpipe/feature_vector.hpp"
#include "radpipe/radiomics.hpp"
#include "radpipe/rng.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using radpipe::Index3;
using radpipe::Mask;
using radpipe::SplitMix64;
using radpipe::TextureConfig;
using radpipe::Volume;
using testutil::close_rel;
using testutil::full_mask;
using testutil::make_mask;
using testutil::make_volume;

namespace {

const std::vector<std::string>& suffixes() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& n : radpipe::canonical_feature_names())
            if (n.rfind("firstorder_", 0) == 0) out.push_back(n.substr(11));
        return out;
    }();
    return names;
}

double value_of(const std::vector<double>& f, const std::string& name) {
    for (std::size_t i = 0; i < suffixes().size(); ++i)
        if (suffixes()[i] == name) return f[i];
    REQUIRE_MESSAGE(false, "unknown first-order feature " << name);
    return 0.0;
}

}  // namespace

TEST_CASE("first order: 1,2,3,4 hand computations") {
    TextureConfig cfg;
    const Volume v = make_volume({4, 1, 1}, {1.0, 2.0, 3.0, 4.0});
    const auto f = radpipe::first_order_features(v, full_mask({4, 1, 1}), cfg);
    REQUIRE(f.size() == 18);
    CHECK(value_of(f, "Mean") == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(value_of(f, "Energy") == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(value_of(f, "Range") == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(value_of(f, "Variance") == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(value_of(f, "Median") == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(value_of(f, "Minimum") == 1.0);
    CHECK(value_of(f, "Maximum") == 4.0);
    CHECK(value_of(f, "RootMeanSquared") == doctest::Approx(std::sqrt(7.5)).epsilon(1e-12));
    // Linear-interpolation percentiles: rank = p/100 * (n-1).
    CHECK(value_of(f, "10thPercentile") == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(value_of(f, "90thPercentile") == doctest::Approx(3.7).epsilon(1e-12));
    CHECK(value_of(f, "InterquartileRange") == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(value_of(f, "MeanAbsoluteDeviation") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(value_of(f, "Skewness") == doctest::Approx(0.0));
    // Non-excess kurtosis: m4/m2^2 = 2.5625/1.5625.
    CHECK(value_of(f, "Kurtosis") == doctest::Approx(2.5625 / 1.5625).epsilon(1e-12));
}

TEST_CASE("first order: constant region conventions") {
    TextureConfig cfg;
    const Volume v = make_volume({3, 3, 1}, std::vector<double>(9, 5.0));
    const auto f = radpipe::first_order_features(v, full_mask({3, 3, 1}), cfg);
    CHECK(value_of(f, "Variance") == 0.0);
    CHECK(value_of(f, "Entropy") == 0.0);
    CHECK(value_of(f, "Uniformity") == 1.0);
    CHECK(value_of(f, "Skewness") == 0.0);
    CHECK(value_of(f, "Kurtosis") == 0.0);
    CHECK(value_of(f, "Range") == 0.0);
}

TEST_CASE("first order: single voxel conventions") {
    TextureConfig cfg;
    const Volume v = make_volume({3, 1, 1}, {1.0, 9.0, 2.0});
    const Mask m = make_mask({3, 1, 1}, {0, 1, 0});
    const auto f = radpipe::first_order_features(v, m, cfg);
    CHECK(value_of(f, "Mean") == 9.0);
    CHECK(value_of(f, "Median") == 9.0);
    CHECK(value_of(f, "10thPercentile") == 9.0);
    CHECK(value_of(f, "90thPercentile") == 9.0);
    CHECK(value_of(f, "Skewness") == 0.0);
    CHECK(value_of(f, "Kurtosis") == 0.0);
    CHECK(value_of(f, "Variance") == 0.0);
}

TEST_CASE("first order: TotalEnergy scales with the voxel volume") {
    TextureConfig cfg;
    const Volume v = make_volume({4, 1, 1}, {1.0, 2.0, 3.0, 4.0}, {1.0, 2.0, 3.0});
    const auto f =
        radpipe::first_order_features(v, full_mask({4, 1, 1}, {1.0, 2.0, 3.0}), cfg);
    CHECK(value_of(f, "Energy") == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(value_of(f, "TotalEnergy") == doctest::Approx(180.0).epsilon(1e-12));
}

TEST_CASE("first order: empty mask is rejected") {
    TextureConfig cfg;
    const Volume v = make_volume({2, 2, 1}, {1.0, 2.0, 3.0, 4.0});
    const Mask m = make_mask({2, 2, 1}, {0, 0, 0, 0});
    CHECK_THROWS_AS((void)radpipe::first_order_features(v, m, cfg), radpipe::EmptyMaskError);
}

TEST_CASE("first order: random masked regions match the direct-summation oracle") {
    TextureConfig cfg;
    SplitMix64 gen(0xf1257);
    for (int round = 0; round < 200; ++round) {
        const Index3 dims{2 + static_cast<std::int64_t>(gen.next_below(6)),
                          2 + static_cast<std::int64_t>(gen.next_below(6)),
                          1 + static_cast<std::int64_t>(gen.next_below(4))};
        Volume v = make_volume(dims, {});
        v.voxels.resize(v.grid.voxel_count());
        for (auto& x : v.voxels) x = gen.next_gaussian() * 50.0 + 100.0 * gen.next_double();
        const Mask m = testutil::random_mask(dims, 0.6, 2, gen);

        std::vector<double> masked;
        for (std::size_t i = 0; i < v.voxels.size(); ++i)
            if (m.voxels[i]) masked.push_back(v.voxels[i]);

        const auto got = radpipe::first_order_features(v, m, cfg);
        const auto expected = oracle::first_order(masked, {1.0, 1.0, 1.0}, cfg.bin_width);
        REQUIRE(got.size() == suffixes().size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            INFO("firstorder_" << suffixes()[i]);
            if (!close_rel(got[i], expected.at(suffixes()[i]), 1e-9)) {
                std::fprintf(stderr, "MISMATCH %s lib=%.17g oracle=%.17g n=%zu\nvals:",
                             suffixes()[i].c_str(), got[i], expected.at(suffixes()[i]),
                             masked.size());
                for (double x : masked) std::fprintf(stderr, " %.17g", x);
                std::fprintf(stderr, "\n");
            }
            CHECK(close_rel(got[i], expected.at(suffixes()[i]), 1e-9));
        }
    }
}
