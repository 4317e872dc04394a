#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "radpipe/error.hpp"
#include "radpipe/feature_vector.hpp"
#include "radpipe/radiomics.hpp"
#include "radpipe/rng.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using radpipe::DegenerateRoiError;
using radpipe::DiscretizedRoi;
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

// Canonical per-family suffix order, taken from the frozen 107-name list.
std::vector<std::string> family_suffixes(const std::string& prefix) {
    std::vector<std::string> out;
    for (const auto& name : radpipe::canonical_feature_names())
        if (name.rfind(prefix, 0) == 0) out.push_back(name.substr(prefix.size()));
    return out;
}

oracle::Grid to_oracle_grid(const Volume& v, const Mask& m) {
    oracle::Grid g;
    g.dims = v.grid.dims;
    g.values = v.voxels;
    g.mask = m.voxels;
    return g;
}

void compare_family(const std::vector<double>& got, const std::string& prefix,
                    const oracle::FeatureMap& expected, double tol) {
    const auto suffixes = family_suffixes(prefix);
    REQUIRE(got.size() == suffixes.size());
    REQUIRE(expected.size() == suffixes.size());
    for (std::size_t i = 0; i < suffixes.size(); ++i) {
        INFO(prefix << suffixes[i]);
        const auto it = expected.find(suffixes[i]);
        REQUIRE(it != expected.end());
        CHECK(close_rel(got[i], it->second, tol));
    }
}

double family_value(const std::vector<double>& got, const std::string& prefix,
                    const std::string& suffix) {
    const auto suffixes = family_suffixes(prefix);
    for (std::size_t i = 0; i < suffixes.size(); ++i)
        if (suffixes[i] == suffix) return got[i];
    REQUIRE_MESSAGE(false, "unknown feature " << prefix << suffix);
    return 0.0;
}

}  // namespace

TEST_CASE("discretize maps intensities to fixed-width bins anchored at the minimum") {
    TextureConfig cfg;
    const Volume v = make_volume({4, 1, 1}, {0.0, 24.9, 25.0, 100.0});
    const Mask m = full_mask({4, 1, 1});
    const DiscretizedRoi d = radpipe::discretize(v, m, cfg);
    CHECK(d.levels[0] == 1);
    CHECK(d.levels[1] == 1);
    CHECK(d.levels[2] == 2);
    CHECK(d.levels[3] == 5);
    CHECK(d.ng == 5);
    CHECK(d.min_intensity == 0.0);
}

TEST_CASE("discretize: constant region collapses to a single level") {
    TextureConfig cfg;
    const Volume v = make_volume({3, 3, 1}, std::vector<double>(9, 42.0));
    const DiscretizedRoi d = radpipe::discretize(v, full_mask({3, 3, 1}), cfg);
    for (int l : d.levels) CHECK(l == 1);
    CHECK(d.ng == 1);
}

TEST_CASE("discretize: unit bin width on integer intensities is the identity") {
    TextureConfig cfg;
    cfg.bin_width = 1.0;
    std::vector<double> vals(10);
    for (int i = 0; i < 10; ++i) vals[static_cast<std::size_t>(i)] = i + 1.0;
    const DiscretizedRoi d = radpipe::discretize(make_volume({10, 1, 1}, vals),
                                                 full_mask({10, 1, 1}), cfg);
    for (int i = 0; i < 10; ++i) CHECK(d.levels[static_cast<std::size_t>(i)] == i + 1);
    CHECK(d.ng == 10);
}

TEST_CASE("discretize: out-of-mask voxels stay level 0") {
    TextureConfig cfg;
    const Volume v = make_volume({2, 1, 1}, {10.0, 90.0});
    const Mask m = make_mask({2, 1, 1}, {0, 1});
    const DiscretizedRoi d = radpipe::discretize(v, m, cfg);
    CHECK(d.levels[0] == 0);
    CHECK(d.levels[1] == 1);  // the only in-mask voxel anchors the bins
    CHECK(d.ng == 1);
}

TEST_CASE("glcm: constant region has a single co-occurrence cell") {
    TextureConfig cfg;
    const Volume v = make_volume({3, 3, 3}, std::vector<double>(27, 7.0));
    const DiscretizedRoi d = radpipe::discretize(v, full_mask({3, 3, 3}), cfg);
    const auto f = radpipe::glcm_features(d, cfg);
    CHECK(family_value(f, "glcm_", "JointEnergy") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(family_value(f, "glcm_", "Contrast") == doctest::Approx(0.0));
    CHECK(family_value(f, "glcm_", "MaximumProbability") == doctest::Approx(1.0).epsilon(1e-12));
    // Conventions for a degenerate (single-level) distribution.
    CHECK(family_value(f, "glcm_", "Correlation") == 1.0);
    CHECK(family_value(f, "glcm_", "Imc1") == 0.0);
    CHECK(family_value(f, "glcm_", "Imc2") == 0.0);
    CHECK(family_value(f, "glcm_", "Mcc") == 1.0);
}

TEST_CASE("glcm: two-level stripe along x gives the hand-counted matrix") {
    // 8x1x1 stripe 1,2,1,2,...: only the x direction has pairs, and the
    // symmetrized matrix is P(1,2) = P(2,1) = 0.5.
    TextureConfig cfg;
    std::vector<double> vals(8);
    for (int i = 0; i < 8; ++i) vals[static_cast<std::size_t>(i)] = (i % 2 == 0) ? 0.0 : 30.0;
    const DiscretizedRoi d = radpipe::discretize(make_volume({8, 1, 1}, vals),
                                                 full_mask({8, 1, 1}), cfg);
    const auto f = radpipe::glcm_features(d, cfg);
    CHECK(family_value(f, "glcm_", "Contrast") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(family_value(f, "glcm_", "MaximumProbability") == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(family_value(f, "glcm_", "JointEntropy") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(family_value(f, "glcm_", "JointEnergy") == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("glcm: single isolated voxel has no pair in any direction") {
    TextureConfig cfg;
    const Volume v = make_volume({3, 3, 3}, std::vector<double>(27, 1.0));
    Mask m = make_mask({3, 3, 3}, std::vector<std::uint8_t>(27, 0));
    m.voxels[m.grid.flat(1, 1, 1)] = 1;
    const DiscretizedRoi d = radpipe::discretize(v, m, cfg);
    CHECK_THROWS_AS((void)radpipe::glcm_features(d, cfg), DegenerateRoiError);
}

TEST_CASE("glrlm: constant 1x1x4 rod averages the x-direction run with unit runs elsewhere") {
    // Along x: one run of length 4 (LRE 16, RP 0.25). Each of the other 12
    // directions sees four runs of length 1 (LRE 1, RP 1).
    TextureConfig cfg;
    const DiscretizedRoi d = radpipe::discretize(
        make_volume({4, 1, 1}, std::vector<double>(4, 5.0)), full_mask({4, 1, 1}), cfg);
    const auto f = radpipe::glrlm_features(d);
    CHECK(family_value(f, "glrlm_", "LongRunEmphasis") ==
          doctest::Approx((16.0 + 12.0) / 13.0).epsilon(1e-12));
    CHECK(family_value(f, "glrlm_", "RunPercentage") ==
          doctest::Approx((0.25 + 12.0) / 13.0).epsilon(1e-12));
}

TEST_CASE("glrlm: alternating levels have only unit runs in every direction") {
    TextureConfig cfg;
    std::vector<double> vals(4);
    for (int i = 0; i < 4; ++i) vals[static_cast<std::size_t>(i)] = (i % 2 == 0) ? 0.0 : 30.0;
    const DiscretizedRoi d = radpipe::discretize(make_volume({4, 1, 1}, vals),
                                                 full_mask({4, 1, 1}), cfg);
    const auto f = radpipe::glrlm_features(d);
    CHECK(family_value(f, "glrlm_", "ShortRunEmphasis") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(family_value(f, "glrlm_", "LongRunEmphasis") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(family_value(f, "glrlm_", "RunPercentage") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("glszm: constant 2x2x2 region is one zone of size 8") {
    TextureConfig cfg;
    const DiscretizedRoi d = radpipe::discretize(
        make_volume({2, 2, 2}, std::vector<double>(8, 1.0)), full_mask({2, 2, 2}), cfg);
    const auto f = radpipe::glszm_features(d);
    CHECK(family_value(f, "glszm_", "ZonePercentage") == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(family_value(f, "glszm_", "LargeAreaEmphasis") == doctest::Approx(64.0).epsilon(1e-12));
    CHECK(family_value(f, "glszm_", "SmallAreaEmphasis") ==
          doctest::Approx(1.0 / 64.0).epsilon(1e-12));
}

TEST_CASE("glszm: non-adjacent equal-level voxels are separate zones") {
    TextureConfig cfg;
    const Volume v = make_volume({4, 4, 4}, std::vector<double>(64, 9.0));
    Mask m = make_mask({4, 4, 4}, std::vector<std::uint8_t>(64, 0));
    m.voxels[m.grid.flat(0, 0, 0)] = 1;
    m.voxels[m.grid.flat(3, 3, 3)] = 1;
    const DiscretizedRoi d = radpipe::discretize(v, m, cfg);
    const auto f = radpipe::glszm_features(d);
    // Two zones of size 1 sharing one level.
    CHECK(family_value(f, "glszm_", "ZonePercentage") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(family_value(f, "glszm_", "GrayLevelNonUniformity") ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(family_value(f, "glszm_", "SmallAreaEmphasis") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("glszm: diagonal touch counts as connected (26-connectivity)") {
    TextureConfig cfg;
    const Volume v = make_volume({2, 2, 2}, std::vector<double>(8, 9.0));
    Mask m = make_mask({2, 2, 2}, std::vector<std::uint8_t>(8, 0));
    m.voxels[m.grid.flat(0, 0, 0)] = 1;
    m.voxels[m.grid.flat(1, 1, 1)] = 1;  // body-diagonal neighbor
    const DiscretizedRoi d = radpipe::discretize(v, m, cfg);
    const auto f = radpipe::glszm_features(d);
    CHECK(family_value(f, "glszm_", "ZonePercentage") == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(family_value(f, "glszm_", "LargeAreaEmphasis") == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("ngtdm: constant region hits every degenerate convention") {
    TextureConfig cfg;
    const DiscretizedRoi d = radpipe::discretize(
        make_volume({3, 3, 3}, std::vector<double>(27, 3.0)), full_mask({3, 3, 3}), cfg);
    const auto f = radpipe::ngtdm_features(d, cfg);
    CHECK(family_value(f, "ngtdm_", "Coarseness") == 1e6);
    CHECK(family_value(f, "ngtdm_", "Busyness") == 0.0);
    CHECK(family_value(f, "ngtdm_", "Complexity") == 0.0);
    CHECK(family_value(f, "ngtdm_", "Contrast") == 0.0);
    CHECK(family_value(f, "ngtdm_", "Strength") == 0.0);
}

TEST_CASE("ngtdm: an isolated voxel has no valid neighborhood") {
    TextureConfig cfg;
    const Volume v = make_volume({5, 5, 5}, std::vector<double>(125, 1.0));
    Mask m = make_mask({5, 5, 5}, std::vector<std::uint8_t>(125, 0));
    m.voxels[m.grid.flat(2, 2, 2)] = 1;
    const DiscretizedRoi d = radpipe::discretize(v, m, cfg);
    CHECK_THROWS_AS((void)radpipe::ngtdm_features(d, cfg), DegenerateRoiError);
}

TEST_CASE("gldm: constant 3x3x3 region counts neighbors exactly") {
    // Dependences: center 26, face centers 17, edge midpoints 11, corners 7;
    // the matrix column is dependence+1.
    TextureConfig cfg;
    const DiscretizedRoi d = radpipe::discretize(
        make_volume({3, 3, 3}, std::vector<double>(27, 2.0)), full_mask({3, 3, 3}), cfg);
    const auto f = radpipe::gldm_features(d, cfg);
    const double lde = (1.0 * 27 * 27 + 6.0 * 18 * 18 + 12.0 * 12 * 12 + 8.0 * 8 * 8) / 27.0;
    CHECK(family_value(f, "gldm_", "LargeDependenceEmphasis") ==
          doctest::Approx(lde).epsilon(1e-12));
    CHECK(family_value(f, "gldm_", "GrayLevelNonUniformity") ==
          doctest::Approx(27.0).epsilon(1e-12));
}

TEST_CASE("gldm: a single in-mask voxel has dependence 0") {
    TextureConfig cfg;
    const Volume v = make_volume({3, 3, 3}, std::vector<double>(27, 2.0));
    Mask m = make_mask({3, 3, 3}, std::vector<std::uint8_t>(27, 0));
    m.voxels[m.grid.flat(1, 1, 1)] = 1;
    const DiscretizedRoi d = radpipe::discretize(v, m, cfg);
    const auto f = radpipe::gldm_features(d, cfg);
    // One matrix entry at (level 1, dependence+1 = 1).
    CHECK(family_value(f, "gldm_", "SmallDependenceEmphasis") == doctest::Approx(1.0));
    CHECK(family_value(f, "gldm_", "LargeDependenceEmphasis") == doctest::Approx(1.0));
    CHECK(family_value(f, "gldm_", "DependenceEntropy") == doctest::Approx(0.0));
}

TEST_CASE("all texture families match the brute-force oracles on random ROIs") {
    TextureConfig cfg;
    SplitMix64 gen(0x7e57);
    int ngtdm_checked = 0;
    for (int round = 0; round < 100; ++round) {
        const Index3 dims{2 + static_cast<std::int64_t>(gen.next_below(5)),
                          2 + static_cast<std::int64_t>(gen.next_below(5)),
                          2 + static_cast<std::int64_t>(gen.next_below(5))};
        const int max_levels = 1 + static_cast<int>(gen.next_below(4));
        const Volume v = testutil::random_leveled_volume(dims, max_levels, gen);
        const Mask m = testutil::random_mask(dims, 0.7, 2, gen);

        const DiscretizedRoi d = radpipe::discretize(v, m, cfg);
        const oracle::Levels ol = oracle::discretize(to_oracle_grid(v, m), cfg.bin_width);
        REQUIRE(ol.ng == d.ng);

        compare_family(radpipe::glcm_features(d, cfg), "glcm_",
                       oracle::glcm(ol, cfg.glcm_distance), 1e-9);
        compare_family(radpipe::glrlm_features(d), "glrlm_", oracle::glrlm(ol), 1e-9);
        compare_family(radpipe::glszm_features(d), "glszm_", oracle::glszm(ol), 1e-9);
        compare_family(radpipe::gldm_features(d, cfg), "gldm_",
                       oracle::gldm(ol, cfg.gldm_alpha), 1e-9);
        try {
            const auto got = radpipe::ngtdm_features(d, cfg);
            compare_family(got, "ngtdm_", oracle::ngtdm(ol, cfg.ngtdm_distance, cfg.epsilon),
                           1e-9);
            ++ngtdm_checked;
        } catch (const DegenerateRoiError&) {
            // Sparse draws can leave every voxel isolated; nothing to compare.
        }
    }
    CHECK(ngtdm_checked >= 90);  // the degenerate branch must stay the exception
}

TEST_CASE("texture families with non-default knobs still match the oracles") {
    TextureConfig cfg;
    cfg.glcm_distance = 2;
    cfg.gldm_alpha = 1;
    cfg.ngtdm_distance = 2;
    SplitMix64 gen(0xa11ce);
    for (int round = 0; round < 20; ++round) {
        const Index3 dims{5, 5, 5};
        const Volume v = testutil::random_leveled_volume(dims, 4, gen);
        const Mask m = testutil::random_mask(dims, 0.85, 8, gen);
        const DiscretizedRoi d = radpipe::discretize(v, m, cfg);
        const oracle::Levels ol = oracle::discretize(to_oracle_grid(v, m), cfg.bin_width);
        compare_family(radpipe::glcm_features(d, cfg), "glcm_",
                       oracle::glcm(ol, cfg.glcm_distance), 1e-9);
        compare_family(radpipe::gldm_features(d, cfg), "gldm_",
                       oracle::gldm(ol, cfg.gldm_alpha), 1e-9);
        compare_family(radpipe::ngtdm_features(d, cfg), "ngtdm_",
                       oracle::ngtdm(ol, cfg.ngtdm_distance, cfg.epsilon), 1e-9);
    }
}

TEST_CASE("extract_all: 107 finite features, deterministic, shift-equivariant") {
    TextureConfig cfg;
    SplitMix64 gen(0xfeed);
    const Index3 dims{6, 5, 4};
    const Volume v = testutil::random_leveled_volume(dims, 4, gen);
    const Mask m = testutil::random_mask(dims, 0.8, 10, gen);

    const radpipe::FeatureVector a = radpipe::extract_all(v, m, cfg);
    REQUIRE(a.names == radpipe::canonical_feature_names());
    REQUIRE(a.values.size() == 107);
    for (double x : a.values) CHECK(std::isfinite(x));

    // Bitwise determinism.
    const radpipe::FeatureVector b = radpipe::extract_all(v, m, cfg);
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);

    // Global +1000 shift: texture families and dispersion statistics are
    // unchanged; the documented location features move by exactly +1000.
    Volume shifted = v;
    for (double& x : shifted.voxels) x += 1000.0;
    const radpipe::FeatureVector c = radpipe::extract_all(shifted, m, cfg);
    const std::vector<std::string> moved = {
        "firstorder_Minimum", "firstorder_10thPercentile", "firstorder_90thPercentile",
        "firstorder_Maximum", "firstorder_Mean",           "firstorder_Median"};
    const std::vector<std::string> scale_dependent = {
        "firstorder_Energy", "firstorder_TotalEnergy", "firstorder_RootMeanSquared"};
    for (std::size_t i = 0; i < a.names.size(); ++i) {
        const std::string& name = a.names[i];
        if (std::find(moved.begin(), moved.end(), name) != moved.end()) {
            CHECK(close_rel(c.values[i], a.values[i] + 1000.0, 1e-9));
        } else if (std::find(scale_dependent.begin(), scale_dependent.end(), name) !=
                   scale_dependent.end()) {
            continue;  // second-moment statistics move nonlinearly with a shift
        } else {
            INFO(name);
            CHECK(close_rel(c.values[i], a.values[i], 1e-9));
        }
    }
}

TEST_CASE("extract_all rejects a misaligned mask") {
    TextureConfig cfg;
    const Volume v = make_volume({3, 3, 3}, std::vector<double>(27, 1.0));
    const Mask m = full_mask({3, 3, 2});
    CHECK_THROWS_AS((void)radpipe::extract_all(v, m, cfg), radpipe::AlignmentError);
}

TEST_CASE("extract_all rejects an empty mask") {
    TextureConfig cfg;
    const Volume v = make_volume({3, 3, 3}, std::vector<double>(27, 1.0));
    const Mask m = make_mask({3, 3, 3}, std::vector<std::uint8_t>(27, 0));
    CHECK_THROWS_AS((void)radpipe::extract_all(v, m, cfg), radpipe::EmptyMaskError);
}
