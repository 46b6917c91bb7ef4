#include <gtest/gtest.h>

#include <vector>

#include "robust_lrt/error.hpp"
#include "robust_lrt/random.hpp"
#include "robust_lrt/synth.hpp"
#include "robust_lrt/training.hpp"

using namespace robust_lrt;

namespace {

Raster blob_raster() {
    Raster r(5, 5, 0.1f);
    for (std::size_t j = 1; j <= 3; ++j) {
        for (std::size_t i = 1; i <= 3; ++i) r.at(i, j) = 0.5f;
    }
    return r;
}

Raster rayleigh_clutter(std::size_t w, std::size_t h, std::uint64_t seed) {
    Raster r(w, h);
    Random rng(seed);
    for (auto& x: r.pixels) x = static_cast<float>(std::min(1.0, rng.rayleigh(0.025)));
    return r;
}

} // namespace

TEST(RegionGrow, BlobFromCenter) {
    const std::vector<SeedPoint> seeds = {{2, 2}};
    const auto m = region_grow(blob_raster(), seeds);
    EXPECT_EQ(m.count(), 9u);
    EXPECT_EQ(m.at(1, 1), 1);
    EXPECT_EQ(m.at(0, 0), 0);
}

TEST(RegionGrow, DecibelWindowEdges) {
    Raster r(3, 1, 0.5f);
    r.at(1, 0) = 0.36f;
    r.at(2, 0) = 0.35f;
    const std::vector<SeedPoint> seeds = {{0, 0}};
    const auto m = region_grow(r, seeds);
    EXPECT_EQ(m.at(1, 0), 1);
    EXPECT_EQ(m.at(2, 0), 0);
}

TEST(RegionGrow, PowerScaleWidensWindow) {
    Raster r(3, 1, 0.5f);
    r.at(1, 0) = 0.36f;
    r.at(2, 0) = 0.26f;
    const std::vector<SeedPoint> seeds = {{0, 0}};
    EXPECT_EQ(region_grow(r, seeds, {3.0, 10.0}).count(), 3u);
}

TEST(RegionGrow, DiagonalStepAllowed) {
    Raster r(3, 3, 0.01f);
    r.at(0, 0) = r.at(1, 1) = r.at(2, 2) = 0.5f;
    const std::vector<SeedPoint> seeds = {{0, 0}};
    EXPECT_EQ(region_grow(r, seeds).count(), 3u);
}

TEST(RegionGrow, ZeroPixelsNeverAdmitted) {
    Raster r(3, 1, 0.0f);
    r.at(0, 0) = 0.5f;
    const std::vector<SeedPoint> seeds = {{0, 0}};
    EXPECT_EQ(region_grow(r, seeds).count(), 1u);
}

TEST(RegionGrow, SeedErrors) {
    const auto r = blob_raster();
    EXPECT_THROW(region_grow(r, std::vector<SeedPoint>{{5, 0}}), seed_error);
    EXPECT_THROW(region_grow(r, std::vector<SeedPoint>{{0, 5}}), seed_error);
    Raster z(2, 2, 0.0f);
    EXPECT_THROW(region_grow(z, std::vector<SeedPoint>{{1, 1}}), seed_error);
}

TEST(RegionGrow, EachSeedUsesItsOwnReference) {
    // A bright and a dim region that touch; each seed grows only its own.
    Raster r(4, 1);
    r.pixels = {0.5f, 0.5f, 0.05f, 0.05f};
    const std::vector<SeedPoint> seeds = {{0, 0}, {3, 0}};
    EXPECT_EQ(region_grow(r, seeds).count(), 4u);
    EXPECT_EQ(region_grow(r, std::vector<SeedPoint>{{0, 0}}).count(), 2u);
}

TEST(RegionGrow, MonotoneInBand) {
    const auto r = rayleigh_clutter(120, 80, 4);
    const std::vector<SeedPoint> seeds = {{10, 10}, {60, 40}, {100, 70}};
    auto prev = region_grow(r, seeds, {0.5, 20.0});
    for (double b: {1.0, 2.0, 3.0, 6.0}) {
        const auto m = region_grow(r, seeds, {b, 20.0});
        for (std::size_t p = 0; p < m.size(); ++p) EXPECT_GE(m.bits[p], prev.bits[p]);
        prev = m;
    }
}

TEST(RegionGrow, SeedOrderIrrelevant) {
    const auto r = rayleigh_clutter(120, 80, 5);
    std::vector<SeedPoint> seeds = {{10, 10}, {60, 40}, {100, 70}, {11, 10}};
    const auto a = region_grow(r, seeds);
    std::reverse(seeds.begin(), seeds.end());
    EXPECT_EQ(region_grow(r, seeds), a);
}

TEST(RegionGrow, TenDiscFixtureTargetCount) {
    // Seven discs of radius 9.5 and three slightly larger ones.
    std::vector<TargetDisc> discs;
    const double radii[10] = {9.5, 9.5, 9.5, 9.5, 9.5, 9.5, 9.5, 9.95, 11.45, 11.7};
    for (int k = 0; k < 10; ++k) {
        discs.push_back({static_cast<std::size_t>(30 + 60 * (k % 5)), static_cast<std::size_t>(40 + 70 * (k / 5)),
                         radii[k]});
    }
    SceneSpec spec;
    spec.width = 320;
    spec.height = 180;
    spec.targets = discs;
    auto r = rayleigh_clutter(spec.width, spec.height, 11);
    const auto truth = truth_mask(spec);
    for (std::size_t p = 0; p < r.size(); ++p) {
        if (truth.bits[p]) r.pixels[p] = 0.5f;
    }
    std::vector<SeedPoint> seeds;
    for (const auto& d: discs) seeds.push_back({d.i, d.j});
    const auto mask = region_grow(r, seeds);
    EXPECT_EQ(mask, truth);
    const auto sets = split_training(r, mask);
    EXPECT_EQ(sets.targets.size(), 3206u);
    EXPECT_EQ(sets.clutter.size() + sets.targets.size(), r.size());
}

TEST(SplitTraining, Checkerboard) {
    Raster r(8, 6, 0.2f);
    BinaryMask m(8, 6);
    for (std::size_t j = 0; j < 6; ++j) {
        for (std::size_t i = 0; i < 8; ++i) m.at(i, j) = (i + j) % 2;
    }
    const auto s = split_training(r, m);
    EXPECT_EQ(s.targets.size(), 24u);
    EXPECT_EQ(s.clutter.size(), 24u);
}

TEST(SplitTraining, ZeroPixelsDropped) {
    Raster r(4, 1);
    r.pixels = {0.0f, 0.3f, 0.0f, 0.7f};
    BinaryMask m(4, 1);
    m.at(3, 0) = 1;
    const auto s = split_training(r, m);
    EXPECT_EQ(s.targets, std::vector<double>{0.7f});
    EXPECT_EQ(s.clutter, std::vector<double>{0.3f});
}

TEST(SplitTraining, EmptySetIsTrainingError) {
    Raster r(4, 4, 0.2f);
    EXPECT_THROW(split_training(r, BinaryMask(4, 4, 1)), training_error);
    EXPECT_THROW(split_training(r, BinaryMask(4, 4, 0)), training_error);
    EXPECT_THROW(split_training(r, BinaryMask(4, 3, 0)), input_error);
}
