#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "robust_lrt/densities.hpp"
#include "robust_lrt/error.hpp"
#include "robust_lrt/synth.hpp"

using namespace robust_lrt;

namespace {

SceneSpec small_spec() {
    SceneSpec s;
    s.width = 120;
    s.height = 90;
    s.views = 3;
    s.targets = default_targets(120, 90, 4.0);
    s.seed = 7;
    return s;
}

} // namespace

TEST(Synth, Defaults) {
    const SceneSpec s;
    EXPECT_EQ(s.width, 1153u);
    EXPECT_EQ(s.height, 721u);
    EXPECT_EQ(s.views, 11);
    EXPECT_EQ(s.targets.size(), 9u);
    EXPECT_EQ(s.targets[0].i, 192u);
    EXPECT_EQ(s.targets[0].j, 120u);
    EXPECT_EQ(s.targets[8].i, 960u);
    EXPECT_EQ(s.targets[8].j, 600u);
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(truth_mask(s).count(), 9u * 293u);
}

TEST(Synth, ClutterOnlyIsRayleigh) {
    SceneSpec s;
    s.width = 400;
    s.height = 250;
    s.views = 1;
    s.targets.clear();
    const auto scene = generate(s);
    EXPECT_EQ(scene.truth.count(), 0u);
    std::vector<double> xs(scene.views[0].pixels.begin(), scene.views[0].pixels.end());
    std::sort(xs.begin(), xs.end());
    double ks = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double cdf = rayleigh_cdf({0.025}, xs[k]);
        ks = std::max({ks, std::abs(cdf - k / n), std::abs(cdf - (k + 1) / n)});
    }
    EXPECT_LT(ks, 0.01);
}

TEST(Synth, ZeroRadiusIsOnePixel) {
    auto s = small_spec();
    s.targets = {{60, 45, 0.0}};
    EXPECT_EQ(truth_mask(s).count(), 1u);
    EXPECT_EQ(truth_mask(s).at(60, 45), 1);
}

TEST(Synth, MixedStripsScaleMean) {
    SceneSpec s;
    s.width = 800;
    s.height = 200;
    s.views = 1;
    s.targets.clear();
    s.layout = ClutterLayout::mixed;
    s.high_factor = 2.0;
    const auto scene = generate(s);
    const auto& v = scene.views[0];
    double low = 0, high = 0;
    for (std::size_t j = 0; j < s.height; ++j) {
        for (std::size_t i = 0; i < 200; ++i) low += v.at(i, j);
        for (std::size_t i = 200; i < 400; ++i) high += v.at(i, j);
    }
    EXPECT_NEAR(high / low, 2.0, 0.1);
    EXPECT_EQ(clutter_sigma(s, 0), 0.025);
    EXPECT_EQ(clutter_sigma(s, 200), 0.05);
    EXPECT_EQ(clutter_sigma(s, 450), 0.025);
    EXPECT_EQ(clutter_sigma(s, 799), 0.05);
}

TEST(Synth, HighLayoutScalesEveryColumn) {
    auto s = small_spec();
    s.layout = ClutterLayout::high;
    for (std::size_t i = 0; i < s.width; ++i) EXPECT_DOUBLE_EQ(clutter_sigma(s, i), 0.025 * 1.8);
}

TEST(Synth, Deterministic) {
    const auto a = generate(small_spec());
    const auto b = generate(small_spec());
    ASSERT_EQ(a.views.size(), 3u);
    for (int v = 0; v < 3; ++v) EXPECT_EQ(a.views[v].pixels, b.views[v].pixels);
    EXPECT_EQ(a.truth, b.truth);
}

TEST(Synth, ViewsDifferAndSeedMatters) {
    const auto a = generate(small_spec());
    EXPECT_NE(a.views[0].pixels, a.views[1].pixels);
    auto s = small_spec();
    s.seed = 8;
    const auto b = generate(s);
    EXPECT_NE(a.views[0].pixels, b.views[0].pixels);
    EXPECT_EQ(a.truth, b.truth);
}

TEST(Synth, PixelsInUnitInterval) {
    auto s = small_spec();
    s.layout = ClutterLayout::high;
    for (const auto& v: generate(s).views) {
        for (float x: v.pixels) {
            ASSERT_GE(x, 0.0f);
            ASSERT_LE(x, 1.0f);
        }
    }
}

TEST(Synth, TargetPixelsFollowMixture) {
    auto s = small_spec();
    s.width = 600;
    s.height = 600;
    s.views = 1;
    s.targets = {{300, 300, 250.0}};
    const auto scene = generate(s);
    double sum = 0, n = 0;
    for (std::size_t p = 0; p < scene.truth.size(); ++p) {
        if (scene.truth.bits[p]) {
            sum += scene.views[0].pixels[p];
            n += 1;
        }
    }
    const auto& m = reference_model().h1;
    double mean = 0;
    for (std::size_t k = 0; k < 3; ++k) mean += m.weights[k] * m.means[k];
    EXPECT_NEAR(sum / n, mean, 0.005);
}

TEST(Synth, ValidationErrors) {
    auto s = small_spec();
    s.views = 0;
    EXPECT_THROW(s.validate(), input_error);
    s = small_spec();
    s.targets = {{2, 45, 4.0}};
    EXPECT_THROW(s.validate(), input_error);
    s.targets = {{60, 45, 4.0}, {66, 45, 4.0}};
    EXPECT_THROW(s.validate(), input_error);
    s.targets = {{60, 45, -1.0}};
    EXPECT_THROW(s.validate(), input_error);
    s = small_spec();
    s.low_sigma0 = 0;
    EXPECT_THROW(generate(s), input_error);
}

TEST(Synth, LayoutStrings) {
    EXPECT_EQ(clutter_layout_from_string("mixed"), ClutterLayout::mixed);
    EXPECT_EQ(to_string(ClutterLayout::high), "high");
    EXPECT_THROW(clutter_layout_from_string("medium"), input_error);
}
