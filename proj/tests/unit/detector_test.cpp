#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "robust_lrt/detector.hpp"
#include "robust_lrt/error.hpp"
#include "robust_lrt/random.hpp"
#include "support.hpp"

using namespace robust_lrt;

namespace {

LogLrFunction identity_lr(const IntensityGrid& g) {
    return LogLrFunction(g, g.points(), std::vector<LrCase>(g.size(), LrCase::ratio_ll));
}

BinaryMask mask_from(std::size_t w, std::size_t h, const char* rows) {
    BinaryMask m(w, h);
    for (std::size_t p = 0; p < w * h; ++p) m.bits[p] = rows[p] == '#' ? 1 : 0;
    return m;
}

BinaryMask bernoulli_mask(std::size_t w, std::size_t h, double p, Random& rng) {
    BinaryMask m(w, h);
    for (auto& b: m.bits) b = rng.uniform() < p ? 1 : 0;
    return m;
}

struct ReferenceBandDetector {
    DensityGrid g0;
    DetectorSpec spec;
};

ReferenceBandDetector reference_band_detector(double alpha) {
    const auto p0 = robust_lrt::test::reference_p0();
    const auto p1 = robust_lrt::test::reference_p1();
    const auto b0 = build_band(p0, BandSpec::band(0.8, 2.5), Hypothesis::h0);
    const auto b1 = build_band(p1, BandSpec::band(0.8, 2.5), Hypothesis::h1);
    auto pair = solve_lfds(b0, b1, p0.normalized(), p1.normalized());
    auto spec = calibrate(robust_log_lr(pair, b0, b1), pair.g0, alpha);
    return {pair.g0, std::move(spec)};
}

} // namespace

TEST(CalibrateThreshold, UniformClutterIdentityRatio) {
    IntensityGrid g;
    const double t = calibrate_threshold(identity_lr(g), DensityGrid::constant(g, 1.0), 0.05);
    EXPECT_NEAR(t, 0.95, g.spacing());
}

TEST(CalibrateThreshold, AlphaOneGivesMinimum) {
    IntensityGrid g(101);
    std::vector<double> v;
    for (double x: g.points()) v.push_back((x - 0.3) * (x - 0.3));
    const LogLrFunction lr(g, v, std::vector<LrCase>(g.size(), LrCase::ratio_ll));
    EXPECT_EQ(calibrate_threshold(lr, DensityGrid::constant(g, 1.0), 1.0), *std::min_element(v.begin(), v.end()));
}

TEST(CalibrateThreshold, ConstantRatioIsCalibrationError) {
    IntensityGrid g(101);
    LogLrFunction lr(g, std::vector<double>(g.size(), -0.3), std::vector<LrCase>(g.size(), LrCase::clip_a1));
    EXPECT_THROW(calibrate_threshold(lr, DensityGrid::constant(g, 1.0), 0.05), calibration_error);
}

TEST(CalibrateThreshold, AlphaOutOfRange) {
    IntensityGrid g(11);
    EXPECT_THROW(calibrate_threshold(identity_lr(g), DensityGrid::constant(g, 1.0), 0.0), input_error);
    EXPECT_THROW(calibrate_threshold(identity_lr(g), DensityGrid::constant(g, 1.0), 1.5), input_error);
}

TEST(CalibrateThreshold, PlateauStraddlingAlphaIsExcluded) {
    // Upper fifth of the unit interval sits on one flat level.
    IntensityGrid g(101);
    auto values = g.points();
    for (auto& v: values) v = std::min(v, 0.8);
    LogLrFunction lr(g, values, std::vector<LrCase>(g.size(), LrCase::ratio_ll));
    const auto h0 = DensityGrid::constant(g, 1.0);
    const double t = calibrate_threshold(lr, h0, 0.1);
    EXPECT_EQ(t, 0.8);
    EXPECT_EQ(false_alarm_mass(lr, h0, t), 0.0);
    const double t2 = calibrate_threshold(lr, h0, 0.3);
    EXPECT_NEAR(false_alarm_mass(lr, h0, t2), 0.3, 1e-9);
}

TEST(CalibrateThreshold, SoundAndTightOnRandomFunctions) {
    Random rng(21);
    IntensityGrid g(200);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> lv(g.size()), hv(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            lv[i] = rng.uniform() < 0.1 ? 0.5 : std::round(rng.normal() * 20) / 10;
            hv[i] = rng.uniform() < 0.1 ? 0.0 : rng.uniform();
        }
        LogLrFunction lr(g, lv, std::vector<LrCase>(g.size(), LrCase::ratio_ll));
        const DensityGrid h0(g, hv);
        const double alpha = 0.01 + 0.5 * rng.uniform();
        const double t = calibrate_threshold(lr, h0, alpha);
        EXPECT_LE(false_alarm_mass(lr, h0, t), alpha + 1e-12);
        EXPECT_GT(false_alarm_mass(lr, h0, std::nextafter(t, -INFINITY)), alpha);
    }
}

TEST(CalibrateThreshold, MonotoneInAlpha) {
    const auto p0 = robust_lrt::test::reference_p0();
    const auto p1 = robust_lrt::test::reference_p1();
    const auto lr = nominal_log_lr(p0, p1);
    double prev = INFINITY;
    for (double a: {0.001, 0.01, 0.02, 0.05, 0.1, 0.3, 0.7}) {
        const double t = calibrate_threshold(lr, p0, a);
        EXPECT_LE(t, prev);
        prev = t;
    }
}

TEST(CalibrateThreshold, BandDetectorMonteCarloFalseAlarm) {
    const auto det = reference_band_detector(0.05);
    GridSampler sampler(det.g0);
    Random rng(1234);
    const int n = 1000000;
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += det.spec.log_lr.at(sampler(rng)) > det.spec.ln_gamma;
    EXPECT_NEAR(double(hits) / n, 0.05, 0.002);
}

TEST(FalseAlarmMass, InfiniteCellsSplitAtMidpoint) {
    IntensityGrid g(3);
    LogLrFunction lr(g, {INFINITY, 0.0, 0.0}, std::vector<LrCase>(3, LrCase::ratio_ll));
    // h0 = 1 on [0, 1]; the half cell nearest the infinite end counts.
    EXPECT_NEAR(false_alarm_mass(lr, DensityGrid::constant(g, 1.0), 1.0), 0.25, 1e-15);
}

TEST(Detect, ZeroRasterGivesEmptyMask) {
    IntensityGrid g;
    const auto spec = calibrate(identity_lr(g), DensityGrid::constant(g, 1.0), 0.05);
    EXPECT_EQ(detect(Raster(16, 8, 0.0f), spec).count(), 0u);
}

TEST(Detect, SinglePixelAboveThreshold) {
    IntensityGrid g;
    const auto spec = calibrate(identity_lr(g), DensityGrid::constant(g, 1.0), 0.05);
    Raster r(5, 4, 0.5f);
    r.at(3, 2) = 0.99f;
    const auto m = detect(r, spec);
    EXPECT_EQ(m.count(), 1u);
    EXPECT_EQ(m.at(3, 2), 1);
}

TEST(Detect, OutOfRangePixelIsInputError) {
    IntensityGrid g;
    const auto spec = calibrate(identity_lr(g), DensityGrid::constant(g, 1.0), 0.05);
    Raster r(2, 2, 0.5f);
    r.at(1, 1) = 1.5f;
    EXPECT_THROW(detect(r, spec), input_error);
    r.at(1, 1) = -0.1f;
    EXPECT_THROW(detect(r, spec), input_error);
}

TEST(Detect, BinomialConcentrationOnClutterDraws) {
    const double alpha = 0.05;
    const auto det = reference_band_detector(alpha);
    GridSampler sampler(det.g0);
    Random rng(99);
    Raster r(1000, 1000);
    for (auto& x: r.pixels) x = static_cast<float>(sampler(rng));
    const double rate = double(detect(r, det.spec).count()) / r.size();
    EXPECT_NEAR(rate, alpha, 3 * std::sqrt(alpha * (1 - alpha) / 1e6));
}

TEST(Detect, RaisingThresholdNeverAddsBits) {
    const auto det = reference_band_detector(0.1);
    Random rng(5);
    Raster r(200, 200);
    for (auto& x: r.pixels) x = static_cast<float>(rng.uniform() * 0.3);
    auto spec = det.spec;
    BinaryMask prev = detect(r, spec);
    for (double bump: {0.01, 0.1, 0.5, 1.0}) {
        spec.ln_gamma = det.spec.ln_gamma + bump;
        const auto m = detect(r, spec);
        for (std::size_t p = 0; p < m.size(); ++p) EXPECT_LE(m.bits[p], prev.bits[p]);
        prev = m;
    }
}

TEST(HardFuse, AllOnesIdentity) {
    std::vector<BinaryMask> ms(3, BinaryMask(4, 4, 1));
    EXPECT_EQ(hard_fuse(ms), BinaryMask(4, 4, 1));
}

TEST(HardFuse, ZeroIsAbsorbing) {
    std::vector<BinaryMask> ms(3, BinaryMask(4, 4, 1));
    ms[1].at(2, 3) = 0;
    const auto f = hard_fuse(ms);
    EXPECT_EQ(f.at(2, 3), 0);
    EXPECT_EQ(f.count(), 15u);
}

TEST(HardFuse, SemilatticeLaws) {
    Random rng(3);
    const auto a = bernoulli_mask(30, 20, 0.5, rng);
    const auto b = bernoulli_mask(30, 20, 0.5, rng);
    const auto c = bernoulli_mask(30, 20, 0.5, rng);
    auto fuse2 = [](const BinaryMask& x, const BinaryMask& y) { return hard_fuse(std::vector<BinaryMask>{x, y}); };
    EXPECT_EQ(fuse2(a, b), fuse2(b, a));
    EXPECT_EQ(fuse2(fuse2(a, b), c), fuse2(a, fuse2(b, c)));
    EXPECT_EQ(fuse2(a, a), a);
}

TEST(HardFuse, IndependentMasksMultiplyRates) {
    Random rng(17);
    std::vector<BinaryMask> ms;
    for (int m = 0; m < 3; ++m) ms.push_back(bernoulli_mask(1000, 1000, 0.2, rng));
    EXPECT_NEAR(double(hard_fuse(ms).count()) / 1e6, 0.008, 0.001);
}

TEST(HardFuse, Errors) {
    EXPECT_THROW(hard_fuse(std::vector<BinaryMask>{}), input_error);
    EXPECT_THROW(hard_fuse(std::vector<BinaryMask>{BinaryMask(2, 2), BinaryMask(2, 3)}), input_error);
}

TEST(Evaluate, PerfectDetection) {
    const auto truth = mask_from(6, 3,
                                 "##...#"
                                 "##...#"
                                 "......");
    const auto r = evaluate(truth, truth);
    EXPECT_EQ(r.fa_count, 0);
    EXPECT_EQ(r.md_count, 0);
    ASSERT_EQ(r.per_target.size(), 2u);
    EXPECT_TRUE(r.per_target[0].detected && r.per_target[1].detected);
}

TEST(Evaluate, TotalMissOfNineTargets) {
    BinaryMask truth(30, 30);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) truth.at(5 + 10 * a, 5 + 10 * b) = 1;
    }
    const auto r = evaluate(BinaryMask(30, 30), truth);
    EXPECT_EQ(r.fa_count, 0);
    EXPECT_EQ(r.md_count, 9);
}

TEST(Evaluate, HandCountedFixture) {
    const auto truth = mask_from(8, 8,
                                 "##......"
                                 "##......"
                                 "........"
                                 "........"
                                 "......##"
                                 "......##"
                                 "........"
                                 "........");
    const auto fused = mask_from(8, 8,
                                 ".##....."
                                 "..#....."
                                 "........"
                                 "...#...."
                                 "....#..."
                                 "........"
                                 "........"
                                 "........");
    const auto r = evaluate(fused, truth);
    EXPECT_EQ(r.fa_count, 1);
    EXPECT_EQ(r.md_count, 1);
    ASSERT_EQ(r.per_target.size(), 2u);
    EXPECT_TRUE(r.per_target[0].detected);
    EXPECT_FALSE(r.per_target[1].detected);

    const auto px = evaluate(fused, truth, CountUnit::pixel);
    EXPECT_EQ(px.fa_count, 4);
    EXPECT_EQ(px.md_count, 7);
}

TEST(Evaluate, DiagonalNeighboursFormOneRegion) {
    const auto fused = mask_from(3, 3,
                                 "#.."
                                 ".#."
                                 "..#");
    EXPECT_EQ(evaluate(fused, BinaryMask(3, 3)).fa_count, 1);
    EXPECT_THROW(evaluate(fused, BinaryMask(3, 4)), input_error);
}

TEST(CountUnit, Strings) {
    EXPECT_EQ(count_unit_from_string("region"), CountUnit::region);
    EXPECT_EQ(count_unit_from_string("pixel"), CountUnit::pixel);
    EXPECT_THROW(count_unit_from_string("blob"), input_error);
}
