#include "helpers.hpp"

#include "ftlr/correlation.hpp"
#include "ftlr/reference.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace ftlr;
using fixtures::crop_map;
using fixtures::random_map;

namespace {

double max_abs_diff(const ResponseMap& a, const ResponseMap& b)
{
    double d = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        d = std::max(d, std::abs(a.values[i] - b.values[i]));
    return d;
}

std::pair<int, int> argmax(const ResponseMap& r)
{
    const auto it = std::max_element(r.values.begin(), r.values.end());
    const auto i = static_cast<int>(it - r.values.begin());
    return {i / r.width, i % r.width};
}

} // namespace

TEST(Correlation, ValidModeShapeAndCenter)
{
    std::mt19937_64 rng(1);
    const ResponseMap r = cross_correlate(random_map(5, 7, 1, rng), random_map(20, 18, 1, rng));
    EXPECT_EQ(r.height, 16);
    EXPECT_EQ(r.width, 12);
    EXPECT_DOUBLE_EQ(r.center_row, 7.5);
    EXPECT_DOUBLE_EQ(r.center_col, 5.5);
}

TEST(Correlation, DirectMatchesBruteForceReference)
{
    std::mt19937_64 rng(2);
    for (int k = 0; k < 30; ++k) {
        const int c = 1 + k % 3;
        const FeatureMap t = random_map(4 + k % 5, 3 + k % 7, c, rng);
        const FeatureMap s = random_map(t.height + 6 + k % 4, t.width + 5, c, rng);
        EXPECT_LT(max_abs_diff(cross_correlate_direct(t, s), reference::cross_correlate(t, s)), 1e-10);
    }
}

TEST(Correlation, FftMatchesDirect)
{
    std::mt19937_64 rng(3);
    for (int k = 0; k < 40; ++k) {
        const int c = 1 + k % 4;
        const FeatureMap t = random_map(6 + k % 9, 5 + k % 11, c, rng);
        const FeatureMap s = random_map(t.height + 1 + k % 13, t.width + 2 + k % 7, c, rng);
        EXPECT_LT(max_abs_diff(cross_correlate_fft(t, s), cross_correlate_direct(t, s)), 1e-9);
    }
}

TEST(Correlation, SelfSimilarityPeaksAtCenter)
{
    std::mt19937_64 rng(4);
    const FeatureMap t = random_map(8, 8, 1, rng);
    FeatureMap s(24, 24, 1); // zero = mean padding for a zero-mean template
    double mean = 0;
    for (double v : t.values)
        mean += v / 64.0;
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
            s.at(8 + y, 8 + x) = t.at(y, x) - mean;
    const ResponseMap r = cross_correlate(t, s);
    EXPECT_EQ(argmax(r), std::make_pair(8, 8));
    EXPECT_NEAR(r.at(8, 8), 1.0, 1e-6);
}

TEST(Correlation, PlantedOffsetRecovered)
{
    std::mt19937_64 rng(5);
    const FeatureMap s = random_map(31, 31, 2, rng);
    // Response is 21x21 with center (10,10); displacement (dx=3, dy=-2).
    const FeatureMap t = crop_map(s, 10 - 2, 10 + 3, 11, 11);
    for (auto method : {CorrelationMethod::Direct, CorrelationMethod::Fft}) {
        const ResponseMap r = cross_correlate(t, s, method);
        const auto [row, col] = argmax(r);
        EXPECT_EQ(col - 10, 3);
        EXPECT_EQ(row - 10, -2);
    }
}

TEST(Correlation, ShiftEquivariance)
{
    std::mt19937_64 rng(6);
    const FeatureMap s = random_map(30, 30, 1, rng);
    for (int a = -4; a <= 4; a += 2)
        for (int b = -4; b <= 4; b += 4) {
            const FeatureMap t = crop_map(s, 10 + b, 10 + a, 10, 10);
            const auto [row, col] = argmax(cross_correlate(t, s));
            EXPECT_EQ(col, 10 + a);
            EXPECT_EQ(row, 10 + b);
        }
}

TEST(Correlation, ConstantTemplateGivesZero)
{
    std::mt19937_64 rng(7);
    FeatureMap t(5, 5, 1);
    std::fill(t.values.begin(), t.values.end(), 2.5);
    const FeatureMap s = random_map(15, 15, 1, rng);
    for (auto method : {CorrelationMethod::Direct, CorrelationMethod::Fft})
        for (double v : cross_correlate(t, s, method).values)
            EXPECT_EQ(v, 0.0);
}

TEST(Correlation, ValuesBounded)
{
    std::mt19937_64 rng(8);
    for (int k = 0; k < 10; ++k) {
        const FeatureMap t = random_map(9, 9, 3, rng);
        const FeatureMap s = random_map(40, 40, 3, rng);
        for (double v : cross_correlate(t, s, CorrelationMethod::Fft).values)
            ASSERT_LE(std::abs(v), 1.0 + 1e-6);
    }
}

TEST(Correlation, RejectsBadShapes)
{
    std::mt19937_64 rng(9);
    EXPECT_THROW(cross_correlate(random_map(4, 4, 2, rng), random_map(8, 8, 1, rng)), std::invalid_argument);
    EXPECT_THROW(cross_correlate(random_map(8, 8, 1, rng), random_map(8, 8, 1, rng)), std::invalid_argument);
    EXPECT_THROW(cross_correlate(random_map(9, 4, 1, rng), random_map(8, 8, 1, rng)), std::invalid_argument);
}

TEST(FftSize, SmoothNumbers)
{
    EXPECT_EQ(fft_friendly_size(1), 1);
    EXPECT_EQ(fft_friendly_size(7), 8);
    EXPECT_EQ(fft_friendly_size(11), 12);
    EXPECT_EQ(fft_friendly_size(128), 128);
    EXPECT_EQ(fft_friendly_size(131), 135);
}

TEST(MotionWindow, StrengthZeroIsIdentity)
{
    std::mt19937_64 rng(10);
    const ResponseMap r = cross_correlate(random_map(4, 4, 1, rng), random_map(12, 12, 1, rng));
    EXPECT_EQ(apply_motion_window(r, 0.0), r);
}

TEST(MotionWindow, FullStrengthOnConstantIsHann)
{
    ResponseMap r;
    r.height = 5;
    r.width = 7;
    r.values.assign(35, 2.0);
    const ResponseMap w = apply_motion_window(r, 1.0);
    const auto hy = hann_window(5), hx = hann_window(7);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 7; ++j)
            EXPECT_NEAR(w.at(i, j), 2.0 * hy[i] * hx[j], 1e-15);
}

TEST(MotionWindow, HalfStrengthOnThreeByThree)
{
    // Hann(3) = {0, 1, 0}: only the center keeps its full value.
    ResponseMap r;
    r.height = r.width = 3;
    r.values = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    const ResponseMap w = apply_motion_window(r, 0.5);
    const std::vector<double> expected{0.5, 1, 1.5, 2, 5, 3, 3.5, 4, 4.5};
    for (int i = 0; i < 9; ++i)
        EXPECT_DOUBLE_EQ(w.values[i], expected[i]);
    EXPECT_THROW(apply_motion_window(r, 1.5), std::invalid_argument);
}
