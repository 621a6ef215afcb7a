#include "helpers.hpp"

#include "ftlr/core.hpp"
#include "ftlr/reference.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ftlr;

TEST(BoundingBox, CenterRoundTrip)
{
    const BoundingBox b = BoundingBox::from_center(10.5, 20.0, 8.0, 4.0);
    EXPECT_DOUBLE_EQ(b.x, 6.5);
    EXPECT_DOUBLE_EQ(b.y, 18.0);
    EXPECT_DOUBLE_EQ(b.center_x(), 10.5);
    EXPECT_DOUBLE_EQ(b.center_y(), 20.0);
    EXPECT_FALSE((BoundingBox{0, 0, 0, 5}).valid());
}

TEST(Iou, IdenticalDisjointAndHalf)
{
    const BoundingBox a{0, 0, 10, 10};
    EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
    EXPECT_DOUBLE_EQ(iou(a, {20, 20, 10, 10}), 0.0);
    // Half overlap: 50 / (100 + 100 - 50).
    EXPECT_NEAR(iou(a, {5, 0, 10, 10}), 50.0 / 150.0, 1e-12);
    EXPECT_DOUBLE_EQ(iou(a, {10, 0, 10, 10}), 0.0);
}

TEST(Iou, Symmetric)
{
    const BoundingBox a{1.5, 2, 7, 9}, b{3, 1, 4, 12};
    EXPECT_DOUBLE_EQ(iou(a, b), iou(b, a));
}

TEST(CenterError, Euclidean)
{
    EXPECT_DOUBLE_EQ(center_error({0, 0, 10, 10}, {3, 4, 10, 10}), 5.0);
    EXPECT_DOUBLE_EQ(center_error({0, 0, 10, 10}, {0, 0, 2, 2}), std::hypot(4.0, 4.0));
}

TEST(Frame, RejectsBadInput)
{
    EXPECT_THROW(Frame(2, 2, std::vector<float>(3, 0.5f)), std::invalid_argument);
    EXPECT_THROW(Frame(2, 1, std::vector<float>{0.5f, 1.5f}), std::invalid_argument);
    EXPECT_THROW(Frame(0, 0, {}), std::invalid_argument);
}

TEST(Frame, From8BitScalesAndAverages)
{
    const std::vector<unsigned char> px{0, 255, 51, 204};
    const Frame f = Frame::from_8bit(2, 2, px);
    EXPECT_FLOAT_EQ(f.at(1, 0), 1.0f);
    EXPECT_FLOAT_EQ(f.at(0, 1), 0.2f);
    EXPECT_NEAR(f.mean(), 0.5, 1e-7);
}

TEST(CropPatch, RegionSideLaw)
{
    const BoundingBox b{10, 10, 16, 36};
    EXPECT_DOUBLE_EQ(crop_region_side(b, 1.0, 2.0), 48.0);
    EXPECT_NEAR(crop_region_side(b, 2.0, 2.0), 48.0 * std::sqrt(2.0), 1e-12);
}

TEST(CropPatch, IdentityScaleReproducesPixels)
{
    const Frame f = fixtures::random_frame(40, 30, 3);
    // A 16 px region sampled at 16 cells lands exactly on pixel centers.
    const Patch p = crop_patch(f, {10, 5, 8, 8}, 1.0, 16, 2.0);
    ASSERT_EQ(p.side, 16);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c)
            ASSERT_FLOAT_EQ(static_cast<float>(p.at(r, c)), f.at(6 + c, 1 + r));
}

TEST(CropPatch, OutsideFrameReadsMean)
{
    const Frame f = fixtures::random_frame(20, 20, 4);
    const Patch p = crop_patch(f, {-200, -200, 10, 10}, 1.0, 8);
    for (double v : p.pixels)
        EXPECT_NEAR(v, f.mean(), 1e-12);
}

TEST(CropPatch, MatchesSerialReference)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Frame f = fixtures::random_frame(64, 48, seed);
        const BoundingBox b{5.3 + seed, 7.9, 13.0, 9.5};
        const double area = 1.0 + 0.1 * static_cast<double>(seed % 5);
        const Patch fast = crop_patch(f, b, area, 37);
        const Patch slow = reference::crop_patch(f, b, area, 37);
        ASSERT_EQ(fast.region, slow.region);
        for (std::size_t i = 0; i < fast.pixels.size(); ++i)
            ASSERT_NEAR(fast.pixels[i], slow.pixels[i], 1e-12) << "seed " << seed << " index " << i;
    }
}

TEST(CropPatch, RejectsDegenerateInput)
{
    const Frame f = fixtures::random_frame(8, 8, 1);
    EXPECT_THROW(crop_patch(f, {0, 0, 0, 4}, 1.0, 8), std::invalid_argument);
    EXPECT_THROW(crop_patch(f, {0, 0, 4, 4}, 0.0, 8), std::invalid_argument);
    EXPECT_THROW(crop_patch(f, {0, 0, 4, 4}, 1.0, 0), std::invalid_argument);
}
