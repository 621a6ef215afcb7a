#include "helpers.hpp"

#include "ftlr/features.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace ftlr;

namespace {

Patch patch_from(const Frame& f)
{
    return crop_patch(f, {8, 8, 16, 16}, 1.0, 32);
}

} // namespace

TEST(Grayscale, ZeroMeanUnitVariance)
{
    const FeatureMap m = extract_grayscale(patch_from(fixtures::random_frame(32, 32, 5)));
    ASSERT_EQ(m.channels, 1);
    double sum = 0, sq = 0;
    for (double v : m.values) {
        sum += v;
        sq += v * v;
    }
    const double n = static_cast<double>(m.values.size());
    EXPECT_NEAR(sum / n, 0.0, 1e-12);
    EXPECT_NEAR(sq / n, 1.0, 1e-9);
}

TEST(Grayscale, OffsetInvariant)
{
    Patch p = patch_from(fixtures::random_frame(32, 32, 6));
    for (double& v : p.pixels)
        v *= 0.8;
    Patch q = p;
    for (double& v : q.pixels)
        v += 0.1;
    const FeatureMap a = extract_grayscale(p), b = extract_grayscale(q);
    for (std::size_t i = 0; i < a.values.size(); ++i)
        EXPECT_NEAR(a.values[i], b.values[i], 1e-9);
}

TEST(Grayscale, ConstantPatchIsFinite)
{
    Patch p;
    p.side = 8;
    p.pixels.assign(64, 0.3);
    const FeatureMap m = extract_grayscale(p);
    EXPECT_TRUE(m.all_finite());
    for (double v : m.values)
        EXPECT_EQ(v, 0.0);
}

TEST(Census, FourZeroMeanChannels)
{
    const FeatureMap m = extract_census_channels(patch_from(fixtures::random_frame(32, 32, 7)));
    ASSERT_EQ(m.channels, 4);
    for (int c = 0; c < 4; ++c) {
        double sum = 0;
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x)
                sum += m.at(y, x, c);
        EXPECT_NEAR(sum, 0.0, 1e-9);
    }
}

TEST(Extractor, LookupByName)
{
    EXPECT_EQ(make_extractor("grayscale")->channel_count(), 1);
    EXPECT_EQ(make_extractor("census")->name(), "census");
    EXPECT_THROW(make_extractor("cnn"), std::invalid_argument);
}

TEST(FeatureMapIo, BinaryRoundTrip)
{
    std::mt19937_64 rng(9);
    FeatureMap m = fixtures::random_map(5, 7, 3, rng);
    for (double& v : m.values)
        v = static_cast<float>(v); // the file stores float32
    std::stringstream buf;
    write_feature_map(buf, m);
    EXPECT_EQ(buf.str().size(), 12u + 5 * 7 * 3 * 4);
    EXPECT_EQ(read_feature_map(buf), m);
}

TEST(FeatureMapIo, TruncatedInputThrows)
{
    std::stringstream buf;
    write_feature_map(buf, FeatureMap(2, 2, 1));
    std::string s = buf.str();
    s.pop_back();
    std::stringstream cut(s);
    EXPECT_THROW(read_feature_map(cut), IngestError);
}
