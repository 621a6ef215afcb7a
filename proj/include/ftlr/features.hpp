#pragma once

#include "ftlr/core.hpp"

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ftlr {

/// H x W x C grid of reals, row-major with the channel index varying fastest.
struct FeatureMap {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> values;

    FeatureMap() = default;
    FeatureMap(int height, int width, int channels)
        : height(height), width(width), channels(channels),
          values(static_cast<std::size_t>(height) * width * channels, 0.0)
    {
    }

    [[nodiscard]] std::size_t index(int y, int x, int c) const
    {
        return (static_cast<std::size_t>(y) * width + x) * channels + c;
    }
    [[nodiscard]] double at(int y, int x, int c = 0) const { return values[index(y, x, c)]; }
    double& at(int y, int x, int c = 0) { return values[index(y, x, c)]; }

    [[nodiscard]] bool same_shape(const FeatureMap& other) const
    {
        return height == other.height && width == other.width && channels == other.channels;
    }
    [[nodiscard]] bool all_finite() const;

    bool operator==(const FeatureMap&) const = default;
};

/// Deterministic mapping Patch -> FeatureMap standing in for a learned embedding.
/// Output keeps the patch resolution.
class FeatureExtractor {
public:
    virtual ~FeatureExtractor() = default;
    [[nodiscard]] virtual std::string_view name() const = 0;
    [[nodiscard]] virtual int channel_count() const = 0;
    [[nodiscard]] virtual FeatureMap extract(const Patch& patch) const = 0;
};

/// Single channel, zero mean, unit variance (variance clamped at 1e-12).
FeatureMap extract_grayscale(const Patch& patch);

/// Four census channels (raw code and its 2/4/6-bit rotations) scaled to [0,1]
/// and zero-meaned per channel.
FeatureMap extract_census_channels(const Patch& patch);

class GrayscaleExtractor final : public FeatureExtractor {
public:
    [[nodiscard]] std::string_view name() const override { return "grayscale"; }
    [[nodiscard]] int channel_count() const override { return 1; }
    [[nodiscard]] FeatureMap extract(const Patch& patch) const override { return extract_grayscale(patch); }
};

class CensusExtractor final : public FeatureExtractor {
public:
    [[nodiscard]] std::string_view name() const override { return "census"; }
    [[nodiscard]] int channel_count() const override { return 4; }
    [[nodiscard]] FeatureMap extract(const Patch& patch) const override { return extract_census_channels(patch); }
};

/// Looks up an extractor by name ("grayscale" or "census").
std::shared_ptr<const FeatureExtractor> make_extractor(std::string_view name);

// Binary feature-map format: H, W, C as uint32 little endian, then H*W*C
// float32 little endian values, row-major, channel-minor.
void write_feature_map(std::ostream& out, const FeatureMap& map);
FeatureMap read_feature_map(std::istream& in);
void save_feature_map(const std::filesystem::path& path, const FeatureMap& map);
FeatureMap load_feature_map(const std::filesystem::path& path);

} // namespace ftlr
