#include "ftlr/features.hpp"

#include "ftlr/census.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace ftlr {

bool FeatureMap::all_finite() const
{
    for (double v : values)
        if (!std::isfinite(v))
            return false;
    return true;
}

FeatureMap extract_grayscale(const Patch& patch)
{
    FeatureMap map(patch.side, patch.side, 1);
    const double n = static_cast<double>(patch.pixels.size());
    double mean = 0.0;
    for (double v : patch.pixels)
        mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : patch.pixels)
        var += (v - mean) * (v - mean);
    var /= n;
    if (var < 1e-12)
        return map; // flat patch: all zeros
    const double inv_std = 1.0 / std::sqrt(var);
    for (std::size_t i = 0; i < patch.pixels.size(); ++i)
        map.values[i] = (patch.pixels[i] - mean) * inv_std;
    return map;
}

FeatureMap extract_census_channels(const Patch& patch)
{
    const CensusChannels ch = rotate_expand(census_transform(patch));
    constexpr int C = CensusChannels::kChannels;
    FeatureMap map(ch.height, ch.width, C);
    const std::size_t cells = static_cast<std::size_t>(ch.height) * ch.width;
    for (int c = 0; c < C; ++c) {
        double mean = 0.0;
        for (std::size_t i = 0; i < cells; ++i)
            mean += ch.values[i * C + c] / 255.0;
        mean /= static_cast<double>(cells);
        for (std::size_t i = 0; i < cells; ++i)
            map.values[i * C + c] = ch.values[i * C + c] / 255.0 - mean;
    }
    return map;
}

std::shared_ptr<const FeatureExtractor> make_extractor(std::string_view name)
{
    if (name == "grayscale")
        return std::make_shared<GrayscaleExtractor>();
    if (name == "census")
        return std::make_shared<CensusExtractor>();
    throw std::invalid_argument("unknown feature extractor '" + std::string(name) + "'");
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v)
{
    const std::array<unsigned char, 4> b{static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                         static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::uint32_t get_u32(std::istream& in)
{
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 4))
        throw IngestError("feature map: truncated header");
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

} // namespace

void write_feature_map(std::ostream& out, const FeatureMap& map)
{
    put_u32(out, static_cast<std::uint32_t>(map.height));
    put_u32(out, static_cast<std::uint32_t>(map.width));
    put_u32(out, static_cast<std::uint32_t>(map.channels));
    for (double v : map.values)
        put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

FeatureMap read_feature_map(std::istream& in)
{
    const std::uint32_t h = get_u32(in);
    const std::uint32_t w = get_u32(in);
    const std::uint32_t c = get_u32(in);
    if (h == 0 || w == 0 || c == 0 || static_cast<std::uint64_t>(h) * w * c > (1ull << 28))
        throw IngestError("feature map: implausible dimensions");
    FeatureMap map(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c));
    for (double& v : map.values) {
        std::uint32_t bits = 0;
        try {
            bits = get_u32(in);
        } catch (const IngestError&) {
            throw IngestError("feature map: truncated payload");
        }
        v = std::bit_cast<float>(bits);
    }
    return map;
}

void save_feature_map(const std::filesystem::path& path, const FeatureMap& map)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_feature_map(out, map);
}

FeatureMap load_feature_map(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IngestError("cannot open feature map " + path.string());
    return read_feature_map(in);
}

} // namespace ftlr
