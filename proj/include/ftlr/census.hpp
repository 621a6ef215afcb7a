#pragma once

#include "ftlr/core.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace ftlr {

/// One 8-bit census code per pixel.
struct CensusImage {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> codes;

    [[nodiscard]] std::uint8_t at(int y, int x) const { return codes[static_cast<std::size_t>(y) * width + x]; }
    bool operator==(const CensusImage&) const = default;
};

/// H x W x 4 decimals: the code and its left rotations by 2, 4 and 6 bits.
struct CensusChannels {
    static constexpr int kChannels = 4;
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> values;

    [[nodiscard]] std::uint8_t at(int y, int x, int c) const
    {
        return values[(static_cast<std::size_t>(y) * width + x) * kChannels + c];
    }
    bool operator==(const CensusChannels&) const = default;
};

/// Optional instrumentation for census_transform.
struct CensusStats {
    std::uint64_t comparisons = 0;
};

/// 3x3 census transform with replicate padding. Bit k of the code is set when
/// the neighbor is strictly darker than the center; neighbors are visited in
/// row-major order, top-left neighbor in the most significant bit.
CensusImage census_transform(std::span<const double> pixels, int width, int height, CensusStats* stats = nullptr);
CensusImage census_transform(const Patch& image, CensusStats* stats = nullptr);

constexpr std::uint8_t rotate_left8(std::uint8_t value, int shift)
{
    shift &= 7;
    return static_cast<std::uint8_t>((value << shift) | (value >> ((8 - shift) & 7)));
}

CensusChannels rotate_expand(const CensusImage& census);

struct BackupMatch {
    double dx = 0.0; ///< columns from the search center
    double dy = 0.0; ///< rows from the search center
    double score = 0.0;
};

/// Valid-mode zero-mean normalized correlation of the two channel stacks,
/// summed over the four channels. Returns the best placement as a displacement
/// from the search center; ties go to the smallest displacement, then to
/// row-major order.
BackupMatch census_backup_match(const CensusChannels& templ, const CensusChannels& search);

/// Writes the code grid as a binary 8-bit PGM.
void write_census_pgm(const std::filesystem::path& path, const CensusImage& census);

} // namespace ftlr
