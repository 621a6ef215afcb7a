#include "ftlr/census.hpp"

#include "ftlr/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ftlr {

CensusImage census_transform(std::span<const double> pixels, int width, int height, CensusStats* stats)
{
    if (width < 3 || height < 3)
        throw std::invalid_argument("census_transform: image must be at least 3x3");
    if (pixels.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("census_transform: pixel count does not match dimensions");

    CensusImage out;
    out.width = width;
    out.height = height;
    out.codes.resize(pixels.size());

    auto sample = [&](int y, int x) {
        y = std::clamp(y, 0, height - 1);
        x = std::clamp(x, 0, width - 1);
        return pixels[static_cast<std::size_t>(y) * width + x];
    };

#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double center = pixels[static_cast<std::size_t>(y) * width + x];
            unsigned code = 0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dy == 0 && dx == 0)
                        continue;
                    code = (code << 1) | (sample(y + dy, x + dx) < center ? 1u : 0u);
                }
            out.codes[static_cast<std::size_t>(y) * width + x] = static_cast<std::uint8_t>(code);
        }
    }
    if (stats != nullptr)
        stats->comparisons += 8ull * static_cast<std::uint64_t>(width) * height;
    return out;
}

CensusImage census_transform(const Patch& image, CensusStats* stats)
{
    return census_transform(image.pixels, image.side, image.side, stats);
}

CensusChannels rotate_expand(const CensusImage& census)
{
    CensusChannels out;
    out.height = census.height;
    out.width = census.width;
    out.values.resize(census.codes.size() * CensusChannels::kChannels);
    for (std::size_t i = 0; i < census.codes.size(); ++i) {
        const std::uint8_t b = census.codes[i];
        for (int k = 0; k < CensusChannels::kChannels; ++k)
            out.values[i * CensusChannels::kChannels + k] = rotate_left8(b, 2 * k);
    }
    return out;
}

namespace {

FeatureMap as_feature_map(const CensusChannels& ch)
{
    FeatureMap map(ch.height, ch.width, CensusChannels::kChannels);
    std::transform(ch.values.begin(), ch.values.end(), map.values.begin(),
                   [](std::uint8_t v) { return static_cast<double>(v); });
    return map;
}

} // namespace

BackupMatch census_backup_match(const CensusChannels& templ, const CensusChannels& search)
{
    if (templ.height >= search.height || templ.width >= search.width)
        throw std::invalid_argument("census_backup_match: template must be strictly smaller than search");

    const ResponseMap response = cross_correlate(as_feature_map(templ), as_feature_map(search));
    double best = -std::numeric_limits<double>::infinity();
    for (double v : response.values)
        best = std::max(best, v);

    // Values this close to the maximum are treated as ties.
    constexpr double kTie = 1e-9;
    BackupMatch match;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int r = 0; r < response.height; ++r) {
        for (int c = 0; c < response.width; ++c) {
            if (response.at(r, c) < best - kTie)
                continue;
            const double dy = r - response.center_row;
            const double dx = c - response.center_col;
            const double dist = dx * dx + dy * dy;
            if (dist < best_dist) {
                best_dist = dist;
                match.dx = dx;
                match.dy = dy;
            }
        }
    }
    match.score = best * CensusChannels::kChannels;
    return match;
}

void write_census_pgm(const std::filesystem::path& path, const CensusImage& census)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "P5\n" << census.width << ' ' << census.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(census.codes.data()), static_cast<std::streamsize>(census.codes.size()));
}

} // namespace ftlr
