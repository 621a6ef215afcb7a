#pragma once

#include "ftlr/core.hpp"
#include "ftlr/correlation.hpp"
#include "ftlr/features.hpp"

#include <random>
#include <vector>

namespace ftlr::fixtures {

inline Frame random_frame(int w, int h, std::uint64_t seed, int index = 1)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(0, 255);
    std::vector<unsigned char> px(static_cast<std::size_t>(w) * h);
    for (auto& p : px)
        p = static_cast<unsigned char>(dist(rng));
    return Frame::from_8bit(w, h, px, index);
}

inline FeatureMap random_map(int h, int w, int c, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    FeatureMap m(h, w, c);
    for (double& v : m.values)
        v = n(rng);
    return m;
}

/// Copies a window of `src` starting at (top, left).
inline FeatureMap crop_map(const FeatureMap& src, int top, int left, int h, int w)
{
    FeatureMap out(h, w, src.channels);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < src.channels; ++c)
                out.at(y, x, c) = src.at(top + y, left + x, c);
    return out;
}

/// Brute-force 2D local maxima: cells not smaller than any of their 8 neighbours.
inline std::vector<std::pair<int, int>> local_maxima_2d(const ResponseMap& r)
{
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < r.height; ++i)
        for (int j = 0; j < r.width; ++j) {
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    const int a = i + di, b = j + dj;
                    if ((di || dj) && a >= 0 && b >= 0 && a < r.height && b < r.width && r.at(a, b) > r.at(i, j)) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max)
                out.emplace_back(i, j);
        }
    return out;
}

} // namespace ftlr::fixtures
