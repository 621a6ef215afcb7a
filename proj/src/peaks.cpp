#include "ftlr/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ftlr {

Profiles project_profiles(const ResponseMap& response)
{
    Profiles p;
    p.x.assign(response.width, -std::numeric_limits<double>::infinity());
    p.y.assign(response.height, -std::numeric_limits<double>::infinity());
    for (int r = 0; r < response.height; ++r)
        for (int c = 0; c < response.width; ++c) {
            const double v = response.at(r, c);
            p.x[c] = std::max(p.x[c], v);
            p.y[r] = std::max(p.y[r], v);
        }
    return p;
}

std::vector<int> find_profile_maxima(std::span<const double> profile)
{
    std::vector<int> maxima;
    const int n = static_cast<int>(profile.size());
    if (n < 3)
        return maxima;
    std::vector<double> d1(n - 1);
    for (int i = 0; i + 1 < n; ++i)
        d1[i] = profile[i + 1] - profile[i];
    for (int i = 1; i + 1 < n; ++i) {
        const double d2 = d1[i] - d1[i - 1];
        if (d1[i - 1] > 0.0 && d1[i] <= 0.0 && d2 < 0.0)
            maxima.push_back(i);
    }
    return maxima;
}

namespace {

bool is_local_max(const ResponseMap& m, int r, int c)
{
    const double v = m.at(r, c);
    for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
            const int rr = r + dr, cc = c + dc;
            if ((dr == 0 && dc == 0) || rr < 0 || cc < 0 || rr >= m.height || cc >= m.width)
                continue;
            if (m.at(rr, cc) > v)
                return false;
        }
    return true;
}

} // namespace

PeakPair top_two_peaks(const ResponseMap& response, int min_separation)
{
    if (min_separation < 1)
        throw std::invalid_argument("top_two_peaks: min_separation must be >= 1");
    if (response.values.empty())
        throw std::invalid_argument("top_two_peaks: empty response");

    const auto best = std::max_element(response.values.begin(), response.values.end());
    const auto argmax = static_cast<int>(best - response.values.begin());
    PeakPair pair;
    pair.p1_pos = {argmax / response.width, argmax % response.width};
    pair.p1_val = *best;

    const Profiles prof = project_profiles(response);
    const std::vector<int> cols = find_profile_maxima(prof.x);
    const std::vector<int> rows = find_profile_maxima(prof.y);
    const double min_sep_sq = static_cast<double>(min_separation) * min_separation;

    for (int r : rows) {
        for (int c : cols) {
            const double dr = r - pair.p1_pos.row;
            const double dc = c - pair.p1_pos.col;
            if (dr * dr + dc * dc < min_sep_sq)
                continue;
            if (!is_local_max(response, r, c))
                continue;
            const double v = response.at(r, c);
            if (!pair.p2_val || v > *pair.p2_val) {
                pair.p2_val = v;
                pair.p2_pos = CellPos{r, c};
            }
        }
    }
    return pair;
}

ConfidenceDecision nndr_decision(const PeakPair& pair, double threshold)
{
    if (!(threshold > 1.0))
        throw std::invalid_argument("nndr_decision: threshold must be > 1");
    ConfidenceDecision d;
    d.threshold = threshold;
    if (!(pair.p1_val > 0.0)) {
        d.degenerate = true;
        d.confident = false;
        d.ratio = 0.0;
        return d;
    }
    if (!pair.p2_val || *pair.p2_val <= 0.0)
        d.ratio = std::numeric_limits<double>::infinity();
    else
        d.ratio = pair.p1_val / *pair.p2_val;
    d.confident = d.ratio > threshold;
    return d;
}

} // namespace ftlr
