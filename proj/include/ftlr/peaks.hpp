#pragma once

#include "ftlr/correlation.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ftlr {

struct CellPos {
    int row = 0;
    int col = 0;
    bool operator==(const CellPos&) const = default;
};

/// The two dominant peaks of a response map. p2 is absent when no candidate
/// lies at least min_separation cells away from p1.
struct PeakPair {
    CellPos p1_pos;
    double p1_val = 0.0;
    std::optional<CellPos> p2_pos;
    std::optional<double> p2_val;
};

struct ConfidenceDecision {
    bool confident = false;
    double ratio = 0.0;
    double threshold = 0.0;
    /// p1 <= 0: the whole surface is uninformative, decision forced to ambiguous.
    bool degenerate = false;
};

struct Profiles {
    std::vector<double> x; ///< x[i] = max of column i
    std::vector<double> y; ///< y[j] = max of row j
};

/// Max-projection of the surface onto the two coordinate planes.
Profiles project_profiles(const ResponseMap& response);

/// Interior positions where the first difference turns from positive to
/// non-positive and the second difference is negative. A plateau reports its
/// leftmost cell.
std::vector<int> find_profile_maxima(std::span<const double> profile);

/// Candidates are the cross product of the column- and row-profile maxima
/// that are also 2D local maxima, plus the global argmax. P1 is the global
/// argmax; P2 is the best candidate at Euclidean distance >= min_separation.
PeakPair top_two_peaks(const ResponseMap& response, int min_separation = 3);

/// ratio = p1 / p2 (+inf when p2 is absent or non-positive); confident iff
/// ratio > threshold. threshold must exceed 1.
ConfidenceDecision nndr_decision(const PeakPair& pair, double threshold);

} // namespace ftlr
