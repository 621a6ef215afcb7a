#pragma once

#include "ftlr/eval.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ftlr {

/// One row of curves.csv.
struct CurveRow {
    std::string sequence;
    std::string variant;
    std::string protocol;
    std::string kind; ///< "success" or "precision"
    double threshold = 0.0;
    double value = 0.0;
};

std::vector<CurveRow> curve_rows(std::span<const EvalRecord> records);
std::vector<CurveRow> read_curves_csv(std::istream& in);

/// Averages the curves over sequences per (variant, protocol) and writes
/// success_plot.svg and precision_plot.svg into `directory`.
void write_curve_svgs(const std::filesystem::path& directory, std::span<const CurveRow> rows);

} // namespace ftlr
