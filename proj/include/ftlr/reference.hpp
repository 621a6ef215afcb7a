#pragma once

// Serial scalar-loop implementations of the parallel kernels. They favour
// obviousness over speed and are kept for tests and the benchmark.

#include "ftlr/correlation.hpp"
#include "ftlr/core.hpp"

namespace ftlr::reference {

/// Per-pixel bilinear crop, one sample at a time, no parallelism.
Patch crop_patch(const Frame& frame, const BoundingBox& center_box, double area_factor, int out_side,
                 double context_scale = 2.0);

/// Placement-by-placement normalized correlation with two-pass statistics.
ResponseMap cross_correlate(const FeatureMap& templ, const FeatureMap& search);

} // namespace ftlr::reference
