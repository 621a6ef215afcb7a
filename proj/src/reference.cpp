#include "ftlr/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace ftlr::reference {

namespace {

double sample_or_mean(const Frame& frame, long x, long y)
{
    if (x < 0 || y < 0 || x >= frame.width() || y >= frame.height())
        return frame.mean();
    return frame.at(static_cast<int>(x), static_cast<int>(y));
}

} // namespace

Patch crop_patch(const Frame& frame, const BoundingBox& center_box, double area_factor, int out_side,
                 double context_scale)
{
    if (!center_box.valid() || area_factor < 1.0 || out_side < 8)
        throw std::invalid_argument("reference::crop_patch: invalid arguments");
    const double side = context_scale * std::sqrt(center_box.w * center_box.h) * std::sqrt(area_factor);
    Patch patch;
    patch.side = out_side;
    patch.region = BoundingBox::from_center(center_box.center_x(), center_box.center_y(), side, side);
    patch.pixels.resize(static_cast<std::size_t>(out_side) * out_side);
    const double step = side / out_side;
    for (int r = 0; r < out_side; ++r) {
        for (int c = 0; c < out_side; ++c) {
            // continuous position of the sample center, shifted to pixel-index coordinates
            const double sx = patch.region.x + (c + 0.5) * step - 0.5;
            const double sy = patch.region.y + (r + 0.5) * step - 0.5;
            const long x0 = static_cast<long>(std::floor(sx));
            const long y0 = static_cast<long>(std::floor(sy));
            const double fx = sx - std::floor(sx);
            const double fy = sy - std::floor(sy);
            const double v = (1 - fx) * (1 - fy) * sample_or_mean(frame, x0, y0) +
                             fx * (1 - fy) * sample_or_mean(frame, x0 + 1, y0) +
                             (1 - fx) * fy * sample_or_mean(frame, x0, y0 + 1) +
                             fx * fy * sample_or_mean(frame, x0 + 1, y0 + 1);
            patch.pixels[static_cast<std::size_t>(r) * out_side + c] = v;
        }
    }
    return patch;
}

ResponseMap cross_correlate(const FeatureMap& templ, const FeatureMap& search)
{
    detail::validate_correlation_inputs(templ, search);
    ResponseMap r = detail::empty_response(templ, search);
    const int Ht = templ.height, Wt = templ.width, C = templ.channels;
    const double n = static_cast<double>(Ht) * Wt;
    for (int u = 0; u < r.height; ++u) {
        for (int v = 0; v < r.width; ++v) {
            double total = 0.0;
            for (int c = 0; c < C; ++c) {
                double t_mean = 0.0, s_mean = 0.0;
                for (int i = 0; i < Ht; ++i)
                    for (int j = 0; j < Wt; ++j) {
                        t_mean += templ.at(i, j, c);
                        s_mean += search.at(u + i, v + j, c);
                    }
                t_mean /= n;
                s_mean /= n;
                double cross = 0.0, t_energy = 0.0, s_energy = 0.0, t_raw = 0.0, s_raw = 0.0;
                for (int i = 0; i < Ht; ++i)
                    for (int j = 0; j < Wt; ++j) {
                        const double a = templ.at(i, j, c) - t_mean;
                        const double b = search.at(u + i, v + j, c) - s_mean;
                        cross += a * b;
                        t_energy += a * a;
                        s_energy += b * b;
                        t_raw += templ.at(i, j, c) * templ.at(i, j, c);
                        s_raw += search.at(u + i, v + j, c) * search.at(u + i, v + j, c);
                    }
                // Same degeneracy floor as the fast kernels.
                if (t_energy > 1e-10 * t_raw && s_energy > 1e-10 * s_raw)
                    total += cross / std::sqrt(t_energy * s_energy);
            }
            r.at(u, v) = total / C;
        }
    }
    return r;
}

} // namespace ftlr::reference
