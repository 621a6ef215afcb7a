#include "ftlr/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ftlr {

Frame::Frame(int width, int height, std::vector<float> pixels, int index)
    : width_(width), height_(height), index_(index), pixels_(std::move(pixels))
{
    if (width < 1 || height < 1)
        throw std::invalid_argument("frame dimensions must be at least 1x1");
    if (pixels_.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("frame pixel count does not match width*height");
    double sum = 0.0;
    for (float v : pixels_) {
        if (!(v >= 0.0f && v <= 1.0f))
            throw std::invalid_argument("frame intensity outside [0,1]");
        sum += v;
    }
    mean_ = sum / static_cast<double>(pixels_.size());
}

Frame Frame::from_8bit(int width, int height, std::span<const unsigned char> samples, int index)
{
    std::vector<float> pixels(samples.size());
    std::transform(samples.begin(), samples.end(), pixels.begin(),
                   [](unsigned char v) { return static_cast<float>(v) / 255.0f; });
    return Frame(width, height, std::move(pixels), index);
}

double crop_region_side(const BoundingBox& box, double area_factor, double context_scale)
{
    return context_scale * std::sqrt(box.w * box.h) * std::sqrt(area_factor);
}

Patch crop_patch(const Frame& frame, const BoundingBox& center_box, double area_factor, int out_side,
                 double context_scale)
{
    if (!center_box.valid())
        throw std::invalid_argument("crop_patch: box must have positive width and height");
    if (frame.width() < 1 || frame.height() < 1)
        throw std::invalid_argument("crop_patch: degenerate frame");
    if (!(area_factor >= 1.0))
        throw std::invalid_argument("crop_patch: area_factor must be >= 1");
    if (out_side < 8)
        throw std::invalid_argument("crop_patch: out_side must be >= 8");
    if (!(context_scale > 0.0))
        throw std::invalid_argument("crop_patch: context_scale must be positive");

    const double side = crop_region_side(center_box, area_factor, context_scale);
    const double cx = center_box.center_x();
    const double cy = center_box.center_y();

    Patch patch;
    patch.side = out_side;
    patch.region = BoundingBox::from_center(cx, cy, side, side);
    patch.pixels.resize(static_cast<std::size_t>(out_side) * out_side);

    const double step = side / out_side;
    // Pixel k has its center at k + 0.5 in continuous coordinates.
    const double origin_x = cx - 0.5 * side + 0.5 * step - 0.5;
    const double origin_y = cy - 0.5 * side + 0.5 * step - 0.5;
    const int W = frame.width();
    const int H = frame.height();
    const double fill = frame.mean();
    const auto src = frame.pixels();

#pragma omp parallel for schedule(static)
    for (int r = 0; r < out_side; ++r) {
        const double sy = origin_y + r * step;
        const double y0f = std::floor(sy);
        const double fy = sy - y0f;
        const long y0 = static_cast<long>(y0f);
        const long y1 = y0 + 1;
        const bool row0 = y0 >= 0 && y0 < H;
        const bool row1 = y1 >= 0 && y1 < H;
        double* out = patch.pixels.data() + static_cast<std::size_t>(r) * out_side;
        for (int c = 0; c < out_side; ++c) {
            const double sx = origin_x + c * step;
            const double x0f = std::floor(sx);
            const double fx = sx - x0f;
            const long x0 = static_cast<long>(x0f);
            const long x1 = x0 + 1;
            const bool col0 = x0 >= 0 && x0 < W;
            const bool col1 = x1 >= 0 && x1 < W;
            const double v00 = row0 && col0 ? src[y0 * W + x0] : fill;
            const double v01 = row0 && col1 ? src[y0 * W + x1] : fill;
            const double v10 = row1 && col0 ? src[y1 * W + x0] : fill;
            const double v11 = row1 && col1 ? src[y1 * W + x1] : fill;
            const double top = v00 + fx * (v01 - v00);
            const double bottom = v10 + fx * (v11 - v10);
            out[c] = top + fy * (bottom - top);
        }
    }
    return patch;
}

double iou(const BoundingBox& a, const BoundingBox& b)
{
    if (!a.valid() || !b.valid())
        throw std::invalid_argument("iou: boxes must have positive width and height");
    if (a == b)
        return 1.0;
    const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
    const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
    const double inter = ix * iy;
    const double uni = a.w * a.h + b.w * b.h - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

double center_error(const BoundingBox& a, const BoundingBox& b)
{
    return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
}

} // namespace ftlr
