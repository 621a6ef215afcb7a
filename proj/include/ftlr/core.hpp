#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ftlr {

/// Raised when sequence data (frames, ground truth, spec files) cannot be read.
class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when the tracker cannot proceed on a frame.
class TrackerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Axis-aligned box in frame pixels. (x, y) is the top-left corner in
/// continuous coordinates where pixel k covers [k, k+1).
struct BoundingBox {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    [[nodiscard]] double center_x() const { return x + 0.5 * w; }
    [[nodiscard]] double center_y() const { return y + 0.5 * h; }
    [[nodiscard]] bool valid() const { return w > 0.0 && h > 0.0; }

    [[nodiscard]] static BoundingBox from_center(double cx, double cy, double w, double h)
    {
        return {cx - 0.5 * w, cy - 0.5 * h, w, h};
    }

    bool operator==(const BoundingBox&) const = default;
};

/// Grayscale frame, intensities in [0,1], immutable after construction.
class Frame {
public:
    Frame() = default;
    Frame(int width, int height, std::vector<float> pixels, int index = 1);

    /// Builds a frame from 8-bit samples, dividing by 255.
    static Frame from_8bit(int width, int height, std::span<const unsigned char> samples, int index = 1);

    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int height() const { return height_; }
    [[nodiscard]] int index() const { return index_; }
    [[nodiscard]] double mean() const { return mean_; }
    [[nodiscard]] std::span<const float> pixels() const { return pixels_; }
    [[nodiscard]] float at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

private:
    int width_ = 0;
    int height_ = 0;
    int index_ = 1;
    double mean_ = 0.0;
    std::vector<float> pixels_;
};

/// Square resampled window. `region` is the square area of the frame it covers.
struct Patch {
    int side = 0;
    std::vector<double> pixels;
    BoundingBox region;

    [[nodiscard]] double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * side + col]; }
};

/// Side of the square frame region covered by a crop:
/// context_scale * sqrt(w*h) * sqrt(area_factor).
double crop_region_side(const BoundingBox& box, double area_factor, double context_scale);

/// Crops a square region centered on `center_box` and resamples it to
/// out_side x out_side with bilinear interpolation. Samples falling outside
/// the frame read the frame mean intensity. Rows are filled in parallel.
Patch crop_patch(const Frame& frame, const BoundingBox& center_box, double area_factor, int out_side,
                 double context_scale = 2.0);

double iou(const BoundingBox& a, const BoundingBox& b);
double center_error(const BoundingBox& a, const BoundingBox& b);

} // namespace ftlr
