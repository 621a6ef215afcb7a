#include "ftlr/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <cmath>
#include <span>

namespace ftlr {

Frame read_frame(const std::filesystem::path& path, int index)
{
    cv::Mat img = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
    if (img.empty())
        throw IngestError("cannot decode image " + path.string());
    if (img.depth() != CV_8U)
        img.convertTo(img, CV_8U);
    if (!img.isContinuous())
        img = img.clone();
    return Frame::from_8bit(img.cols, img.rows, std::span<const unsigned char>(img.data, img.total()), index);
}

void write_frame(const std::filesystem::path& path, const Frame& frame)
{
    cv::Mat img(frame.height(), frame.width(), CV_8UC1);
    const auto px = frame.pixels();
    for (int y = 0; y < frame.height(); ++y)
        for (int x = 0; x < frame.width(); ++x)
            img.at<unsigned char>(y, x) =
                static_cast<unsigned char>(std::lround(px[static_cast<std::size_t>(y) * frame.width() + x] * 255.0f));
    if (!cv::imwrite(path.string(), img))
        throw std::runtime_error("cannot write image " + path.string());
}

} // namespace ftlr
