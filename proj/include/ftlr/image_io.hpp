#pragma once

#include "ftlr/core.hpp"

#include <filesystem>

namespace ftlr {

/// Reads an image file as grayscale (color inputs are luma-converted) and
/// normalizes 8-bit intensities to [0,1]. Throws IngestError on failure.
Frame read_frame(const std::filesystem::path& path, int index = 1);

/// Writes the frame as 8-bit grayscale; the format follows the extension.
/// Intensities are expected to be multiples of 1/255 already.
void write_frame(const std::filesystem::path& path, const Frame& frame);

} // namespace ftlr
