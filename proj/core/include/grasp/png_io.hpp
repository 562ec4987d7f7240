#pragma once

#include "grasp/image.hpp"

#include <string>

namespace grasp {

// Decodes a PNG into an 8-bit 3-channel raster. Grayscale, palette and
// 16-bit inputs are expanded/stripped to RGB8; alpha is dropped.
ImageU8 read_png_rgb8(const std::string& path);

// Encodes a 1- or 3-channel 8-bit raster as PNG.
void write_png(const std::string& path, const ImageU8& image);

} // namespace grasp
