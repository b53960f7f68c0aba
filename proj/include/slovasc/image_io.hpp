#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "slovasc/grid.hpp"

namespace slovasc {

using Rgb = std::array<std::uint8_t, 3>;
using RgbImage = Grid<Rgb>;

bool is_supported_raster(const std::filesystem::path& path);

/// 8-bit raster read. Colour inputs are converted by Rec.601 luminance.
/// Throws UnreadableFile / UnsupportedFormat.
GrayImage read_gray(const std::filesystem::path& path);

/// 8-bit single-channel read; multi-channel input raises UnsupportedFormat.
GrayImage read_single_channel(const std::filesystem::path& path);

void write_gray(const std::filesystem::path& path, const GrayImage& img);
void write_mask(const std::filesystem::path& path, const BinaryMask& mask);  ///< {0,255}
void write_rgb(const std::filesystem::path& path, const RgbImage& img);
RgbImage read_rgb(const std::filesystem::path& path);

}  // namespace slovasc
