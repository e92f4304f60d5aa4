#pragma once

#include <array>
#include <filesystem>

#include "acce/image.hpp"

namespace acce {

/// Reads an 8-bit PNG (alpha is discarded) or a binary PPM (P6, maxval 255).
/// The format is detected from the file's magic bytes.
/// Throws IoError if the file cannot be read and FormatError for anything else
/// (16-bit data, other PNM variants, truncated pixel data).
RgbImage load_image(const std::filesystem::path& path);

/// Writes PNG for a ".png" extension and P6 for ".ppm"/".pnm". Samples are
/// quantized as floor(v*255 + 0.5) clamped to [0,255].
void save_image(const RgbImage& img, const std::filesystem::path& path);

std::uint8_t quantize_sample(double v) noexcept;

// Portable float map ("PF", little-endian, bottom-up rows). Used for dumping
// intermediate planes, including signed residuals, without 8-bit rounding.
void write_pfm(const std::filesystem::path& path, const std::array<const Plane*, 3>& channels);
std::array<Plane, 3> read_pfm(const std::filesystem::path& path);

}  // namespace acce
