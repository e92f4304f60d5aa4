#pragma once

#include "acce/image.hpp"

namespace acce {

struct RgbPixel {
  double r = 0.0, g = 0.0, b = 0.0;
};

struct HsiPixel {
  double h = 0.0, s = 0.0, i = 0.0;
};

// Geometric (arccos sector) HSI model. Hue is stored as angle / 2pi.
// Gray and black pixels get h = 0, s = 0.
HsiPixel rgb_to_hsi(RgbPixel p) noexcept;
// Result is clamped to [0,1]; not every unit-range HSI triple is a valid color.
RgbPixel hsi_to_rgb(HsiPixel p) noexcept;

HsiImage rgb_to_hsi(const RgbImage& img);
RgbImage hsi_to_rgb(const HsiImage& img);

}  // namespace acce
