#pragma once

#include <string>

#include "acce/image.hpp"

namespace acce {

enum class SsimMode {
  luma,         ///< SSIM of the per-pixel mean of R, G and B
  rgb_average,  ///< mean of the three per-channel SSIM values
};

struct MetricReport {
  double mse = 0.0;
  double psnr_db = 0.0;  ///< +infinity for identical images
  double ssim = 1.0;

  /// {"mse": ..., "psnr_db": ... | "inf", "ssim": ...}
  std::string to_json() const;
};

/// Mean over all channels and pixels of (a - b)^2.
double mse(const RgbImage& a, const RgbImage& b);

/// 10 log10(1 / mse) with peak 1.0; +infinity when mse == 0.
double psnr(const RgbImage& a, const RgbImage& b);

/// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), C1 = 0.01^2,
/// C2 = 0.03^2, averaged over the positions where the window fits.
/// Both dimensions must be at least 11.
double ssim(const RgbImage& a, const RgbImage& b, SsimMode mode = SsimMode::luma);
double ssim(const Plane& a, const Plane& b);

MetricReport compare(const RgbImage& a, const RgbImage& b, SsimMode mode = SsimMode::luma);

}  // namespace acce
