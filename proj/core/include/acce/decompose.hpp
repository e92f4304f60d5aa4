#pragma once

#include <vector>

#include "acce/image.hpp"

namespace acce {

/// Parameters of the low-/high-frequency split and the recombination gain.
struct FilterParams {
  double bilateral_spatial_sigma = 5.0;  ///< pixels
  double bilateral_range_sigma = 0.1;    ///< unit intensity
  int bilateral_radius = 7;              ///< pixels, square window
  double dog_sigma1 = 1.0;               ///< pixels
  double dog_sigma2 = 1.6;               ///< pixels, must exceed dog_sigma1
  double gain = 1.0;                     ///< weight of the high-frequency residual

  /// Throws ContractError when an invariant is violated.
  void validate() const;
};

/// Normalized 1-D Gaussian taps for offsets -radius..radius, radius = ceil(3*sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with edge replication.
Plane gaussian_blur(const Plane& p, double sigma);

/// Edge-preserving smoothing: weights are Gaussian in spatial distance and
/// in intensity difference over a square window. Output stays within
/// [min(p), max(p)].
Plane bilateral_filter(const Plane& p, const FilterParams& fp);

/// Difference of Gaussians, blur(sigma1) - blur(sigma2). Signed.
Plane dog_filter(const Plane& p, const FilterParams& fp);

RgbImage bilateral_filter(const RgbImage& img, const FilterParams& fp);
RgbResidual dog_filter(const RgbImage& img, const FilterParams& fp);

/// clamp_unit(low + gain * high), per channel.
RgbImage recombine(const RgbImage& low_enhanced, const RgbResidual& high_denoised, double gain);

}  // namespace acce
