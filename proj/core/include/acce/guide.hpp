#pragma once

#include "acce/image.hpp"

namespace acce {

/// How the per-channel spread in the k-sigma clip is measured.
enum class SpreadMode {
  stddev,    ///< population standard deviation (default)
  variance,  ///< population variance
};

struct ChannelStats {
  double avg = 0.0;
  double spread = 0.0;
  double upper = 0.0;  ///< avg + lambda * spread
  double lower = 0.0;  ///< avg - lambda * spread
};

ChannelStats channel_stats(const Plane& f, double lambda, SpreadMode mode = SpreadMode::stddev);

/// Linear stretch of [lower, upper] onto [0,1], clamped. A channel whose
/// thresholds are closer than 1e-6 passes through unchanged.
Plane stretch_channel(const Plane& f, const ChannelStats& stats);

/// Color-corrected target in RGB: each channel of the low-frequency image
/// stretched between its own thresholds.
RgbImage corrected_rgb(const RgbImage& low, double lambda, SpreadMode mode = SpreadMode::stddev);

/// The guide used by the solver: corrected_rgb converted to HSI.
GuideImage build_guide(const RgbImage& low, double lambda, SpreadMode mode = SpreadMode::stddev);

}  // namespace acce
