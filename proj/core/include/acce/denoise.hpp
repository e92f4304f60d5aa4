#pragma once

#include "acce/image.hpp"

namespace acce {

struct ThresholdSpec {
  enum class Mode { automatic, fixed };
  Mode mode = Mode::automatic;
  double value = 0.0;  ///< used in fixed mode, must be >= 0
};

/// Universal threshold with the MAD noise estimate:
/// median(|r|) / 0.6745 * sqrt(2 ln N).
double estimate_threshold(const Plane& residual);

/// sign(r) * max(|r| - t, 0), pixelwise.
Plane soft_threshold(const Plane& residual, double t);

/// Per-channel shrinkage; in automatic mode each channel gets its own
/// threshold. The thresholds actually used are written to `used` if given.
RgbResidual denoise(const RgbResidual& high, const ThresholdSpec& spec,
                    std::array<double, 3>* used = nullptr);

}  // namespace acce
