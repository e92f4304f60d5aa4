#include "acce/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace acce {

namespace {
constexpr double kMadToSigma = 0.6745;
}

double estimate_threshold(const Plane& residual) {
  std::vector<double> mags(residual.size());
  std::transform(residual.samples().begin(), residual.samples().end(), mags.begin(),
                 [](double v) { return std::abs(v); });
  const std::size_t n = mags.size();
  const auto mid = mags.begin() + static_cast<long>(n / 2);
  std::nth_element(mags.begin(), mid, mags.end());
  double median = *mid;
  if (n % 2 == 0) {
    median = 0.5 * (median + *std::max_element(mags.begin(), mid));
  }
  return median / kMadToSigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

Plane soft_threshold(const Plane& residual, double t) {
  if (!(t >= 0.0)) throw ContractError("soft threshold must be >= 0");
  Plane out = residual;
  for (double& v : out.samples()) {
    const double mag = std::max(std::abs(v) - t, 0.0);
    v = std::copysign(mag, v);
    if (mag == 0.0) v = 0.0;
  }
  return out;
}

RgbResidual denoise(const RgbResidual& high, const ThresholdSpec& spec,
                    std::array<double, 3>* used) {
  RgbResidual out;
  for (std::size_t c = 0; c < 3; ++c) {
    const double t = spec.mode == ThresholdSpec::Mode::automatic ? estimate_threshold(high[c])
                                                                   : spec.value;
    if (used) (*used)[c] = t;
    out[c] = soft_threshold(high[c], t);
  }
  return out;
}

}  // namespace acce
