#include "acce/guide.hpp"

#include <algorithm>
#include <cmath>

#include "acce/color.hpp"

namespace acce {

namespace {
constexpr double kDegenerateRange = 1e-6;
}

ChannelStats channel_stats(const Plane& f, double lambda, SpreadMode mode) {
  if (!(lambda > 0.0)) throw ContractError("lambda must be positive");
  ChannelStats st;
  st.avg = mean(f);
  const double var = variance(f);
  st.spread = mode == SpreadMode::stddev ? std::sqrt(var) : var;
  st.upper = st.avg + lambda * st.spread;
  st.lower = st.avg - lambda * st.spread;
  return st;
}

Plane stretch_channel(const Plane& f, const ChannelStats& stats) {
  const double range = stats.upper - stats.lower;
  if (range < kDegenerateRange) return f;
  Plane out = f;
  for (double& v : out.samples()) v = std::clamp((v - stats.lower) / range, 0.0, 1.0);
  return out;
}

RgbImage corrected_rgb(const RgbImage& low, double lambda, SpreadMode mode) {
  RgbImage out;
  for (std::size_t c = 0; c < 3; ++c) {
    out[c] = stretch_channel(low[c], channel_stats(low[c], lambda, mode));
  }
  return out;
}

GuideImage build_guide(const RgbImage& low, double lambda, SpreadMode mode) {
  return rgb_to_hsi(corrected_rgb(low, lambda, mode));
}

}  // namespace acce
