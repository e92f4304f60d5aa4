#include "acce/color.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace acce {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kThirdTurn = kTwoPi / 3.0;

// Below this chroma the hue angle is numerically meaningless.
constexpr double kGrayEpsilon = 1e-12;

double unit(double v) noexcept { return std::clamp(v, 0.0, 1.0); }

}  // namespace

HsiPixel rgb_to_hsi(RgbPixel p) noexcept {
  const double sum = p.r + p.g + p.b;
  HsiPixel out;
  out.i = unit(sum / 3.0);
  if (sum <= 0.0) return out;

  const double lo = std::min({p.r, p.g, p.b});
  out.s = unit(1.0 - 3.0 * lo / sum);

  // atan2 of the chroma vector gives the same angle as
  // arccos((2R-G-B) / (2 sqrt((R-G)^2 + (R-B)(G-B)))) with the B > G flip,
  // without the precision loss of arccos near +-1.
  const double x = 2.0 * p.r - p.g - p.b;
  const double y = std::sqrt(3.0) * (p.g - p.b);
  if (std::hypot(x, y) <= kGrayEpsilon || out.s == 0.0) {
    out.s = 0.0;
    return out;
  }
  double theta = std::atan2(y, x);
  if (theta < 0.0) theta += kTwoPi;
  out.h = theta / kTwoPi;
  if (out.h >= 1.0) out.h = 0.0;
  return out;
}

RgbPixel hsi_to_rgb(HsiPixel p) noexcept {
  const double intensity = p.i;
  const double sat = p.s;
  double h = p.h * kTwoPi;
  if (h >= kTwoPi) h -= kTwoPi;

  // Within each 120 degree sector: the trailing channel is I(1-S), the
  // leading one follows from the cosine ratio and the third closes 3I.
  auto lead = [&](double angle) {
    return intensity *
           (1.0 + sat * std::cos(angle) / std::cos(std::numbers::pi / 3.0 - angle));
  };
  const double low = intensity * (1.0 - sat);

  RgbPixel out;
  if (h < kThirdTurn) {
    out.b = low;
    out.r = lead(h);
    out.g = 3.0 * intensity - (out.r + out.b);
  } else if (h < 2.0 * kThirdTurn) {
    h -= kThirdTurn;
    out.r = low;
    out.g = lead(h);
    out.b = 3.0 * intensity - (out.r + out.g);
  } else {
    h -= 2.0 * kThirdTurn;
    out.g = low;
    out.b = lead(h);
    out.r = 3.0 * intensity - (out.g + out.b);
  }
  out.r = unit(out.r);
  out.g = unit(out.g);
  out.b = unit(out.b);
  return out;
}

HsiImage rgb_to_hsi(const RgbImage& img) {
  HsiImage out(img.width(), img.height());
  const auto r = img.r().samples();
  const auto g = img.g().samples();
  const auto b = img.b().samples();
  auto h = out.h().samples();
  auto s = out.s().samples();
  auto i = out.i().samples();
  for (std::size_t k = 0; k < r.size(); ++k) {
    const HsiPixel px = rgb_to_hsi(RgbPixel{r[k], g[k], b[k]});
    h[k] = px.h;
    s[k] = px.s;
    i[k] = px.i;
  }
  return out;
}

RgbImage hsi_to_rgb(const HsiImage& img) {
  RgbImage out(img.width(), img.height());
  const auto h = img.h().samples();
  const auto s = img.s().samples();
  const auto i = img.i().samples();
  auto r = out.r().samples();
  auto g = out.g().samples();
  auto b = out.b().samples();
  for (std::size_t k = 0; k < h.size(); ++k) {
    const RgbPixel px = hsi_to_rgb(HsiPixel{h[k], s[k], i[k]});
    r[k] = px.r;
    g[k] = px.g;
    b[k] = px.b;
  }
  return out;
}

}  // namespace acce
