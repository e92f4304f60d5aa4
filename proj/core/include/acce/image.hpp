#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "acce/errors.hpp"

namespace acce {

/// Single-channel image buffer of doubles, row-major.
///
/// Most planes in the pipeline hold unit-range samples, but high-frequency
/// residuals and nonlocal sums are signed; the container itself does not
/// enforce a range.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, double fill = 0.0);
  Plane(int width, int height, std::vector<double> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  double& operator()(int x, int y) noexcept {
    return samples_[static_cast<std::size_t>(y) * width_ + x];
  }
  double operator()(int x, int y) const noexcept {
    return samples_[static_cast<std::size_t>(y) * width_ + x];
  }

  /// Edge-replicating accessor: coordinates are clamped into the plane.
  double clamped(int x, int y) const noexcept;

  std::span<double> samples() noexcept { return samples_; }
  std::span<const double> samples() const noexcept { return samples_; }

  std::span<double> row(int y) noexcept {
    return {samples_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<const double> row(int y) const noexcept {
    return {samples_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }

  bool same_shape(const Plane& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> samples_;
};

/// Three planes of identical shape. `Tag` only distinguishes the meaning of
/// the channels (RGB, HSI or a signed RGB residual) at the type level.
template <class Tag>
struct ThreePlane {
  std::array<Plane, 3> channels;

  ThreePlane() = default;
  ThreePlane(Plane c0, Plane c1, Plane c2);
  ThreePlane(int width, int height, double fill = 0.0)
      : channels{Plane(width, height, fill), Plane(width, height, fill),
                 Plane(width, height, fill)} {}

  int width() const noexcept { return channels[0].width(); }
  int height() const noexcept { return channels[0].height(); }

  Plane& operator[](std::size_t c) noexcept { return channels[c]; }
  const Plane& operator[](std::size_t c) const noexcept { return channels[c]; }

  friend bool operator==(const ThreePlane&, const ThreePlane&) = default;
};

template <class Tag>
ThreePlane<Tag>::ThreePlane(Plane c0, Plane c1, Plane c2)
    : channels{std::move(c0), std::move(c1), std::move(c2)} {
  if (!channels[0].same_shape(channels[1]) ||
      !channels[0].same_shape(channels[2])) {
    throw ContractError("three-plane image: channel shapes differ");
  }
}

struct RgbTag {};
struct HsiTag {};
struct ResidualTag {};

/// Unit-range red, green, blue planes.
struct RgbImage : ThreePlane<RgbTag> {
  using ThreePlane::ThreePlane;
  Plane& r() noexcept { return channels[0]; }
  Plane& g() noexcept { return channels[1]; }
  Plane& b() noexcept { return channels[2]; }
  const Plane& r() const noexcept { return channels[0]; }
  const Plane& g() const noexcept { return channels[1]; }
  const Plane& b() const noexcept { return channels[2]; }
};

/// Hue (angle / 2pi), saturation and intensity planes, all unit-range.
struct HsiImage : ThreePlane<HsiTag> {
  using ThreePlane::ThreePlane;
  Plane& h() noexcept { return channels[0]; }
  Plane& s() noexcept { return channels[1]; }
  Plane& i() noexcept { return channels[2]; }
  const Plane& h() const noexcept { return channels[0]; }
  const Plane& s() const noexcept { return channels[1]; }
  const Plane& i() const noexcept { return channels[2]; }
};

/// Signed per-channel RGB residual (high-frequency component).
struct RgbResidual : ThreePlane<ResidualTag> {
  using ThreePlane::ThreePlane;
};

/// The color-corrected target image the solver pulls towards.
using GuideImage = HsiImage;

Plane clamp_unit(Plane p);
RgbImage clamp_unit(RgbImage img);

/// True when every sample lies in [0,1] (NaN fails).
bool is_unit_range(const Plane& p) noexcept;
bool all_finite(const Plane& p) noexcept;

double mean(const Plane& p) noexcept;
/// Population variance.
double variance(const Plane& p) noexcept;

}  // namespace acce
