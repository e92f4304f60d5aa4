#include "acce/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace acce {

Plane::Plane(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw ContractError("plane dimensions must be positive, got " +
                        std::to_string(width) + "x" + std::to_string(height));
  }
  samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

Plane::Plane(int width, int height, std::vector<double> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  if (width < 1 || height < 1) {
    throw ContractError("plane dimensions must be positive");
  }
  if (samples_.size() != static_cast<std::size_t>(width) * height) {
    throw ContractError("plane sample count does not match width*height");
  }
}

double Plane::clamped(int x, int y) const noexcept {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return (*this)(x, y);
}

Plane clamp_unit(Plane p) {
  for (double& v : p.samples()) v = std::clamp(v, 0.0, 1.0);
  return p;
}

RgbImage clamp_unit(RgbImage img) {
  for (auto& c : img.channels) c = clamp_unit(std::move(c));
  return img;
}

bool is_unit_range(const Plane& p) noexcept {
  return std::all_of(p.samples().begin(), p.samples().end(),
                     [](double v) { return v >= 0.0 && v <= 1.0; });
}

bool all_finite(const Plane& p) noexcept {
  return std::all_of(p.samples().begin(), p.samples().end(),
                     [](double v) { return std::isfinite(v); });
}

double mean(const Plane& p) noexcept {
  double sum = 0.0;
  for (double v : p.samples()) sum += v;
  return sum / static_cast<double>(p.size());
}

double variance(const Plane& p) noexcept {
  const double m = mean(p);
  double acc = 0.0;
  for (double v : p.samples()) acc += (v - m) * (v - m);
  return acc / static_cast<double>(p.size());
}

}  // namespace acce
