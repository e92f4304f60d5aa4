#include "acce/decompose.hpp"

#include <algorithm>
#include <cmath>

namespace acce {

void FilterParams::validate() const {
  if (!(bilateral_spatial_sigma > 0.0) || !(bilateral_range_sigma > 0.0)) {
    throw ContractError("bilateral sigmas must be positive");
  }
  if (bilateral_radius < 1) throw ContractError("bilateral radius must be >= 1");
  if (!(dog_sigma1 > 0.0) || !(dog_sigma2 > dog_sigma1)) {
    throw ContractError("DoG requires 0 < sigma1 < sigma2");
  }
  if (!(gain >= 0.0)) throw ContractError("recombination gain must be >= 0");
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw ContractError("gaussian sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-(k * k) / (2.0 * sigma * sigma));
    taps[k + radius] = v;
    sum += v;
  }
  for (double& v : taps) v /= sum;
  return taps;
}

Plane gaussian_blur(const Plane& p, double sigma) {
  const auto taps = gaussian_kernel(sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  const int w = p.width();
  const int h = p.height();

  // Horizontal pass over an edge-replicated copy of each row.
  Plane tmp(w, h);
  std::vector<double> padded(static_cast<std::size_t>(w + 2 * radius));
  for (int y = 0; y < h; ++y) {
    const auto src = p.row(y);
    std::fill(padded.begin(), padded.begin() + radius, src.front());
    std::copy(src.begin(), src.end(), padded.begin() + radius);
    std::fill(padded.begin() + radius + w, padded.end(), src.back());
    auto dst = tmp.row(y);
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < taps.size(); ++k) acc += taps[k] * padded[x + k];
      dst[x] = acc;
    }
  }
  // Vertical pass, accumulating whole rows with clamped row indices.
  Plane out(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    double* dst = out.row(y).data();
    for (int k = -radius; k <= radius; ++k) {
      const double t = taps[k + radius];
      const double* src = tmp.row(std::clamp(y + k, 0, h - 1)).data();
      for (int x = 0; x < w; ++x) dst[x] += t * src[x];
    }
  }
  return out;
}

Plane bilateral_filter(const Plane& p, const FilterParams& fp) {
  fp.validate();
  const int r = fp.bilateral_radius;
  const int side = 2 * r + 1;
  std::vector<double> spatial(static_cast<std::size_t>(side) * side);
  const double ss = 2.0 * fp.bilateral_spatial_sigma * fp.bilateral_spatial_sigma;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      spatial[(dy + r) * side + (dx + r)] = std::exp(-(dx * dx + dy * dy) / ss);
    }
  }
  const double rs = 2.0 * fp.bilateral_range_sigma * fp.bilateral_range_sigma;

  Plane out(p.width(), p.height());
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) {
      const double center = p(x, y);
      double num = 0.0;
      double den = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const double v = p.clamped(x + dx, y + dy);
          const double d = v - center;
          const double wgt = spatial[(dy + r) * side + (dx + r)] * std::exp(-(d * d) / rs);
          num += wgt * v;
          den += wgt;
        }
      }
      // den >= spatial weight of the center tap (1.0), never zero.
      out(x, y) = num / den;
    }
  }
  return out;
}

Plane dog_filter(const Plane& p, const FilterParams& fp) {
  if (!(fp.dog_sigma2 > fp.dog_sigma1)) throw ContractError("DoG requires sigma2 > sigma1");
  Plane fine = gaussian_blur(p, fp.dog_sigma1);
  const Plane coarse = gaussian_blur(p, fp.dog_sigma2);
  auto f = fine.samples();
  const auto c = coarse.samples();
  for (std::size_t k = 0; k < f.size(); ++k) f[k] -= c[k];
  return fine;
}

RgbImage bilateral_filter(const RgbImage& img, const FilterParams& fp) {
  return RgbImage(bilateral_filter(img[0], fp), bilateral_filter(img[1], fp),
                  bilateral_filter(img[2], fp));
}

RgbResidual dog_filter(const RgbImage& img, const FilterParams& fp) {
  return RgbResidual(dog_filter(img[0], fp), dog_filter(img[1], fp), dog_filter(img[2], fp));
}

RgbImage recombine(const RgbImage& low_enhanced, const RgbResidual& high_denoised, double gain) {
  if (low_enhanced.width() != high_denoised.width() ||
      low_enhanced.height() != high_denoised.height()) {
    throw ContractError("recombine: low and high components differ in size");
  }
  RgbImage out = low_enhanced;
  for (std::size_t c = 0; c < 3; ++c) {
    auto o = out[c].samples();
    const auto hi = high_denoised[c].samples();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = std::clamp(o[k] + gain * hi[k], 0.0, 1.0);
  }
  return out;
}

}  // namespace acce
