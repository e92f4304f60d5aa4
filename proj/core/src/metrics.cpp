#include "acce/metrics.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace acce {

namespace {

constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

void require_same(const RgbImage& a, const RgbImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw ContractError("metric inputs have different dimensions");
  }
}

std::array<double, kWindow> window_taps() {
  std::array<double, kWindow> taps{};
  double sum = 0.0;
  for (int k = 0; k < kWindow; ++k) {
    const double d = k - kWindow / 2;
    taps[k] = std::exp(-d * d / (2.0 * kWindowSigma * kWindowSigma));
    sum += taps[k];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// Separable Gaussian filtering restricted to positions where the full window
// fits ("valid" region).
Plane filter_valid(const Plane& p, const std::array<double, kWindow>& taps) {
  const int ow = p.width() - kWindow + 1;
  const int oh = p.height() - kWindow + 1;
  Plane horiz(ow, p.height());
  for (int y = 0; y < p.height(); ++y) {
    const auto in = p.row(y);
    auto out = horiz.row(y);
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += taps[k] * in[x + k];
      out[x] = acc;
    }
  }
  Plane out(ow, oh);
  for (int y = 0; y < oh; ++y) {
    auto o = out.row(y);
    for (int k = 0; k < kWindow; ++k) {
      const auto in = horiz.row(y + k);
      for (int x = 0; x < ow; ++x) o[x] += taps[k] * in[x];
    }
  }
  return out;
}

Plane product(const Plane& a, const Plane& b) {
  Plane out = a;
  auto o = out.samples();
  const auto bv = b.samples();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] *= bv[k];
  return out;
}

Plane luma(const RgbImage& img) {
  Plane out = img.r();
  auto o = out.samples();
  const auto g = img.g().samples(), b = img.b().samples();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = (o[k] + g[k] + b[k]) / 3.0;
  return out;
}

}  // namespace

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["mse"] = mse;
  if (std::isinf(psnr_db)) {
    j["psnr_db"] = "inf";
  } else {
    j["psnr_db"] = psnr_db;
  }
  j["ssim"] = ssim;
  return j.dump();
}

double mse(const RgbImage& a, const RgbImage& b) {
  require_same(a, b);
  double acc = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    const auto av = a[c].samples(), bv = b[c].samples();
    for (std::size_t k = 0; k < av.size(); ++k) acc += (av[k] - bv[k]) * (av[k] - bv[k]);
  }
  return acc / (3.0 * static_cast<double>(a[0].size()));
}

double psnr(const RgbImage& a, const RgbImage& b) {
  const double m = mse(a, b);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / m);
}

double ssim(const Plane& a, const Plane& b) {
  if (!a.same_shape(b)) throw ContractError("metric inputs have different dimensions");
  if (a.width() < kWindow || a.height() < kWindow) {
    throw ContractError("ssim needs both dimensions >= 11");
  }
  static const auto taps = window_taps();
  const Plane mu_a = filter_valid(a, taps);
  const Plane mu_b = filter_valid(b, taps);
  const Plane aa = filter_valid(product(a, a), taps);
  const Plane bb = filter_valid(product(b, b), taps);
  const Plane ab = filter_valid(product(a, b), taps);

  const auto ma = mu_a.samples(), mb = mu_b.samples();
  const auto saa = aa.samples(), sbb = bb.samples(), sab = ab.samples();
  double acc = 0.0;
  for (std::size_t k = 0; k < ma.size(); ++k) {
    const double va = saa[k] - ma[k] * ma[k];
    const double vb = sbb[k] - mb[k] * mb[k];
    const double cov = sab[k] - ma[k] * mb[k];
    const double num = (2.0 * ma[k] * mb[k] + kC1) * (2.0 * cov + kC2);
    const double den = (ma[k] * ma[k] + mb[k] * mb[k] + kC1) * (va + vb + kC2);
    acc += num / den;
  }
  return acc / static_cast<double>(ma.size());
}

double ssim(const RgbImage& a, const RgbImage& b, SsimMode mode) {
  require_same(a, b);
  if (mode == SsimMode::luma) return ssim(luma(a), luma(b));
  return (ssim(a.r(), b.r()) + ssim(a.g(), b.g()) + ssim(a.b(), b.b())) / 3.0;
}

MetricReport compare(const RgbImage& a, const RgbImage& b, SsimMode mode) {
  MetricReport r;
  r.mse = mse(a, b);
  r.psnr_db = r.mse == 0.0 ? std::numeric_limits<double>::infinity() : 10.0 * std::log10(1.0 / r.mse);
  r.ssim = ssim(a, b, mode);
  return r;
}

}  // namespace acce
