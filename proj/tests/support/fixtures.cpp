#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <string>

namespace acce::fixtures {

RgbImage underwater_scene(int width, int height, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RgbImage scene(width, height);

  const double gx = u(rng) - 0.5, gy = u(rng) - 0.5;
  const double base[3] = {0.3 + 0.4 * u(rng), 0.3 + 0.4 * u(rng), 0.3 + 0.4 * u(rng)};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double t = gx * x / width + gy * y / height;
      for (int c = 0; c < 3; ++c) scene[c](x, y) = base[c] + 0.3 * t;
    }
  }

  const int blobs = 6;
  for (int k = 0; k < blobs; ++k) {
    const double cx = u(rng) * width, cy = u(rng) * height;
    const double rad = (0.08 + 0.2 * u(rng)) * std::min(width, height);
    const double col[3] = {u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5};
    const bool hard = k % 2 == 1;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double d2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (rad * rad);
        const double wgt = hard ? (d2 < 1.0 ? 1.0 : 0.0) : std::exp(-d2);
        for (int c = 0; c < 3; ++c) scene[c](x, y) += 0.6 * col[c] * wgt;
      }
    }
  }

  // a few straight bars for strong edges
  for (int k = 0; k < 3; ++k) {
    const int x0 = static_cast<int>(u(rng) * width);
    const int bw = 1 + static_cast<int>(u(rng) * std::max(1, width / 10));
    const double v = u(rng);
    for (int y = 0; y < height; ++y) {
      for (int x = x0; x < std::min(width, x0 + bw); ++x) {
        for (int c = 0; c < 3; ++c) scene[c](x, y) = v;
      }
    }
  }

  const double transmission = 0.55;
  const double attenuation[3] = {0.35, 0.85, 0.95};
  const double veil[3] = {0.05, 0.45, 0.55};
  RgbImage out(width, height);
  for (int c = 0; c < 3; ++c) {
    const auto in = scene[c].samples();
    auto o = out[c].samples();
    for (std::size_t k = 0; k < o.size(); ++k) {
      const double s = std::clamp(in[k], 0.0, 1.0);
      o[k] = transmission * attenuation[c] * s + (1.0 - transmission) * veil[c];
    }
  }
  return out;
}

RgbImage compressed(const RgbImage& img, double lo, double hi) {
  RgbImage out = img;
  for (auto& ch : out.channels) {
    for (double& v : ch.samples()) v = lo + (hi - lo) * v;
  }
  return out;
}

RgbImage with_noise(const RgbImage& img, double sigma, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  RgbImage out = img;
  for (auto& ch : out.channels) {
    for (double& v : ch.samples()) v = std::clamp(v + n(rng), 0.0, 1.0);
  }
  return out;
}

Plane random_plane(int width, int height, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Plane p(width, height);
  for (double& v : p.samples()) v = u(rng);
  return p;
}

RgbImage constant_image(int width, int height, double r, double g, double b) {
  return RgbImage(Plane(width, height, r), Plane(width, height, g), Plane(width, height, b));
}

RgbImage checkerboard(int width, int height, int cell) {
  RgbImage out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double v = ((x / cell + y / cell) % 2 == 0) ? 1.0 : 0.0;
      for (int c = 0; c < 3; ++c) out[c](x, y) = v;
    }
  }
  return out;
}

std::filesystem::path scratch_dir(const std::string& name) {
  // unique per process so tests running in parallel never share a directory
  static const std::string tag = std::to_string(std::random_device{}());
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("acce_test_" + name + "_" + tag + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

double percentile(const RgbImage& img, double p) {
  std::vector<double> all;
  for (const auto& ch : img.channels) all.insert(all.end(), ch.samples().begin(), ch.samples().end());
  std::sort(all.begin(), all.end());
  const double pos = p / 100.0 * static_cast<double>(all.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, all.size() - 1);
  return all[lo] + (pos - static_cast<double>(lo)) * (all[hi] - all[lo]);
}

bool unit_range(const RgbImage& img) {
  return std::all_of(img.channels.begin(), img.channels.end(),
                     [](const Plane& p) { return is_unit_range(p); });
}

bool unit_range(const HsiImage& img) {
  return std::all_of(img.channels.begin(), img.channels.end(),
                     [](const Plane& p) { return is_unit_range(p); });
}

}  // namespace acce::fixtures
