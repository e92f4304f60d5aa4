#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "acce/image.hpp"

namespace acce::fixtures {

// Scene of soft blobs, hard-edged discs and bars, viewed through a
// blue-green water column (red attenuated, veiling light added).
RgbImage underwater_scene(int width, int height, std::uint32_t seed);

// All three channels squeezed into [lo, hi].
RgbImage compressed(const RgbImage& img, double lo, double hi);

// Additive Gaussian noise, clamped to [0,1].
RgbImage with_noise(const RgbImage& img, double sigma, std::uint32_t seed);

// Uniform random plane in [0,1].
Plane random_plane(int width, int height, std::uint32_t seed);

RgbImage constant_image(int width, int height, double r, double g, double b);

// Binary checkerboard with square cells of `cell` pixels.
RgbImage checkerboard(int width, int height, int cell);

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

// p-th percentile (0..100) over every sample of every channel.
double percentile(const RgbImage& img, double p);

bool unit_range(const RgbImage& img);
bool unit_range(const HsiImage& img);

}  // namespace acce::fixtures
