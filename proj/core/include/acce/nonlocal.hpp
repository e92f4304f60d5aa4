#pragma once

#include <span>
#include <vector>

#include "acce/image.hpp"

namespace acce {

enum class KernelKind { inverse_distance, gaussian };

/// Distance weight w(x,y) between two pixels, decreasing with distance.
struct KernelSpec {
  KernelKind kind = KernelKind::inverse_distance;
  double spatial_sigma = 3.0;  ///< pixels, gaussian kind only
  int window_radius = 5;       ///< half-width of the square sliding window

  void validate() const;
};

/// w for an offset (dx, dy); zero at (0, 0).
double kernel_weight(const KernelSpec& spec, int dx, int dy) noexcept;

/// Per-pixel nonlocal aggregates over the neighbours y of each pixel x:
///   s1(x)    = sum_y w(x,y) (I(x) - I(y))
///   s2(x)    = sum_y w(x,y) (I(x) - I(y))^2
///   sc[k](x) = sum_y c_k(y) w(x,y) (I(x) - I(y))
///   mass(x)  = sum_y w(x,y)
/// s1 and s2 are left empty when computed with Moments::skip.
struct NonlocalSums {
  Plane s1;
  Plane s2;
  std::vector<Plane> sc;
  Plane mass;
};

enum class Scope {
  window,  ///< neighbours within the square window of radius window_radius
  global,  ///< every other pixel of the image
};

enum class Moments { include, skip };

/// Brute-force evaluation. Global scope costs Theta(M^2) for M pixels and
/// serves as the reference the pyramid path is checked against.
NonlocalSums naive_sums(const Plane& intensity, std::span<const Plane> fields,
                        const KernelSpec& spec, Scope scope, Moments moments = Moments::include);
NonlocalSums naive_sums(const Plane& intensity, const Plane& field, const KernelSpec& spec,
                        Scope scope);

/// Gaussian pyramid of several fields subsampled together. levels[0] is the
/// full-resolution input; level j has a scale of 2^j input pixels per sample.
/// Subsampling stops once the smaller dimension is <= 2*window_radius + 1.
struct Pyramid {
  std::vector<std::vector<Plane>> levels;

  std::size_t depth() const noexcept { return levels.size(); }
};

Pyramid build_pyramid(std::span<const Plane> fields, int window_radius);

/// 2x reduction: gaussian_blur(sigma = 1) then the mean of each 2x2 cell,
/// output size ceil(n / 2). Level samples sit at cell centres.
Plane pyramid_down(const Plane& p);

/// Bilinear resampling of a coarse level onto the grid of the next finer one
/// (fine sample x sits at coarse coordinate x / 2 - 1/4), edges clamped.
Plane pyramid_up(const Plane& coarse, int width, int height);

/// How the coarse-level correction is weighted when a level is refined.
enum class CoarseBlend {
  /// Fine and coarse window terms enter with equal weight, so the refinement
  /// swaps the coarse estimate of the near field for the fine one.
  unit,
  /// Coarse term weighted by std(upsampled coarse) / std(fine), clamped to
  /// [0.2, 0.8].
  spread_ratio,
};

/// Window-sum weights for pyramid level `level`: entry (dy + r) * (2r + 1) + (dx + r)
/// is the total kernel weight of the 2^level x 2^level block of input pixels
/// that one level sample at offset (dx, dy) stands for.
std::vector<double> level_weights(const KernelSpec& spec, int level);

/// Exact sum_{y != x} w(x,y) over a width x height image for every x, from a
/// prefix-summed quadrant table of w (O(width * height) time and memory).
Plane kernel_mass(const KernelSpec& spec, int width, int height);

/// Coarse-to-fine approximation of sum_{y != x} w(x,y) f(y) for each field.
std::vector<Plane> pyramid_convolve(std::span<const Plane> fields, const KernelSpec& spec,
                                    CoarseBlend blend = CoarseBlend::unit);

/// Pyramid-accelerated counterpart of naive_sums(..., Scope::global). The
/// pyramid estimates are rescaled so that a constant field reproduces
/// kernel_mass exactly; `mass` is kernel_mass itself. When
/// the image needs only one pyramid level the result is naive_sums with
/// Scope::window, bit for bit.
NonlocalSums pyramid_sums(const Plane& intensity, std::span<const Plane> fields,
                          const KernelSpec& spec, Moments moments = Moments::include,
                          CoarseBlend blend = CoarseBlend::unit);
NonlocalSums pyramid_sums(const Plane& intensity, const Plane& field, const KernelSpec& spec);

}  // namespace acce
