#include "acce/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "acce/decompose.hpp"

namespace acce {

void KernelSpec::validate() const {
  if (window_radius < 1) throw ContractError("window radius must be >= 1");
  if (kind == KernelKind::gaussian && !(spatial_sigma > 0.0)) {
    throw ContractError("gaussian kernel needs a positive spatial sigma");
  }
}

namespace {

double weight_at(const KernelSpec& spec, double dx, double dy) noexcept {
  const double d2 = dx * dx + dy * dy;
  if (d2 == 0.0) return 0.0;
  if (spec.kind == KernelKind::inverse_distance) return 1.0 / std::sqrt(d2);
  return std::exp(-d2 / (2.0 * spec.spatial_sigma * spec.spatial_sigma));
}

// Offset table covering every pairwise displacement of a w x h image.
std::vector<double> displacement_table(const KernelSpec& spec, int w, int h) {
  const int tw = 2 * w - 1;
  std::vector<double> table(static_cast<std::size_t>(tw) * (2 * h - 1));
  for (int dy = -(h - 1); dy <= h - 1; ++dy) {
    for (int dx = -(w - 1); dx <= w - 1; ++dx) {
      table[static_cast<std::size_t>(dy + h - 1) * tw + (dx + w - 1)] = kernel_weight(spec, dx, dy);
    }
  }
  return table;
}

// Sum of w over the q x q grid of offsets (x0 + i, y0 + j), 0 <= i, j < q.
// Sub-blocks far from the origin are integrated with a 32 x 32 midpoint rule.
double block_sum(const KernelSpec& spec, double x0, double y0, long q) {
  constexpr long kExactSide = 32;
  if (q <= kExactSide) {
    double acc = 0.0;
    for (long j = 0; j < q; ++j) {
      for (long i = 0; i < q; ++i) acc += weight_at(spec, x0 + double(i), y0 + double(j));
    }
    return acc;
  }
  const long sub = q / kExactSide;
  double acc = 0.0;
  for (long by = 0; by < kExactSide; ++by) {
    for (long bx = 0; bx < kExactSide; ++bx) {
      const double sx = x0 + double(bx * sub);
      const double sy = y0 + double(by * sub);
      const double cx = sx + 0.5 * double(sub - 1);
      const double cy = sy + 0.5 * double(sub - 1);
      if (std::hypot(cx, cy) > 3.0 * double(sub)) {
        acc += double(sub) * double(sub) * weight_at(spec, cx, cy);
      } else {
        acc += block_sum(spec, sx, sy, sub);
      }
    }
  }
  return acc;
}

std::vector<double> compute_level_weights(const KernelSpec& spec, int level) {
  const int r = spec.window_radius;
  const int side = 2 * r + 1;
  const long d = 1L << level;
  std::vector<double> table(static_cast<std::size_t>(side) * side);
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      // A level sample is the centre of a d x d block of input pixels; its
      // weight towards another sample is the kernel summed over that block.
      const double half = 0.5 * double(d - 1);
      const double value = block_sum(spec, double(dx * d) - half, double(dy * d) - half, d);
      table[static_cast<std::size_t>(dy + r) * side + (dx + r)] = value;
    }
  }
  return table;
}

struct WeightKey {
  KernelKind kind;
  double sigma;
  int radius;
  int level;
  auto operator<=>(const WeightKey&) const = default;
};

const std::vector<double>& cached_level_weights(const KernelSpec& spec, int level) {
  static std::mutex mutex;
  static std::map<WeightKey, std::vector<double>> cache;
  const WeightKey key{spec.kind, spec.kind == KernelKind::gaussian ? spec.spatial_sigma : 0.0,
                      spec.window_radius, level};
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, compute_level_weights(spec, level)).first;
  return it->second;
}

// out(x) = sum over the window of weights(dx,dy) * in(x + (dx,dy)); samples
// outside the plane do not contribute. Tables are point-symmetric, so the
// offsets +d and -d share one multiply wherever both neighbours exist.
Plane window_convolve(const Plane& in, const std::vector<double>& weights, int r) {
  const int w = in.width();
  const int h = in.height();
  const int side = 2 * r + 1;
  Plane out(w, h, 0.0);
  auto weight = [&](int dx, int dy) {
    return weights[static_cast<std::size_t>(dy + r) * side + (dx + r)];
  };
  auto one_sided = [&](int dx, int dy, int y, int x_lo, int x_hi, double wv) {
    double* dst = out.row(y).data();
    const double* src = in.row(y + dy).data() + dx;
    for (int x = x_lo; x < x_hi; ++x) dst[x] += wv * src[x];
  };
  if (weight(0, 0) != 0.0) {
    const double wv = weight(0, 0);
    for (int y = 0; y < h; ++y) one_sided(0, 0, y, 0, w, wv);
  }
  // Visit each pair {d, -d} once: dy > 0, or dy == 0 and dx > 0.
  for (int dy = 0; dy <= r; ++dy) {
    for (int dx = (dy == 0 ? 1 : -r); dx <= r; ++dx) {
      const double wv = weight(dx, dy);
      if (wv == 0.0) continue;
      for (int y = 0; y < h; ++y) {
        const bool up_ok = y + dy < h;    // neighbour at +d
        const bool down_ok = y - dy >= 0;  // neighbour at -d
        // x range where x + dx and x - dx are both inside.
        const int both_lo = std::max({0, -dx, dx});
        const int both_hi = std::min({w, w - dx, w + dx});
        if (up_ok && down_ok && both_lo < both_hi) {
          double* dst = out.row(y).data();
          const double* plus = in.row(y + dy).data() + dx;
          const double* minus = in.row(y - dy).data() - dx;
          for (int x = both_lo; x < both_hi; ++x) dst[x] += wv * (plus[x] + minus[x]);
          // Leftover columns where only one side exists.
          if (up_ok) {
            one_sided(dx, dy, y, std::max(0, -dx), std::min(both_lo, w - dx), wv);
            one_sided(dx, dy, y, std::max(both_hi, std::max(0, -dx)), std::min(w, w - dx), wv);
          }
          if (down_ok) {
            one_sided(-dx, -dy, y, std::max(0, dx), std::min(both_lo, w + dx), wv);
            one_sided(-dx, -dy, y, std::max(both_hi, std::max(0, dx)), std::min(w, w + dx), wv);
          }
        } else {
          if (up_ok) one_sided(dx, dy, y, std::max(0, -dx), std::min(w, w - dx), wv);
          if (down_ok) one_sided(-dx, -dy, y, std::max(0, dx), std::min(w, w + dx), wv);
        }
      }
    }
  }
  return out;
}

double stddev(const Plane& p) { return std::sqrt(variance(p)); }

std::vector<Plane> pyramid_convolve_impl(std::span<const Plane> fields, const KernelSpec& spec,
                                         CoarseBlend blend);

struct ShapeKey {
  KernelKind kind;
  double sigma;
  int radius;
  CoarseBlend blend;
  int width;
  int height;
  auto operator<=>(const ShapeKey&) const = default;
};

struct ShapeTables {
  Plane mass;   // exact sum of w
  Plane ratio;  // mass / pyramid estimate of a constant field
};

// Depends only on the image shape and kernel, so it is computed once per shape.
std::shared_ptr<const ShapeTables> shape_tables(const KernelSpec& spec, CoarseBlend blend, int w,
                                             int h) {
  static std::mutex mutex;
  static std::map<ShapeKey, std::shared_ptr<const ShapeTables>> cache;
  constexpr std::size_t kMaxEntries = 32;
  const ShapeKey key{spec.kind, spec.kind == KernelKind::gaussian ? spec.spatial_sigma : 0.0,
                     spec.window_radius, blend, w, h};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const Plane ones(w, h, 1.0);
  Plane ratio = pyramid_convolve_impl(std::span<const Plane>(&ones, 1), spec, blend)[0];
  Plane exact = kernel_mass(spec, w, h);
  auto rv = ratio.samples();
  const auto ev = exact.samples();
  for (std::size_t k = 0; k < rv.size(); ++k) {
    rv[k] = rv[k] > 1e-12 * ev[k] && rv[k] > 0.0 ? ev[k] / rv[k] : 1.0;
  }
  auto shared = std::make_shared<const ShapeTables>(ShapeTables{std::move(exact), std::move(ratio)});
  std::lock_guard lock(mutex);
  if (cache.size() >= kMaxEntries) cache.clear();
  cache.emplace(key, shared);
  return shared;
}

}  // namespace

double kernel_weight(const KernelSpec& spec, int dx, int dy) noexcept {
  return weight_at(spec, double(dx), double(dy));
}

NonlocalSums naive_sums(const Plane& intensity, std::span<const Plane> fields,
                        const KernelSpec& spec, Scope scope, Moments moments) {
  spec.validate();
  for (const Plane& c : fields) {
    if (!c.same_shape(intensity)) throw ContractError("naive_sums: field shape mismatch");
  }
  const int w = intensity.width();
  const int h = intensity.height();
  const int r = scope == Scope::window ? spec.window_radius : std::max(w, h);
  const int tw = 2 * w - 1;
  const auto table = displacement_table(spec, w, h);
  const bool with_moments = moments == Moments::include;
  const std::size_t nf = fields.size();

  NonlocalSums out;
  out.mass = Plane(w, h);
  if (with_moments) {
    out.s1 = Plane(w, h);
    out.s2 = Plane(w, h);
  }
  out.sc.assign(nf, Plane(w, h));
  std::vector<double> acc(nf);

  for (int y = 0; y < h; ++y) {
    const int qy_lo = std::max(0, y - r);
    const int qy_hi = std::min(h - 1, y + r);
    for (int x = 0; x < w; ++x) {
      const int qx_lo = std::max(0, x - r);
      const int qx_hi = std::min(w - 1, x + r);
      const double ix = intensity(x, y);
      double s1 = 0.0, s2 = 0.0, mass = 0.0;
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int qy = qy_lo; qy <= qy_hi; ++qy) {
        const double* wrow = table.data() + static_cast<std::size_t>(qy - y + h - 1) * tw + (w - 1 - x);
        const double* irow = intensity.row(qy).data();
        for (int qx = qx_lo; qx <= qx_hi; ++qx) {
          const double wv = wrow[qx];
          const double diff = ix - irow[qx];
          const double wd = wv * diff;
          mass += wv;
          s1 += wd;
          s2 += wd * diff;
          for (std::size_t k = 0; k < nf; ++k) acc[k] += fields[k](qx, qy) * wd;
        }
      }
      out.mass(x, y) = mass;
      if (with_moments) {
        out.s1(x, y) = s1;
        out.s2(x, y) = s2;
      }
      for (std::size_t k = 0; k < nf; ++k) out.sc[k](x, y) = acc[k];
    }
  }
  return out;
}

NonlocalSums naive_sums(const Plane& intensity, const Plane& field, const KernelSpec& spec,
                        Scope scope) {
  return naive_sums(intensity, std::span<const Plane>(&field, 1), spec, scope);
}

Plane pyramid_down(const Plane& p) {
  const Plane blurred = gaussian_blur(p, 1.0);
  const int w = (p.width() + 1) / 2;
  const int h = (p.height() + 1) / 2;
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out(x, y) = 0.25 * (blurred.clamped(2 * x, 2 * y) + blurred.clamped(2 * x + 1, 2 * y) +
                          blurred.clamped(2 * x, 2 * y + 1) + blurred.clamped(2 * x + 1, 2 * y + 1));
    }
  }
  return out;
}

Plane pyramid_up(const Plane& coarse, int width, int height) {
  // Fine pixel x lies at coarse coordinate x / 2 - 1/4.
  auto taps = [](int x, int n, int& lo, int& hi, double& frac) {
    const int m = x / 2;
    if (x % 2 == 0) {
      lo = m - 1;
      hi = m;
      frac = 0.75;
    } else {
      lo = m;
      hi = m + 1;
      frac = 0.25;
    }
    lo = std::clamp(lo, 0, n - 1);
    hi = std::clamp(hi, 0, n - 1);
  };
  Plane out(width, height);
  for (int y = 0; y < height; ++y) {
    int y0, y1;
    double fy;
    taps(y, coarse.height(), y0, y1, fy);
    for (int x = 0; x < width; ++x) {
      int x0, x1;
      double fx;
      taps(x, coarse.width(), x0, x1, fx);
      const double top = (1.0 - fx) * coarse(x0, y0) + fx * coarse(x1, y0);
      const double bottom = (1.0 - fx) * coarse(x0, y1) + fx * coarse(x1, y1);
      out(x, y) = (1.0 - fy) * top + fy * bottom;
    }
  }
  return out;
}

Pyramid build_pyramid(std::span<const Plane> fields, int window_radius) {
  if (fields.empty()) throw ContractError("build_pyramid: no fields");
  for (const Plane& f : fields) {
    if (!f.same_shape(fields[0])) throw ContractError("build_pyramid: field shape mismatch");
  }
  const int stop = 2 * window_radius + 1;
  Pyramid pyr;
  pyr.levels.emplace_back(fields.begin(), fields.end());
  while (std::min(pyr.levels.back()[0].width(), pyr.levels.back()[0].height()) > stop) {
    std::vector<Plane> next;
    next.reserve(fields.size());
    for (const Plane& p : pyr.levels.back()) next.push_back(pyramid_down(p));
    pyr.levels.push_back(std::move(next));
  }
  return pyr;
}

std::vector<double> level_weights(const KernelSpec& spec, int level) {
  spec.validate();
  return cached_level_weights(spec, level);
}

Plane kernel_mass(const KernelSpec& spec, int width, int height) {
  spec.validate();
  // cum(i, j) = sum of w(a, b) over 0 <= a <= i, 0 <= b <= j. Since w is even
  // in both offsets, a range [-p, q] splits into [0, p] + [0, q] - {0}.
  const int w = width;
  const int h = height;
  std::vector<double> cum(static_cast<std::size_t>(w) * h);
  for (int j = 0; j < h; ++j) {
    double row = 0.0;
    for (int i = 0; i < w; ++i) {
      row += kernel_weight(spec, i, j);
      cum[static_cast<std::size_t>(j) * w + i] = row + (j > 0 ? cum[static_cast<std::size_t>(j - 1) * w + i] : 0.0);
    }
  }
  auto at = [&](int i, int j) { return cum[static_cast<std::size_t>(j) * w + i]; };
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    const int ys[2] = {y, h - 1 - y};
    for (int x = 0; x < w; ++x) {
      const int xs[2] = {x, w - 1 - x};
      double total = 0.0;
      for (int i : xs) {
        for (int j : ys) total += at(i, j);
        total -= at(i, 0);
      }
      for (int j : ys) total -= at(0, j);
      out(x, y) = total;  // w(0, 0) == 0, nothing to add back
    }
  }
  return out;
}

std::vector<Plane> pyramid_convolve(std::span<const Plane> fields, const KernelSpec& spec,
                                    CoarseBlend blend) {
  spec.validate();
  return pyramid_convolve_impl(fields, spec, blend);
}

namespace {

std::vector<Plane> pyramid_convolve_impl(std::span<const Plane> fields, const KernelSpec& spec,
                                         CoarseBlend blend) {
  const int r = spec.window_radius;
  const Pyramid pyr = build_pyramid(fields, r);
  const int depth = static_cast<int>(pyr.depth());

  std::vector<Plane> result;
  result.reserve(fields.size());
  for (std::size_t f = 0; f < fields.size(); ++f) {
    // The coarsest level is small enough that the window sum stands in for
    // the whole-image sum.
    Plane estimate = window_convolve(pyr.levels[depth - 1][f],
                                     cached_level_weights(spec, depth - 1), r);
    for (int j = depth - 2; j >= 0; --j) {
      const Plane& fine = pyr.levels[j][f];
      const auto& weights = cached_level_weights(spec, j);
      const Plane upsampled = pyramid_up(pyr.levels[j + 1][f], fine.width(), fine.height());
      Plane refined = pyramid_up(estimate, fine.width(), fine.height());

      double a = 1.0;
      double b = 1.0;
      if (blend == CoarseBlend::spread_ratio) {
        const double sa = stddev(fine);
        const double ratio = sa > 1e-12 ? stddev(upsampled) / sa : 1.0;
        b = std::clamp(ratio, 0.2, 0.8);
      }
      // a * window(fine) - b * window(upsampled), folded into one window pass.
      Plane detail = fine;
      {
        auto dv = detail.samples();
        const auto uv = upsampled.samples();
        for (std::size_t k = 0; k < dv.size(); ++k) dv[k] = a * dv[k] - b * uv[k];
      }
      const Plane near = window_convolve(detail, weights, r);
      auto out = refined.samples();
      const auto nv = near.samples();
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += nv[k];
      estimate = std::move(refined);
    }
    result.push_back(std::move(estimate));
  }
  return result;
}

}  // namespace

NonlocalSums pyramid_sums(const Plane& intensity, std::span<const Plane> fields,
                          const KernelSpec& spec, Moments moments, CoarseBlend blend) {
  spec.validate();
  for (const Plane& c : fields) {
    if (!c.same_shape(intensity)) throw ContractError("pyramid_sums: field shape mismatch");
  }
  const int stop = 2 * spec.window_radius + 1;
  if (std::min(intensity.width(), intensity.height()) <= stop) {
    return naive_sums(intensity, fields, spec, Scope::window, moments);
  }

  // Every sum is linear in the kernel, so each one splits into
  // whole-image weighted sums of a product field:
  //   s1 = I*C[1] - C[I]
  //   s2 = I^2*C[1] - 2*I*C[I] + C[I^2]
  //   sc = I*C[c] - C[c*I]
  // and only the C[.] terms need the pyramid.
  const int w = intensity.width();
  const int h = intensity.height();
  const bool with_moments = moments == Moments::include;
  std::vector<Plane> inputs;
  if (with_moments) {
    inputs.push_back(intensity);
    Plane sq = intensity;
    for (double& v : sq.samples()) v *= v;
    inputs.push_back(std::move(sq));
  }
  for (const Plane& c : fields) {
    inputs.push_back(c);
    Plane prod = c;
    auto ps = prod.samples();
    const auto is = intensity.samples();
    for (std::size_t k = 0; k < ps.size(); ++k) ps[k] *= is[k];
    inputs.push_back(std::move(prod));
  }
  std::vector<Plane> conv = pyramid_convolve(inputs, spec, blend);

  // Normalized convolution: rescale every estimate by exact / estimated
  // mass so smooth fields inherit the exact border falloff.
  const auto tables = shape_tables(spec, blend, w, h);
  NonlocalSums out;
  out.mass = tables->mass;
  for (Plane& c : conv) {
    auto cs = c.samples();
    const auto rv = tables->ratio.samples();
    for (std::size_t k = 0; k < cs.size(); ++k) cs[k] *= rv[k];
  }
  const auto iv = intensity.samples();
  const auto c1 = out.mass.samples();
  std::size_t next = 0;
  if (with_moments) {
    out.s1 = Plane(w, h);
    out.s2 = Plane(w, h);
    const auto ci = conv[0].samples();
    const auto ci2 = conv[1].samples();
    auto s1 = out.s1.samples();
    auto s2 = out.s2.samples();
    for (std::size_t k = 0; k < iv.size(); ++k) {
      s1[k] = iv[k] * c1[k] - ci[k];
      s2[k] = std::max(0.0, iv[k] * iv[k] * c1[k] - 2.0 * iv[k] * ci[k] + ci2[k]);
    }
    next = 2;
  }
  for (std::size_t f = 0; f < fields.size(); ++f, next += 2) {
    Plane sc(w, h);
    auto sv = sc.samples();
    const auto cc = conv[next].samples();
    const auto cci = conv[next + 1].samples();
    for (std::size_t k = 0; k < iv.size(); ++k) sv[k] = iv[k] * cc[k] - cci[k];
    out.sc.push_back(std::move(sc));
  }
  return out;
}

NonlocalSums pyramid_sums(const Plane& intensity, const Plane& field, const KernelSpec& spec) {
  return pyramid_sums(intensity, std::span<const Plane>(&field, 1), spec);
}

}  // namespace acce
