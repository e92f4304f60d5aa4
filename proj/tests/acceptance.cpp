// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "acce/color.hpp"
#include "acce/io.hpp"
#include "acce/metrics.hpp"
#include "acce/pipeline.hpp"
#include "fixtures.hpp"

using namespace acce;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class F>
double best_time(int reps, F&& f) {
  double best = INFINITY;
  for (int k = 0; k < reps; ++k) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

std::vector<RgbImage> scene_fixtures() {
  std::vector<RgbImage> out;
  for (std::uint32_t seed = 1; seed <= 5; ++seed) out.push_back(fixtures::underwater_scene(64, 64, seed));
  return out;
}

GuideImage guide_of(const RgbImage& img, const PipelineConfig& cfg) {
  return build_guide(bilateral_filter(img, cfg.filters), cfg.lambda, cfg.spread);
}

double rel_rms(const Plane& approx, const Plane& exact) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k) {
    const double d = approx.samples()[k] - exact.samples()[k];
    num += d * d;
    den += exact.samples()[k] * exact.samples()[k];
  }
  return std::sqrt(num / den);
}

bool safe(const Plane& p) { return all_finite(p) && is_unit_range(p); }

template <class Image>
bool safe(const Image& img) {
  return std::all_of(img.channels.begin(), img.channels.end(), [](const Plane& p) { return safe(p); });
}

// 1
Outcome hue_contraction() {
  const auto t0 = Clock::now();
  const PipelineConfig cfg;
  const GuideImage guide = guide_of(fixtures::underwater_scene(64, 64, 11), cfg);
  HsiImage init = guide;
  init.h() = fixtures::random_plane(64, 64, 12);
  for (int k = 0; k < 16; ++k) init.h().samples()[k] = guide.h().samples()[k] < 0.5 ? 1.0 : 0.0;

  double gap0 = 0.0;
  for (std::size_t k = 0; k < init.h().size(); ++k) {
    gap0 = std::max(gap0, std::abs(init.h().samples()[k] - guide.h().samples()[k]));
  }
  SolverParams p = cfg.solver;
  SolverState st = make_state(guide, init, p);
  double worst_excess = -INFINITY;
  double gap = 0.0;
  for (int k = 1; k <= 20; ++k) {
    st = step(st, p);
    // per pixel: |I_h^k - Cr_h| must equal 0.3^k |I_h^0 - Cr_h| to 1e-12
    gap = 0.0;
    for (std::size_t n = 0; n < init.h().size(); ++n) {
      const double cr = guide.h().samples()[n];
      const double now = std::abs(st.current.h().samples()[n] - cr);
      const double expect = std::pow(1.0 - p.dt, k) * std::abs(init.h().samples()[n] - cr);
      worst_excess = std::max(worst_excess, std::abs(now - expect));
      gap = std::max(gap, now);
    }
  }
  const double bound = std::pow(0.3, 20) * gap0;
  const double secs = seconds_since(t0);
  const bool pass = gap <= bound + 1e-12 && worst_excess <= 1e-12 && secs < 1.0;
  return {pass, fmt("max gap after 20 steps %.3e, bound %.3e (initial gap %.3f), "
                    "worst per-pixel deviation from geometric decay %.1e, %.2f s",
                    gap, bound, gap0, worst_excess, secs)};
}

// 2
Outcome gradient_oracle() {
  const auto t0 = Clock::now();
  SolverParams p;
  p.exact_mode = true;
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> kappa_dist(0.05, 0.5);
  double worst = 0.0;
  const double eps = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const Plane cur = fixtures::random_plane(4, 4, 1000 + trial);
    const Plane tgt = fixtures::random_plane(4, 4, 2000 + trial);
    Plane gate(4, 4);
    for (double& v : gate.samples()) v = static_cast<double>(rng() % 2);
    const double kappa = kappa_dist(rng);
    const Plane d = descent_direction(cur, tgt, gate, kappa, p);
    for (std::size_t k = 0; k < cur.size(); ++k) {
      Plane up = cur, dn = cur;
      up.samples()[k] += eps;
      dn.samples()[k] -= eps;
      const double grad = (channel_energy(up, tgt, gate, kappa, p) -
                           channel_energy(dn, tgt, gate, kappa, p)) / (2.0 * eps);
      const double rel = std::abs(d.samples()[k] + grad) / std::max(std::abs(grad), 1e-12);
      worst = std::max(worst, rel);
    }
  }
  return {worst <= 1e-4, fmt("worst component relative error %.2e over 20 instances (limit 1e-4), %.2f s",
                             worst, seconds_since(t0))};
}

// 3
Outcome nonlocal_oracle() {
  const auto t0 = Clock::now();
  const KernelSpec spec;
  double worst1 = 0.0, worst2 = 0.0;
  for (std::uint32_t k = 0; k < 10; ++k) {
    const Plane i = fixtures::random_plane(32, 32, 300 + k);
    const Plane c = fixtures::random_plane(32, 32, 400 + k);
    const NonlocalSums fast = pyramid_sums(i, c, spec);
    const NonlocalSums exact = naive_sums(i, c, spec, Scope::global);
    worst1 = std::max(worst1, rel_rms(fast.s1, exact.s1));
    worst2 = std::max(worst2, rel_rms(fast.s2, exact.s2));
  }
  // images that fit inside one window
  bool small_exact = true;
  for (auto [w, h] : {std::pair{6, 6}, std::pair{5, 3}, std::pair{1, 6}}) {
    const Plane i = fixtures::random_plane(w, h, 500 + w);
    const Plane c = fixtures::random_plane(w, h, 600 + h);
    const NonlocalSums fast = pyramid_sums(i, c, spec);
    const NonlocalSums win = naive_sums(i, c, spec, Scope::window);
    const NonlocalSums glob = naive_sums(i, c, spec, Scope::global);
    small_exact = small_exact && fast.s1 == win.s1 && fast.s2 == win.s2 && fast.sc[0] == win.sc[0];
    for (std::size_t n = 0; n < i.size(); ++n) {
      small_exact = small_exact && std::abs(fast.s1.samples()[n] - glob.s1.samples()[n]) <= 1e-12 &&
                    std::abs(fast.s2.samples()[n] - glob.s2.samples()[n]) <= 1e-12;
    }
  }
  const bool pass = worst1 <= 0.10 && worst2 <= 0.10 && small_exact;
  return {pass, fmt("32x32 relative RMS s1 %.4f, s2 %.4f (limit 0.10); single-window images exact: %s; %.2f s",
                    worst1, worst2, small_exact ? "yes" : "no", seconds_since(t0))};
}

// 4
Outcome acceleration() {
  const auto t0 = Clock::now();
  const KernelSpec spec;
  std::vector<double> ratios;
  std::string detail;
  for (int n : {32, 64, 128}) {
    const Plane i = fixtures::random_plane(n, n, 700 + n);
    const Plane c = fixtures::random_plane(n, n, 800 + n);
    pyramid_sums(i, c, spec);  // warm the per-shape tables
    const double fast = best_time(15, [&] { pyramid_sums(i, c, spec); });
    const double slow = best_time(n >= 128 ? 2 : 5, [&] { naive_sums(i, c, spec, Scope::global); });
    ratios.push_back(slow / fast);
    detail += fmt("%dx%d naive %.2f ms / pyramid %.3f ms = %.1fx; ", n, n, 1e3 * slow, 1e3 * fast,
                  slow / fast);
  }
  const double secs = seconds_since(t0);
  const bool pass = ratios[1] >= 10.0 && ratios[0] < ratios[1] && ratios[1] < ratios[2] && secs < 120.0;
  return {pass, detail + fmt("%.1f s", secs)};
}

// 5
Outcome energy_descent() {
  const auto t0 = Clock::now();
  const PipelineConfig cfg;
  bool pass = true;
  std::string detail;
  int seed = 1;
  for (const RgbImage& img : scene_fixtures()) {
    const EnhanceResult r = enhance_detailed(img, cfg);
    const auto& e = r.energy_history;
    int down = 0;
    for (std::size_t k = 1; k < e.size(); ++k) down += e[k] <= e[k - 1] ? 1 : 0;
    const double frac = e.size() > 1 ? double(down) / double(e.size() - 1) : 1.0;
    const bool fired = r.stop_reason == StopReason::converged && r.iterations <= 200;
    pass = pass && frac >= 0.95 && fired;
    detail += fmt("#%d %d it %s %.0f%% non-increasing; ", seed++, r.iterations,
                  to_string(r.stop_reason), 100.0 * frac);
  }
  return {pass, detail + fmt("%.2f s", seconds_since(t0))};
}

// 6
Outcome range_safety() {
  const auto t0 = Clock::now();
  std::vector<RgbImage> suite = scene_fixtures();
  suite.push_back(fixtures::compressed(fixtures::underwater_scene(64, 64, 6), 0.4, 0.6));
  suite.push_back(fixtures::with_noise(fixtures::underwater_scene(48, 40, 7), 0.2, 8));
  suite.push_back(fixtures::constant_image(32, 32, 0.5, 0.5, 0.5));
  suite.push_back(fixtures::constant_image(32, 32, 0.0, 0.0, 0.0));
  suite.push_back(fixtures::constant_image(32, 32, 1.0, 1.0, 1.0));
  suite.push_back(fixtures::constant_image(1, 1, 0.3, 0.6, 0.9));
  suite.push_back(fixtures::checkerboard(33, 17, 1));

  std::vector<PipelineConfig> configs(3);
  configs[1].solver.alpha = 3.0;
  configs[1].solver.beta = 3.0;
  configs[1].solver.dt = 1.0;
  configs[2].init = InitMode::lowfreq;
  configs[2].solver.kernel.kind = KernelKind::gaussian;

  long steps = 0;
  int bad = 0;
  for (const PipelineConfig& cfg : configs) {
    for (const RgbImage& img : suite) {
      const GuideImage guide = guide_of(img, cfg);
      const HsiImage init =
          cfg.init == InitMode::guide ? guide : rgb_to_hsi(bilateral_filter(img, cfg.filters));
      SolverParams p = cfg.solver;
      p.max_iters = 30;
      SolverState st = make_state(guide, init, p);
      for (int k = 0; k < p.max_iters; ++k) {
        st = step(st, p);
        ++steps;
        if (!safe(st.current) || !std::isfinite(st.energy_history.back())) ++bad;
      }
      const RgbImage out = enhance(img, cfg);
      if (!safe(out) || out.width() != img.width() || out.height() != img.height()) ++bad;
    }
  }
  return {bad == 0, fmt("%ld solver steps and %zu pipeline runs checked, %d violations, %.2f s", steps,
                        suite.size() * configs.size(), bad, seconds_since(t0))};
}

// 7
Outcome denoising_benefit() {
  const auto t0 = Clock::now();
  PipelineConfig on, off;
  off.denoise_enabled = false;
  int wins = 0;
  std::string detail;
  for (std::uint32_t seed = 1; seed <= 5; ++seed) {
    const RgbImage clean = fixtures::underwater_scene(64, 64, seed);
    const RgbImage noisy = fixtures::with_noise(clean, 0.02, 900 + seed);
    const RgbImage a = enhance(noisy, on), b = enhance(noisy, off);
    const double pa = psnr(noisy, a), pb = psnr(noisy, b);
    const double sa = ssim(noisy, a), sb = ssim(noisy, b);
    const bool win = pa > pb && sa > sb;
    wins += win ? 1 : 0;
    detail += fmt("seed %u dPSNR %+.3f dB dSSIM %+.4f; ", seed, pa - pb, sa - sb);
  }
  return {wins >= 4, fmt("%d of 5 seeds improve both (need 4): ", wins) + detail +
                         fmt("%.2f s", seconds_since(t0))};
}

// 8
Outcome alpha_monotonicity() {
  const auto t0 = Clock::now();
  const double alphas[] = {0.05, 0.15, 0.25, 0.4};
  int ok = 0;
  std::string detail;
  int idx = 1;
  for (const RgbImage& img : scene_fixtures()) {
    double prev = -INFINITY;
    bool mono = true;
    detail += fmt("#%d", idx++);
    for (double a : alphas) {
      PipelineConfig cfg;
      cfg.solver.alpha = a;
      const double s = mean(rgb_to_hsi(enhance(img, cfg)).s());
      mono = mono && s >= prev;
      prev = s;
      detail += fmt(" %.4f", s);
    }
    detail += mono ? " up; " : " not monotone; ";
    ok += mono ? 1 : 0;
  }
  return {ok >= 4, fmt("%d of 5 fixtures non-decreasing (need 4): ", ok) + detail +
                       fmt("%.2f s", seconds_since(t0))};
}

// 9
Outcome conversions_and_metrics() {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const RgbPixel in{u(rng), u(rng), u(rng)};
    const RgbPixel out = hsi_to_rgb(rgb_to_hsi(in));
    worst = std::max({worst, std::abs(in.r - out.r), std::abs(in.g - out.g), std::abs(in.b - out.b)});
  }
  const RgbImage x = fixtures::underwater_scene(40, 40, 21);
  const double self = ssim(x, x);
  const RgbImage a = fixtures::constant_image(16, 16, 0.3, 0.4, 0.5);
  const RgbImage b = fixtures::constant_image(16, 16, 0.4, 0.5, 0.6);
  const double db = psnr(a, b);
  const bool pass = worst <= 1e-6 && std::abs(self - 1.0) <= 1e-9 && std::abs(db - 20.0) <= 0.01;
  return {pass, fmt("round trip max error %.2e (limit 1e-6); ssim(x,x) - 1 = %.1e; psnr uniform 0.1 = %.4f dB",
                    worst, self - 1.0, db)};
}

// 10
Outcome determinism() {
#ifdef ACCE_CLI_PATH
  const fs::path dir = fixtures::scratch_dir("determinism");
  save_image(fixtures::underwater_scene(72, 56, 31), dir / "in.png");
  const std::string cli = ACCE_CLI_PATH;
  auto run = [&](const std::string& out) {
    const std::string cmd = "\"" + cli + "\" enhance \"" + (dir / "in.png").string() + "\" -o \"" +
                            (dir / out).string() + "\" --alpha 0.3 --window-radius 4 --trace";
    return std::system(cmd.c_str());
  };
  const int rc1 = run("a.png"), rc2 = run("b.png");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string a = slurp(dir / "a.png"), b = slurp(dir / "b.png");
  const bool same = !a.empty() && a == b &&
                    slurp(dir / "a.png.trace.csv") == slurp(dir / "b.png.trace.csv");
  return {rc1 == 0 && rc2 == 0 && same,
          fmt("exit codes %d/%d, outputs %zu bytes, byte-identical: %s", rc1, rc2, a.size(),
              same ? "yes" : "no")};
#else
  return {false, "acce executable not built (ACCE_BUILD_TOOLS=OFF)"};
#endif
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 hue contraction", hue_contraction},
      {"2 gradient oracle", gradient_oracle},
      {"3 nonlocal oracle", nonlocal_oracle},
      {"4 acceleration", acceleration},
      {"5 energy descent", energy_descent},
      {"6 range safety", range_safety},
      {"7 denoising benefit", denoising_benefit},
      {"8 alpha monotonicity", alpha_monotonicity},
      {"9 conversions and metrics", conversions_and_metrics},
      {"10 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
