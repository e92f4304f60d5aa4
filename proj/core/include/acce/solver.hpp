#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "acce/image.hpp"
#include "acce/nonlocal.hpp"

namespace acce {

struct SolverParams {
  double alpha = 0.25;  ///< saturation contrast weight
  double beta = 0.3;    ///< intensity contrast weight
  double sigma = 0.03;  ///< width of the mid-tone bell G
  double dt = 0.7;      ///< explicit time step
  double tau = 0.05;    ///< relative energy change that stops the iteration
  int max_iters = 200;
  KernelSpec kernel{};
  /// Whole-image brute-force sums instead of the pyramid (small images only).
  bool exact_mode = false;
  /// Divide w by the largest per-pixel kernel mass so the nonlocal terms are
  /// on the same scale as the data term regardless of image size.
  bool normalize_weights = true;

  void validate() const;
};

namespace detail {
struct AnalysisCache;
}

struct SolverState {
  HsiImage current;
  GuideImage guide;
  int iteration = 0;
  std::vector<double> energy_history;

  // Nonlocal sums of `current`, reused by the next step. Checked against the
  // planes it was computed from, so editing `current` directly is safe.
  std::shared_ptr<const detail::AnalysisCache> cache;
};

/// G(v) = exp(-(v - 0.5)^2 / (2 sigma)). Note the denominator is 2*sigma,
/// not 2*sigma^2.
Plane gaussian_weight(const Plane& ic, double sigma);

/// 1 where (Ic - 0.5) * s1 > 0, else 0.
Plane heaviside_field(const Plane& ic, const Plane& s1);

/// Gradient contribution of the G*H gated regulariser group:
///   Do(x) = sc(x) + G(x)H(x) s1(x) - (Ic(x) - 0.5) / (2 sigma) * G(x)H(x) s2(x)
/// where `sums.sc.front()` must have been computed with c = G*H.
Plane do_operator(const Plane& ic, const Plane& g, const Plane& h, const NonlocalSums& sums,
                  double sigma);

/// Gradient contribution of the complementary group:
///   Di(x) = (2 - H(x)) s1(x) - sc(x)
/// where `sums.sc.front()` must have been computed with c = H.
Plane di_operator(const Plane& h, const NonlocalSums& sums);

/// Nonlocal sums as the solver sees them: pyramid or exact global sums,
/// divided by the weight normalization when enabled.
NonlocalSums solver_sums(const Plane& channel, std::span<const Plane> fields,
                         const SolverParams& params, Moments moments = Moments::include);

/// One saturation/intensity channel of the energy with the gate H given:
///   1/2 sum (Cr - I)^2 - kappa/2 sum_x [G(I(x)) H(x) + 1 - H(x)] sum_y w (I(x) - I(y))^2
double channel_energy(const Plane& current, const Plane& target, const Plane& gate, double kappa,
                      const SolverParams& params);

/// (Cr - I) + kappa (Do + Di) with the gate H held fixed: the negative
/// gradient of channel_energy with respect to I.
Plane descent_direction(const Plane& current, const Plane& target, const Plane& gate, double kappa,
                        const SolverParams& params);

/// Full energy of the current state; H is recomputed from the state.
double energy(const SolverState& state, const SolverParams& params);

SolverState make_state(const GuideImage& guide, const HsiImage& init, const SolverParams& params);

/// One explicit update of all three channels from the iteration-k state,
/// followed by clamping to [0,1]. Appends the new energy to the history.
SolverState step(const SolverState& state, const SolverParams& params);

enum class StopReason { converged, zero_energy, max_iters };

struct SolveResult {
  HsiImage image;
  int iterations = 0;
  std::vector<double> energy_history;
  StopReason reason = StopReason::max_iters;
};

/// Iterates `step` until |E(k+1) - E(k)| / |E(k)| <= tau, |E(k)| < 1e-12 or
/// max_iters steps. At least one step is always taken.
SolveResult solve(const GuideImage& guide, const HsiImage& init, const SolverParams& params);

/// "iter,energy,delta" lines; delta is empty for iteration 0.
void write_trace_csv(std::ostream& out, const std::vector<double>& energy_history);

const char* to_string(StopReason reason) noexcept;

}  // namespace acce
