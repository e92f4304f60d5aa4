#include "acce/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace acce {

void SolverParams::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ContractError("alpha must be >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ContractError("beta must be >= 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ContractError("sigma must be > 0");
  if (!(dt > 0.0 && dt <= 1.0)) throw ContractError("dt must lie in (0, 1]");
  if (!(tau > 0.0)) throw ContractError("tau must be > 0");
  if (max_iters < 1) throw ContractError("max_iters must be >= 1");
  kernel.validate();
}

namespace detail {

struct ChannelAnalysis {
  Plane channel;
  NonlocalSums moments;
};

struct AnalysisCache {
  KernelSpec kernel;
  bool exact_mode = false;
  bool normalize_weights = true;
  std::array<ChannelAnalysis, 2> channels;  // saturation, intensity

  bool matches(const SolverParams& p) const noexcept {
    return kernel.kind == p.kernel.kind && kernel.spatial_sigma == p.kernel.spatial_sigma &&
           kernel.window_radius == p.kernel.window_radius && exact_mode == p.exact_mode &&
           normalize_weights == p.normalize_weights;
  }
};

}  // namespace detail

namespace {

using detail::AnalysisCache;
using detail::ChannelAnalysis;

constexpr double kZeroEnergy = 1e-12;

void require_same(const Plane& a, const Plane& b, const char* what) {
  if (!a.same_shape(b)) throw ContractError(std::string(what) + ": plane shapes differ");
}

Plane do_terms(const Plane& ic, const Plane& g, const Plane& h, const Plane& s1, const Plane& s2,
               const Plane& sc, double sigma) {
  Plane out(ic.width(), ic.height());
  auto o = out.samples();
  const auto iv = ic.samples(), gv = g.samples(), hv = h.samples();
  const auto s1v = s1.samples(), s2v = s2.samples(), scv = sc.samples();
  for (std::size_t k = 0; k < o.size(); ++k) {
    const double gh = gv[k] * hv[k];
    o[k] = scv[k] + gh * s1v[k] - (iv[k] - 0.5) / (2.0 * sigma) * gh * s2v[k];
  }
  return out;
}

Plane di_terms(const Plane& h, const Plane& s1, const Plane& sc) {
  Plane out(h.width(), h.height());
  auto o = out.samples();
  const auto hv = h.samples(), s1v = s1.samples(), scv = sc.samples();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = (2.0 - hv[k]) * s1v[k] - scv[k];
  return out;
}

double data_term(const Plane& current, const Plane& target) {
  double acc = 0.0;
  const auto a = current.samples(), b = target.samples();
  for (std::size_t k = 0; k < a.size(); ++k) acc += (b[k] - a[k]) * (b[k] - a[k]);
  return 0.5 * acc;
}

// -kappa/2 sum_x [G H + 1 - H] s2
double regulariser(const Plane& current, const Plane& gate, const Plane& s2, double kappa,
                   double sigma) {
  const Plane g = gaussian_weight(current, sigma);
  const auto gv = g.samples(), hv = gate.samples(), s2v = s2.samples();
  double acc = 0.0;
  for (std::size_t k = 0; k < s2v.size(); ++k) acc += (gv[k] * hv[k] + 1.0 - hv[k]) * s2v[k];
  return -0.5 * kappa * acc;
}

// (Cr - I) + kappa (Do + Di) given the moments of I and a gate.
Plane direction(const Plane& current, const Plane& target, const Plane& gate,
                const NonlocalSums& moments, double kappa, const SolverParams& params) {
  Plane out(current.width(), current.height());
  auto o = out.samples();
  const auto iv = current.samples(), tv = target.samples();
  if (kappa == 0.0) {
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = tv[k] - iv[k];
    return out;
  }
  const Plane g = gaussian_weight(current, params.sigma);
  Plane gh = g;
  {
    auto ghv = gh.samples();
    const auto hv = gate.samples();
    for (std::size_t k = 0; k < ghv.size(); ++k) ghv[k] *= hv[k];
  }
  const std::array<Plane, 2> fields{gh, gate};
  const NonlocalSums gated = solver_sums(current, fields, params, Moments::skip);
  const Plane d_o = do_terms(current, g, gate, moments.s1, moments.s2, gated.sc[0], params.sigma);
  const Plane d_i = di_terms(gate, moments.s1, gated.sc[1]);
  const auto dov = d_o.samples(), div = d_i.samples();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = tv[k] - iv[k] + kappa * (dov[k] + div[k]);
  return out;
}

std::shared_ptr<AnalysisCache> analyse(const HsiImage& img, const SolverParams& params) {
  auto cache = std::make_shared<AnalysisCache>();
  cache->kernel = params.kernel;
  cache->exact_mode = params.exact_mode;
  cache->normalize_weights = params.normalize_weights;
  cache->channels[0] = {img.s(), solver_sums(img.s(), {}, params)};
  cache->channels[1] = {img.i(), solver_sums(img.i(), {}, params)};
  return cache;
}

// Moments of the state's s and i channels, reusing the cached ones when they
// still describe the current planes.
std::shared_ptr<const AnalysisCache> analysis_of(const SolverState& state,
                                                 const SolverParams& params) {
  const auto& c = state.cache;
  if (c && c->matches(params) && c->channels[0].channel == state.current.s() &&
      c->channels[1].channel == state.current.i()) {
    return c;
  }
  return analyse(state.current, params);
}

double state_energy(const HsiImage& current, const GuideImage& guide, const AnalysisCache& a,
                    const SolverParams& params) {
  double e = 0.0;
  for (std::size_t c = 0; c < 3; ++c) e += data_term(current[c], guide[c]);
  const double kappas[2] = {params.alpha, params.beta};
  for (std::size_t c = 0; c < 2; ++c) {
    const Plane& ch = current[c + 1];
    const NonlocalSums& m = a.channels[c].moments;
    const Plane gate = heaviside_field(ch, m.s1);
    e += regulariser(ch, gate, m.s2, kappas[c], params.sigma);
  }
  return e;
}

}  // namespace

Plane gaussian_weight(const Plane& ic, double sigma) {
  if (!(sigma > 0.0)) throw ContractError("sigma must be > 0");
  Plane out = ic;
  for (double& v : out.samples()) v = std::exp(-(v - 0.5) * (v - 0.5) / (2.0 * sigma));
  return out;
}

Plane heaviside_field(const Plane& ic, const Plane& s1) {
  require_same(ic, s1, "heaviside_field");
  Plane out(ic.width(), ic.height());
  auto o = out.samples();
  const auto iv = ic.samples(), sv = s1.samples();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = (iv[k] - 0.5) * sv[k] > 0.0 ? 1.0 : 0.0;
  return out;
}

Plane do_operator(const Plane& ic, const Plane& g, const Plane& h, const NonlocalSums& sums,
                  double sigma) {
  require_same(ic, g, "do_operator");
  require_same(ic, h, "do_operator");
  if (sums.sc.empty()) throw ContractError("do_operator needs the sums for c = G*H");
  require_same(ic, sums.s1, "do_operator");
  require_same(ic, sums.s2, "do_operator");
  require_same(ic, sums.sc.front(), "do_operator");
  return do_terms(ic, g, h, sums.s1, sums.s2, sums.sc.front(), sigma);
}

Plane di_operator(const Plane& h, const NonlocalSums& sums) {
  if (sums.sc.empty()) throw ContractError("di_operator needs the sums for c = H");
  require_same(h, sums.s1, "di_operator");
  require_same(h, sums.sc.front(), "di_operator");
  return di_terms(h, sums.s1, sums.sc.front());
}

NonlocalSums solver_sums(const Plane& channel, std::span<const Plane> fields,
                         const SolverParams& params, Moments moments) {
  NonlocalSums sums = params.exact_mode
                          ? naive_sums(channel, fields, params.kernel, Scope::global, moments)
                          : pyramid_sums(channel, fields, params.kernel, moments);
  if (!params.normalize_weights) return sums;
  const auto mv = sums.mass.samples();
  const double z = *std::max_element(mv.begin(), mv.end());
  if (!(z > 0.0)) return sums;  // 1x1 image: every sum is already zero
  const double inv = 1.0 / z;
  auto scale = [inv](Plane& p) {
    for (double& v : p.samples()) v *= inv;
  };
  if (!sums.s1.empty()) scale(sums.s1);
  if (!sums.s2.empty()) scale(sums.s2);
  for (Plane& p : sums.sc) scale(p);
  scale(sums.mass);
  return sums;
}

double channel_energy(const Plane& current, const Plane& target, const Plane& gate, double kappa,
                      const SolverParams& params) {
  require_same(current, target, "channel_energy");
  require_same(current, gate, "channel_energy");
  const NonlocalSums m = solver_sums(current, {}, params);
  return data_term(current, target) + regulariser(current, gate, m.s2, kappa, params.sigma);
}

Plane descent_direction(const Plane& current, const Plane& target, const Plane& gate, double kappa,
                        const SolverParams& params) {
  require_same(current, target, "descent_direction");
  require_same(current, gate, "descent_direction");
  const NonlocalSums m = solver_sums(current, {}, params);
  return direction(current, target, gate, m, kappa, params);
}

double energy(const SolverState& state, const SolverParams& params) {
  return state_energy(state.current, state.guide, *analysis_of(state, params), params);
}

SolverState make_state(const GuideImage& guide, const HsiImage& init, const SolverParams& params) {
  params.validate();
  if (!guide[0].same_shape(init[0])) throw ContractError("guide and init dimensions differ");
  SolverState st;
  st.current = init;
  st.guide = guide;
  auto cache = analyse(st.current, params);
  st.energy_history.push_back(state_energy(st.current, st.guide, *cache, params));
  st.cache = std::move(cache);
  return st;
}

SolverState step(const SolverState& state, const SolverParams& params) {
  params.validate();
  const auto here = analysis_of(state, params);

  SolverState next;
  next.guide = state.guide;
  next.iteration = state.iteration + 1;
  next.energy_history = state.energy_history;
  if (next.energy_history.empty()) {
    next.energy_history.push_back(state_energy(state.current, state.guide, *here, params));
  }

  const double dt = params.dt;
  Plane hue = state.current.h();
  {
    auto hv = hue.samples();
    const auto cv = state.guide.h().samples();
    for (std::size_t k = 0; k < hv.size(); ++k) hv[k] = (1.0 - dt) * hv[k] + dt * cv[k];
  }

  const double kappas[2] = {params.alpha, params.beta};
  std::array<Plane, 2> updated;
  for (std::size_t c = 0; c < 2; ++c) {
    const Plane& ch = state.current[c + 1];
    const Plane& target = state.guide[c + 1];
    const NonlocalSums& m = here->channels[c].moments;
    const Plane gate = heaviside_field(ch, m.s1);
    const Plane d = direction(ch, target, gate, m, kappas[c], params);
    Plane out = ch;
    auto ov = out.samples();
    const auto iv = ch.samples(), tv = target.samples(), dv = d.samples();
    for (std::size_t k = 0; k < ov.size(); ++k) {
      // (1 - dt) I + dt Cr + kappa dt (Do + Di), regrouped around the direction
      const double reg = dv[k] - (tv[k] - iv[k]);
      ov[k] = (1.0 - dt) * iv[k] + dt * tv[k] + dt * reg;
    }
    updated[c] = clamp_unit(std::move(out));
  }

  next.current = HsiImage(clamp_unit(std::move(hue)), std::move(updated[0]), std::move(updated[1]));
  auto cache = analyse(next.current, params);
  next.energy_history.push_back(state_energy(next.current, next.guide, *cache, params));
  next.cache = std::move(cache);
  return next;
}

SolveResult solve(const GuideImage& guide, const HsiImage& init, const SolverParams& params) {
  SolverState state = make_state(guide, init, params);
  SolveResult result;
  for (;;) {
    const double prev = state.energy_history.back();
    state = step(state, params);
    const double now = state.energy_history.back();
    if (std::abs(prev) < kZeroEnergy) {
      result.reason = StopReason::zero_energy;
      break;
    }
    if (std::abs(now - prev) / std::abs(prev) <= params.tau) {
      result.reason = StopReason::converged;
      break;
    }
    if (state.iteration >= params.max_iters) {
      result.reason = StopReason::max_iters;
      break;
    }
  }
  result.image = std::move(state.current);
  result.iterations = state.iteration;
  result.energy_history = std::move(state.energy_history);
  return result;
}

void write_trace_csv(std::ostream& out, const std::vector<double>& energy_history) {
  const auto old_precision = out.precision(17);
  out << "iter,energy,delta\n";
  for (std::size_t k = 0; k < energy_history.size(); ++k) {
    out << k << ',' << energy_history[k] << ',';
    if (k > 0) {
      const double prev = energy_history[k - 1];
      out << (prev == 0.0 ? 0.0 : std::abs(energy_history[k] - prev) / std::abs(prev));
    }
    out << '\n';
  }
  out.precision(old_precision);
}

const char* to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::converged: return "converged";
    case StopReason::zero_energy: return "zero_energy";
    case StopReason::max_iters: return "max_iters";
  }
  return "unknown";
}

}  // namespace acce
