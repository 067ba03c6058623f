// Adaptive embedded Dormand-Prince 5(4) integration of the dimensionless Rabi
// and truncated Jaynes-Cummings equations of motion, with dense output onto
// uniform grids. Time is measured in flopping units 1/Omega throughout.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "rwakit/core.hpp"

namespace rwakit::ode {

using State = std::vector<Complex>;

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.0;      // <= 0: resolved to 0.1/big_delta by the model drivers
  double initial_step = 0.0;  // <= 0: start from max_step
};

inline IntegratorConfig validate_config(const IntegratorConfig& cfg) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
    throw ParamError("integrator tolerances must be positive");
  if (!(cfg.max_step > 0.0)) throw ParamError("integrator max_step must be positive");
  return cfg;
}

// Fills in the step bound from the counter-rotating frequency so that every
// period of the fast phase is resolved by at least ~60 steps.
inline IntegratorConfig resolve_config(IntegratorConfig cfg, double big_delta) {
  if (cfg.max_step <= 0.0) cfg.max_step = 0.1 / big_delta;
  if (cfg.initial_step <= 0.0) cfg.initial_step = cfg.max_step;
  return cfg;
}

enum class StopReason { completed, state_blowup, step_underflow, step_limit };

// Grid samples are filled in order; entries past n_valid were never reached.
struct DenseOutput {
  std::vector<State> states;
  std::size_t n_valid = 0;
  StopReason reason = StopReason::completed;
  double t_stop = 0.0;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
inline constexpr double kA21 = 1.0 / 5.0;
inline constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
inline constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
inline constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                        kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
inline constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                        kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                        kA65 = -5103.0 / 18656.0;
inline constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0, kA74 = 125.0 / 192.0,
                        kA75 = -2187.0 / 6784.0, kA76 = 11.0 / 84.0;
// Weights of y5 - y4, the embedded error estimate.
inline constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                        kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
// Weights of the quartic dense-output interpolant.
inline constexpr double kD1 = -12715105075.0 / 11282082432.0;
inline constexpr double kD3 = 87487479700.0 / 32700410799.0;
inline constexpr double kD4 = -10690763975.0 / 1880347072.0;
inline constexpr double kD5 = 701980252875.0 / 199316789632.0;
inline constexpr double kD6 = -1453857185.0 / 822651844.0;
inline constexpr double kD7 = 69997945.0 / 29380423.0;

inline constexpr double kSafety = 0.9;
inline constexpr double kShrinkFloor = 0.2;
inline constexpr double kGrowCap = 5.0;
inline constexpr std::size_t kMaxSteps = 50'000'000;

struct NoStop {
  bool operator()(const State&) const { return false; }
};

}  // namespace detail

// Integrates dy/dt = rhs(t, y) across the grid, interpolating each requested
// sample from the surrounding accepted step. Never throws on failure to reach
// t_end: the outcome is recorded in the result so callers can decide whether a
// partial run is an error (linear models) or a flagged segment (Riccati poles).
// `stop` is checked after every accepted step and ends the run gracefully.
template <class Rhs, class Stop = detail::NoStop>
DenseOutput integrate_partial(Rhs&& rhs, State y0, const TimeGrid& grid,
                              const IntegratorConfig& cfg, Stop&& stop = Stop{}) {
  validate_grid(grid);
  validate_config(cfg);
  const std::size_t dim = y0.size();
  if (dim == 0) throw ParamError("integrate: empty state");
  const int m = grid.n_samples;

  DenseOutput out;
  out.states.assign(static_cast<std::size_t>(m), State(dim));
  out.states[0] = y0;
  out.n_valid = 1;
  out.t_stop = grid.t_start;

  if (grid.t_end == grid.t_start) {  // degenerate zero-length run
    for (int i = 1; i < m; ++i) out.states[static_cast<std::size_t>(i)] = y0;
    out.n_valid = static_cast<std::size_t>(m);
    return out;
  }

  State y = std::move(y0);
  State k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  State ytmp(dim), ynew(dim);
  State cont2(dim), cont3(dim), cont4(dim), cont5(dim);

  double t = grid.t_start;
  rhs(t, y, k1);

  double h = std::min(cfg.initial_step, cfg.max_step);
  h = std::min(h, grid.t_end - t);
  int next = 1;
  std::size_t n_steps = 0;
  bool just_rejected = false;

  using detail::kA21, detail::kA31, detail::kA32, detail::kA41, detail::kA42, detail::kA43,
      detail::kA51, detail::kA52, detail::kA53, detail::kA54, detail::kA61, detail::kA62,
      detail::kA63, detail::kA64, detail::kA65, detail::kA71, detail::kA73, detail::kA74,
      detail::kA75, detail::kA76;

  while (next < m) {
    if (++n_steps > detail::kMaxSteps) {
      out.reason = StopReason::step_limit;
      out.t_stop = t;
      return out;
    }

    bool final_step = false;
    if (t + h >= grid.t_end) {
      h = grid.t_end - t;
      final_step = true;
    }

    for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * kA21 * k1[i];
    rhs(t + detail::kC2 * h, ytmp, k2);
    for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
    rhs(t + detail::kC3 * h, ytmp, k3);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    rhs(t + detail::kC4 * h, ytmp, k4);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
    rhs(t + detail::kC5 * h, ytmp, k5);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] +
                h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] + kA65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (std::size_t i = 0; i < dim; ++i)
      ynew[i] = y[i] +
                h * (kA71 * k1[i] + kA73 * k3[i] + kA74 * k4[i] + kA75 * k5[i] + kA76 * k6[i]);
    rhs(t + h, ynew, k7);

    double err_sq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const Complex e = h * (detail::kE1 * k1[i] + detail::kE3 * k3[i] + detail::kE4 * k4[i] +
                             detail::kE5 * k5[i] + detail::kE6 * k6[i] + detail::kE7 * k7[i]);
      const double scale =
          cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = std::abs(e) / scale;
      err_sq += r * r;
    }
    const double err = std::sqrt(err_sq / static_cast<double>(dim));

    if (!(err <= 1.0)) {  // rejected step (a NaN estimate lands here too)
      const double h_floor =
          64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
      if (h <= h_floor) {
        out.reason = StopReason::step_underflow;
        out.t_stop = t;
        return out;
      }
      double fac = detail::kSafety * std::pow(err, -0.2);
      if (!(fac > detail::kShrinkFloor)) fac = detail::kShrinkFloor;
      h *= fac;
      just_rejected = true;
      continue;
    }

    const double t_new = final_step ? grid.t_end : t + h;

    // Emit all grid samples covered by this accepted step.
    if (next < m && grid.time(next) <= t_new) {
      for (std::size_t i = 0; i < dim; ++i) {
        cont2[i] = ynew[i] - y[i];
        cont3[i] = h * k1[i] - cont2[i];
        cont4[i] = cont2[i] - h * k7[i] - cont3[i];
        cont5[i] = h * (detail::kD1 * k1[i] + detail::kD3 * k3[i] + detail::kD4 * k4[i] +
                        detail::kD5 * k5[i] + detail::kD6 * k6[i] + detail::kD7 * k7[i]);
      }
      while (next < m && grid.time(next) <= t_new) {
        const double theta = std::clamp((grid.time(next) - t) / h, 0.0, 1.0);
        const double theta1 = 1.0 - theta;
        State& s = out.states[static_cast<std::size_t>(next)];
        for (std::size_t i = 0; i < dim; ++i)
          s[i] = y[i] + theta * (cont2[i] + theta1 * (cont3[i] + theta * (cont4[i] + theta1 * cont5[i])));
        ++next;
      }
      out.n_valid = static_cast<std::size_t>(next);
    }

    if (stop(ynew)) {
      out.reason = StopReason::state_blowup;
      out.t_stop = t_new;
      return out;
    }

    y.swap(ynew);
    k1.swap(k7);  // first-same-as-last
    t = t_new;

    double fac = err > 0.0 ? detail::kSafety * std::pow(err, -0.2) : detail::kGrowCap;
    const double cap = just_rejected ? 1.0 : detail::kGrowCap;
    fac = std::clamp(fac, detail::kShrinkFloor, cap);
    h = std::min(h * fac, cfg.max_step);
    just_rejected = false;
  }

  out.t_stop = grid.t_end;
  return out;
}

// As integrate_partial, but an incomplete run is an error.
template <class Rhs>
std::vector<State> integrate(Rhs&& rhs, State y0, const TimeGrid& grid,
                             const IntegratorConfig& cfg) {
  DenseOutput r = integrate_partial(std::forward<Rhs>(rhs), std::move(y0), grid, cfg);
  if (r.reason == StopReason::step_underflow)
    throw IntegrationError("integrate: step size underflow at t = " + std::to_string(r.t_stop),
                           r.t_stop);
  if (r.reason == StopReason::step_limit)
    throw IntegrationError("integrate: step budget exhausted at t = " + std::to_string(r.t_stop),
                           r.t_stop);
  return std::move(r.states);
}

// ----- model right-hand sides ---------------------------------------------------

// da/dt = -i (e^{-i delta t} + e^{-i big_delta t}) b
// db/dt = -i (e^{+i delta t} + e^{+i big_delta t}) a
inline AmplitudePair rabi_rhs(double t, const AmplitudePair& s, const ModelParams& p) {
  const Complex i{0.0, 1.0};
  const Complex drive_m = std::polar(1.0, -p.delta * t) + std::polar(1.0, -p.big_delta * t);
  const Complex drive_p = std::conj(drive_m);
  return AmplitudePair{-i * drive_m * s.b, -i * drive_p * s.a};
}

namespace detail {

inline void jc_rhs_flat(double t, const Complex* a, const Complex* b, Complex* da, Complex* db,
                        int n_max, double delta, double big_delta) {
  const Complex e_md = std::polar(1.0, -delta * t);      // e^{-i delta t}
  const Complex e_pd = std::conj(e_md);
  const Complex e_mD = std::polar(1.0, -big_delta * t);  // e^{-i big_delta t}
  const Complex e_pD = std::conj(e_mD);
  for (int n = 0; n <= n_max; ++n) {
    const double rn = std::sqrt(static_cast<double>(n));
    const double rn1 = std::sqrt(static_cast<double>(n + 1));
    const Complex b_prev = n > 0 ? b[n - 1] : Complex{};
    const Complex b_next = n < n_max ? b[n + 1] : Complex{};
    const Complex a_prev = n > 0 ? a[n - 1] : Complex{};
    const Complex a_next = n < n_max ? a[n + 1] : Complex{};
    da[n] = rn * e_md * b_prev - rn1 * e_mD * b_next;
    db[n] = rn * e_pD * a_prev - rn1 * e_pd * a_next;
  }
}

}  // namespace detail

// da_n/dt = sqrt(n) e^{-i delta t} b_{n-1} - sqrt(n+1) e^{-i big_delta t} b_{n+1}
// db_n/dt = sqrt(n) e^{+i big_delta t} a_{n-1} - sqrt(n+1) e^{+i delta t} a_{n+1}
// with a_{-1} = b_{-1} = 0 and a_n = b_n = 0 beyond n_max.
inline LadderState jc_rhs(double t, const LadderState& s, const ModelParams& p) {
  if (s.a.size() != s.b.size() || s.n_max() < 1)
    throw ParamError("jc_rhs: ladder needs matching a/b with n_max >= 1");
  LadderState d = LadderState::zero(s.n_max());
  detail::jc_rhs_flat(t, s.a.data(), s.b.data(), d.a.data(), d.b.data(), s.n_max(), p.delta,
                      p.big_delta);
  return d;
}

namespace detail {

// The dynamics are norm conserving, so the integrator must hand back states
// whose norm deviates from the initial one by at most 100 * rel_tol.
inline void check_norm(const std::vector<State>& states, const TimeGrid& grid,
                       const IntegratorConfig& cfg) {
  double norm0 = 0.0;
  for (const Complex& v : states.front()) norm0 += std::norm(v);
  const double bound = 100.0 * cfg.rel_tol;
  for (std::size_t idx = 0; idx < states.size(); ++idx) {
    double norm = 0.0;
    for (const Complex& v : states[idx]) norm += std::norm(v);
    if (std::abs(norm - norm0) > bound)
      throw IntegrationError("integrate: norm drift above tolerance at t = " +
                                 std::to_string(grid.time(static_cast<int>(idx))),
                             grid.time(static_cast<int>(idx)));
  }
}

}  // namespace detail

inline Trajectory integrate_rabi(const ModelParams& params, const AmplitudePair& initial,
                                 const TimeGrid& grid, IntegratorConfig cfg = {}) {
  validate_params(params);
  cfg = resolve_config(cfg, params.big_delta);
  auto rhs = [&params](double t, const State& y, State& dy) {
    const AmplitudePair d = rabi_rhs(t, AmplitudePair{y[0], y[1]}, params);
    dy[0] = d.a;
    dy[1] = d.b;
  };
  std::vector<State> states = integrate(rhs, State{initial.a, initial.b}, grid, cfg);
  detail::check_norm(states, grid, cfg);

  Trajectory traj{grid, Method{MethodKind::numeric}, params, {}};
  traj.states.reserve(states.size());
  for (const State& s : states) traj.states.push_back(AmplitudePair{s[0], s[1]});
  return traj;
}

inline LadderTrajectory integrate_jc(const ModelParams& params, const LadderState& initial,
                                     const TimeGrid& grid, IntegratorConfig cfg = {}) {
  validate_params(params);
  if (initial.a.size() != initial.b.size() || initial.n_max() < 1)
    throw ParamError("integrate_jc: ladder needs matching a/b with n_max >= 1");
  cfg = resolve_config(cfg, params.big_delta);
  const int n_max = initial.n_max();
  const std::size_t width = initial.a.size();

  State y0(2 * width);
  std::copy(initial.a.begin(), initial.a.end(), y0.begin());
  std::copy(initial.b.begin(), initial.b.end(), y0.begin() + static_cast<std::ptrdiff_t>(width));
  auto rhs = [&params, n_max, width](double t, const State& y, State& dy) {
    detail::jc_rhs_flat(t, y.data(), y.data() + width, dy.data(), dy.data() + width, n_max,
                        params.delta, params.big_delta);
  };
  std::vector<State> states = integrate(rhs, std::move(y0), grid, cfg);
  detail::check_norm(states, grid, cfg);

  LadderTrajectory traj{grid, Method{MethodKind::numeric}, params, {}};
  traj.states.reserve(states.size());
  for (const State& s : states) {
    LadderState ls = LadderState::zero(n_max);
    std::copy(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(width), ls.a.begin());
    std::copy(s.begin() + static_cast<std::ptrdiff_t>(width), s.end(), ls.b.begin());
    traj.states.push_back(std::move(ls));
  }
  return traj;
}

// ----- diagnostics ---------------------------------------------------------------

// Largest deviation of the total occupation probability from one.
inline double norm_drift(const Trajectory& traj) {
  double worst = 0.0;
  for (const AmplitudePair& s : traj.states)
    worst = std::max(worst, std::abs(s.prob_a() + s.prob_b() - 1.0));
  return worst;
}

inline double norm_drift(const LadderTrajectory& traj) {
  double worst = 0.0;
  for (const LadderState& s : traj.states)
    worst = std::max(worst, std::abs(s.total_probability() - 1.0));
  return worst;
}

}  // namespace rwakit::ode
