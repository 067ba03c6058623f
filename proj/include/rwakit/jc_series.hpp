// Closed-form approximants for the resonant Jaynes-Cummings ladder prepared in
// the one-photon state a_1(0) = 1: the rotating wave solution and the
// renormalized third-order expansion of a_1, plus a probe that measures where
// the expansion breaks down against the truncated-ladder integrator.
//
// Same time conventions as the Rabi series: t1 = tau/epsilon, t2 = tau.
#pragma once

#include <cmath>
#include <complex>

#include "rwakit/core.hpp"
#include "rwakit/integrator.hpp"

namespace rwakit::jc {

// a_1(t) = cos t, b_0(t) = -sin t once the counter-rotating ladder terms are
// dropped; packed as {a = a_1, b = b_0}, the only channels the closed forms touch.
inline AmplitudePair rwa(double t) {
  return AmplitudePair{Complex{std::cos(t), 0.0}, Complex{-std::sin(t), 0.0}};
}

// Sideband group cos(sqrt(3) t2) e^{i eps t2}: the two-photon channel a_3 feeds
// back into a_1 at the shifted frequency sqrt(3). Complex epsilon is admitted
// for Taylor-coefficient probes, as in the Rabi module.
inline Complex renorm_group_sqrt3(double t2, Complex epsilon) {
  const Complex i{0.0, 1.0};
  return std::cos(std::sqrt(3.0) * t2) * std::exp(i * epsilon * t2);
}

// Principal group (1+eps)/2 e^{+i t2 (1 + eps - eps^2/2)} +
// (1-eps)/2 e^{-i t2 (1 - eps - eps^2/2)}: the flopping carrier with its
// epsilon-split weights and renormalized frequencies.
inline Complex renorm_group_primary(double t2, Complex epsilon) {
  const Complex i{0.0, 1.0};
  const Complex w_plus = 0.5 * (1.0 + epsilon);
  const Complex w_minus = 0.5 * (1.0 - epsilon);
  const Complex phase_plus = t2 * (1.0 + epsilon - 0.5 * epsilon * epsilon);
  const Complex phase_minus = t2 * (1.0 - epsilon - 0.5 * epsilon * epsilon);
  return w_plus * std::exp(i * phase_plus) + w_minus * std::exp(-i * phase_minus);
}

// Renormalized a_1 through third order at independent (t1, t2).
inline Complex renormalized_a1_at(double t1, double t2, Complex epsilon) {
  const Complex i{0.0, 1.0};
  const Complex em1 = std::exp(-i * t1);
  const double r3 = std::sqrt(3.0);
  const Complex eps2 = epsilon * epsilon;
  const Complex eps3 = eps2 * epsilon;
  return renorm_group_primary(t2, epsilon) + 2.0 * eps2 * em1 * renorm_group_sqrt3(t2, epsilon) -
         2.0 * eps2 * std::cos(t2) +
         i * eps3 * (2.0 * r3 * em1 * std::sin(r3 * t2) + 2.5 * std::sin(t2));
}

inline Complex renormalized_a1(const TwoTimes& times, double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0.0)
    throw ParamError("renormalized_a1: epsilon must be nonnegative");
  if (epsilon > 0.0 && std::abs(times.t2 - epsilon * times.t1) > 1e-9)
    throw ParamError("renormalized_a1: t2 must equal epsilon * t1");
  return renormalized_a1_at(times.t1, times.t2, Complex{epsilon, 0.0});
}

// ----- breakdown probe --------------------------------------------------------------

// Smallest truncation, found by doubling from `start`, whose |a_1|^2 agrees
// with the doubled ladder to 1e-6 over [0, tau_max]; capped at `cap`.
inline int converged_truncation(double epsilon, double tau_max, int start = 15, int cap = 120,
                                int n_samples = 401, ode::IntegratorConfig cfg = {}) {
  const ModelParams params = make_params(Model::jaynes_cummings, 0.0, 1.0 / epsilon);
  const TimeGrid grid{0.0, tau_max, n_samples};
  int n0 = start;
  while (true) {
    const LadderTrajectory coarse =
        ode::integrate_jc(params, LadderState::single_photon_ground(n0), grid, cfg);
    const LadderTrajectory fine =
        ode::integrate_jc(params, LadderState::single_photon_ground(2 * n0), grid, cfg);
    double worst = 0.0;
    for (int k = 0; k < grid.n_samples; ++k) {
      const double pa_coarse = std::norm(coarse.states[static_cast<std::size_t>(k)].a[1]);
      const double pa_fine = std::norm(fine.states[static_cast<std::size_t>(k)].a[1]);
      worst = std::max(worst, std::abs(pa_coarse - pa_fine));
    }
    if (worst < 1e-6 || 2 * n0 >= cap) return worst < 1e-6 ? n0 : cap;
    n0 *= 2;
  }
}

struct BreakdownProbe {
  double max_err = 0.0;     // max |  |a_1(ren)|^2 - |a_1(num)|^2  | over the window
  double tau_at_max = 0.0;
  int n0 = 0;               // ladder truncation the reference was run with
};

// Measures the renormalized expansion against the truncated-ladder reference
// over [0, tau_max]. The truncation is convergence-checked before use so the
// probe stays meaningful deep into strong coupling.
inline BreakdownProbe breakdown_probe(double epsilon, double tau_max, int n_samples = 801,
                                      ode::IntegratorConfig cfg = {}) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0)
    throw ParamError("breakdown_probe: epsilon must be positive");
  if (!(tau_max > 0.0)) throw ParamError("breakdown_probe: tau_max must be positive");

  BreakdownProbe out;
  out.n0 = converged_truncation(epsilon, tau_max, 15, 120, std::min(n_samples, 401), cfg);

  const ModelParams params = make_params(Model::jaynes_cummings, 0.0, 1.0 / epsilon);
  const TimeGrid grid{0.0, tau_max, n_samples};
  const LadderTrajectory ref =
      ode::integrate_jc(params, LadderState::single_photon_ground(out.n0), grid, cfg);
  for (int k = 0; k < grid.n_samples; ++k) {
    const double tau = grid.time(k);
    const Complex a1 = renormalized_a1(map_times(tau, epsilon), epsilon);
    const double err =
        std::abs(std::norm(a1) - std::norm(ref.states[static_cast<std::size_t>(k)].a[1]));
    if (err > out.max_err) {
      out.max_err = err;
      out.tau_at_max = tau;
    }
  }
  return out;
}

}  // namespace rwakit::jc
