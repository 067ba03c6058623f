// Amplitude-ratio route for the resonant Rabi model: u = b/a obeys a scalar
// Riccati equation whose solution has poles where a vanishes. Occupation
// probabilities follow from |u| alone, so a single real degree of freedom
// carries the physics between poles.
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "rwakit/core.hpp"
#include "rwakit/integrator.hpp"

namespace rwakit::riccati {

inline constexpr double kPoleGuard = 1e-6;   // closest admissible approach to a pole
inline constexpr double kBlowupLimit = 1e6;  // |u| beyond this counts as a pole hit

// Poles of the leading solution sit at t = pi/2 + k pi, where cos t = 0.
inline double nearest_pole(double t) {
  const double half_pi = std::numbers::pi / 2.0;
  const double k = std::round((t - half_pi) / std::numbers::pi);
  return half_pi + k * std::numbers::pi;
}

namespace detail {

inline void check_pole(double t) {
  const double pole = nearest_pole(t);
  if (std::abs(t - pole) < kPoleGuard)
    throw PoleError("riccati: t is within " + std::to_string(kPoleGuard) + " of a pole", pole);
}

}  // namespace detail

// Leading-order ratio u0(t) = -i tan t, the rotating wave b/a.
inline Complex u0(double t) {
  detail::check_pole(t);
  return Complex{0.0, -std::tan(t)};
}

// du/dt = i [ (1 + e^{-i t/eps}) u^2 - (1 + e^{+i t/eps}) ]; the pair of drive
// phases is the counter-rotating term that the rotating wave form drops.
inline Complex rhs(double t, Complex u, double epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0)
    throw ParamError("riccati rhs: epsilon must be positive");
  const Complex i{0.0, 1.0};
  const Complex fast = std::polar(1.0, t / epsilon);  // e^{+i t/eps}
  return i * ((1.0 + std::conj(fast)) * u * u - (1.0 + fast));
}

struct RiccatiState {
  Complex u{};
  bool valid = false;
};

// Integrates u from u(0) = 0 across the grid. A pole approach (|u| above
// kBlowupLimit, or the step size collapsing on the singularity) ends the run:
// the samples already reached stay valid, the rest are flagged, not an error.
inline std::vector<RiccatiState> integrate(double epsilon, const TimeGrid& grid,
                                           ode::IntegratorConfig cfg = {}) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0)
    throw ParamError("riccati integrate: epsilon must be positive");
  cfg = ode::resolve_config(cfg, 1.0 / epsilon);

  auto ode_rhs = [epsilon](double t, const ode::State& y, ode::State& dy) {
    dy[0] = rhs(t, y[0], epsilon);
  };
  auto hit_pole = [](const ode::State& y) {
    return !(std::abs(y[0]) <= kBlowupLimit);  // catches NaN as well
  };
  const ode::DenseOutput run =
      ode::integrate_partial(ode_rhs, ode::State{Complex{}}, grid, cfg, hit_pole);

  std::vector<RiccatiState> out(static_cast<std::size_t>(grid.n_samples));
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k < run.n_valid && std::abs(run.states[k][0]) <= kBlowupLimit) {
      out[k] = RiccatiState{run.states[k][0], true};
    } else {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      out[k] = RiccatiState{Complex{nan, nan}, false};
    }
  }
  return out;
}

// Renormalized expansion of u through second order. The epsilon^2 group keeps
// the combination du0 - i u0^2 + i even though u0 satisfies du0 = i (u0^2 - 1)
// and the combination vanishes identically; the expansion reads as derived.
inline Complex renormalized(double t, double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0.0)
    throw ParamError("riccati renormalized: epsilon must be nonnegative");
  detail::check_pole(t);

  const Complex i{0.0, 1.0};
  const double c = std::cos(t);
  const Complex u0v{0.0, -std::tan(t)};
  const Complex du0 = -i / (c * c);  // -i sec^2 t
  const Complex u0sq = u0v * u0v;

  const Complex e_fast_m = epsilon > 0.0 ? std::polar(1.0, -t / epsilon) : Complex{1.0, 0.0};
  const Complex e_fast_p = std::conj(e_fast_m);
  const Complex e_fast_m2 = e_fast_m * e_fast_m;  // e^{-2 i t/eps}
  const Complex e2 = std::polar(1.0, 2.0 * t);    // e^{2 i t}
  const Complex e4 = e2 * e2;
  const Complex denom = (1.0 + e2) * (1.0 + e2);

  const Complex shifted = std::polar(1.0, 2.0 * t * (1.0 + 0.5 * epsilon));
  const Complex first = -u0sq * e_fast_m - e_fast_p + (1.0 + 2.0 * shifted + e4) / denom;
  const Complex second = 2.0 * i * u0v * (du0 - i * u0sq + i) * e_fast_m -
                         2.0 * u0v * e_fast_p + u0sq * u0v * e_fast_m2 +
                         1.5 * (1.0 - e4) / denom;
  return u0v + epsilon * first + epsilon * epsilon * second;
}

struct Probabilities {
  double pa = 1.0;
  double pb = 0.0;
};

// pa = 1/(1 + |u|^2), pb = 1 - pa; the pair sums to one by construction and a
// diverging |u| saturates gracefully to (0, 1).
inline Probabilities probabilities_from_u(Complex u) {
  const double pa = 1.0 / (1.0 + std::norm(u));
  return Probabilities{pa, 1.0 - pa};
}

}  // namespace rwakit::riccati
