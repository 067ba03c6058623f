// Closed-form approximants for the resonant Rabi model (delta = 0): the
// rotating wave solution, the naive power series in epsilon = 1/big_delta,
// the fast/slow two-scale expansion, and its renormalized resummation that
// stays bounded at long times.
//
// Conventions: tau is time in flopping units. single_scale takes the rescaled
// fast time t = tau/epsilon; the two-scale forms take t1 = tau/epsilon and
// t2 = tau, which are independent variables of the expansion even though the
// physical evaluation path always sets t2 = epsilon * t1.
#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "rwakit/core.hpp"

namespace rwakit::rabi {

namespace detail {

inline void check_order(int order) {
  if (order < 0 || order > 2)
    throw UnsupportedOrderError("rabi series: order must be 0, 1, or 2");
}

inline void check_epsilon(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0.0)
    throw ParamError("rabi series: epsilon must be nonnegative");
}

// t2 and epsilon*t1 describe the same instant; reject mismatched pairs.
inline void check_times(const TwoTimes& times, double epsilon) {
  if (epsilon == 0.0) return;  // the fast phase drops out entirely
  if (std::abs(times.t2 - epsilon * times.t1) > 1e-9)
    throw ParamError("rabi series: t2 must equal epsilon * t1");
}

}  // namespace detail

// a(t) = cos t, b(t) = -i sin t: exact once the counter-rotating drive is dropped.
inline AmplitudePair rwa(double t) {
  return AmplitudePair{Complex{std::cos(t), 0.0}, Complex{0.0, -std::sin(t)}};
}

// ----- naive series in epsilon (fast time t) -------------------------------------

// b), a) second-order coefficients of the naive expansion; both are secular.
inline Complex single_scale_b1(double t) {
  const Complex i{0.0, 1.0};
  return -i * t - std::exp(i * t) + 1.0;
}

inline Complex single_scale_a2(double t) {
  const Complex i{0.0, 1.0};
  return std::exp(i * t) - i * t * std::exp(-i * t) - 0.5 * t * t - 1.0;
}

// Truncated naive series: a = 1 + eps^2 a2(t), b = eps b1(t). Useful only for
// t = O(1); the t^2/2 summand of a2 wrecks it on the flopping time scale.
inline AmplitudePair single_scale(double t, double epsilon, int order) {
  detail::check_order(order);
  detail::check_epsilon(epsilon);
  AmplitudePair out{Complex{1.0, 0.0}, Complex{}};
  if (order >= 1) out.b += epsilon * single_scale_b1(t);
  if (order >= 2) out.a += epsilon * epsilon * single_scale_a2(t);
  return out;
}

// ----- two-scale expansion in (t1, t2) --------------------------------------------

// Per-order coefficient pair of the two-scale series; the secular flags mark
// summands that grow without bound in t2.
struct TwoScaleTerm {
  int order;
  Complex (*a)(double t1, double t2);
  Complex (*b)(double t1, double t2);
  bool a_secular;
  bool b_secular;
};

namespace detail {

inline Complex two_scale_a0(double /*t1*/, double t2) { return Complex{std::cos(t2), 0.0}; }
inline Complex two_scale_b0(double /*t1*/, double t2) { return Complex{0.0, -std::sin(t2)}; }

inline Complex two_scale_a1(double t1, double t2) {
  const Complex i{0.0, 1.0};
  return -i * std::sin(t2) * std::exp(-i * t1);
}

inline Complex two_scale_b1(double t1, double t2) {
  const Complex i{0.0, 1.0};
  return std::cos(t2) * (1.0 - std::exp(i * t1));
}

inline Complex two_scale_a2(double t1, double t2) {
  const Complex i{0.0, 1.0};
  return 0.5 * t2 * std::sin(t2) - std::cos(t2) + std::cos(t2) * std::exp(i * t1);
}

inline Complex two_scale_b2(double t1, double t2) {
  const Complex i{0.0, 1.0};
  return 0.5 * i * (t2 * std::cos(t2) + std::sin(t2)) +
         i * std::sin(t2) * (std::exp(i * t1) - std::exp(-i * t1));
}

}  // namespace detail

inline const std::array<TwoScaleTerm, 3>& two_scale_terms() {
  static const std::array<TwoScaleTerm, 3> terms{{
      {0, &detail::two_scale_a0, &detail::two_scale_b0, false, false},
      {1, &detail::two_scale_a1, &detail::two_scale_b1, false, false},
      {2, &detail::two_scale_a2, &detail::two_scale_b2, true, true},
  }};
  return terms;
}

// Evaluates the expansion at independent (t1, t2); used by identity checks.
inline AmplitudePair two_scale_at(double t1, double t2, double epsilon, int order) {
  detail::check_order(order);
  detail::check_epsilon(epsilon);
  AmplitudePair out{};
  double weight = 1.0;
  for (int k = 0; k <= order; ++k) {
    const TwoScaleTerm& term = two_scale_terms()[static_cast<std::size_t>(k)];
    out.a += weight * term.a(t1, t2);
    out.b += weight * term.b(t1, t2);
    weight *= epsilon;
  }
  return out;
}

inline AmplitudePair two_scale(const TwoTimes& times, double epsilon, int order) {
  detail::check_epsilon(epsilon);
  detail::check_times(times, epsilon);
  return two_scale_at(times.t1, times.t2, epsilon, order);
}

// ----- renormalized resummation ---------------------------------------------------

// Half-amplitude carriers A(+-) = (1/2) exp(+-i t2 (1 - eps^2/2)); their sum
// resums the secular group cos t2 + (eps^2/2) t2 sin t2 into a frequency shift.
// epsilon is real in normal use; complex values are admitted so tests can probe
// the Taylor coefficients in epsilon by contour sampling.
inline Complex renorm_group(int sign, double t2, Complex epsilon) {
  if (sign != 1 && sign != -1) throw ParamError("renorm_group: sign must be +1 or -1");
  const Complex i{0.0, 1.0};
  const Complex shifted = t2 * (1.0 - 0.5 * epsilon * epsilon);
  return 0.5 * std::exp(static_cast<double>(sign) * i * shifted);
}

// Renormalized second-order amplitudes at independent (t1, t2).
inline AmplitudePair renormalized_at(double t1, double t2, Complex epsilon) {
  const Complex i{0.0, 1.0};
  const Complex ep1 = std::exp(i * t1);   // e^{+i t1}
  const Complex em1 = std::exp(-i * t1);  // e^{-i t1}
  const double c2 = std::cos(t2);
  const double s2 = std::sin(t2);
  const Complex shifted = t2 * (1.0 - 0.5 * epsilon * epsilon);

  AmplitudePair out;
  out.a = std::cos(shifted) - i * epsilon * s2 * em1 + epsilon * epsilon * (c2 * ep1 - c2);
  out.b = -i * std::sin(shifted) + epsilon * (c2 * (1.0 - ep1)) +
          epsilon * epsilon * (0.5 * i * s2 + i * s2 * (ep1 - em1));
  return out;
}

inline AmplitudePair renormalized(const TwoTimes& times, double epsilon) {
  detail::check_epsilon(epsilon);
  detail::check_times(times, epsilon);
  return renormalized_at(times.t1, times.t2, Complex{epsilon, 0.0});
}

}  // namespace rwakit::rabi
