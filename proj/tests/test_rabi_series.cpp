// Closed-form Rabi approximants: printed coefficient values, the secular
// growth of the naive and two-scale truncations, the resummed form's
// boundedness, and Taylor-coefficient probes that tie the resummation back to
// the expansion it was built from. Frozen numeric references come from the
// adaptive integrator cross-checked against the RK4 oracle elsewhere in the
// suite; each is quoted with the window and grid it was measured on.
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "rwakit/core.hpp"
#include "rwakit/integrator.hpp"
#include "rwakit/rabi_series.hpp"
#include "support/taylor_probe.hpp"

using namespace rwakit;

namespace {

const Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("rotating wave amplitudes trace the resonant flop") {
  const AmplitudePair origin = rabi::rwa(0.0);
  CHECK(origin.a == Complex{1.0, 0.0});
  CHECK(origin.b == Complex{0.0, 0.0});

  const AmplitudePair quarter = rabi::rwa(kPi / 2.0);
  CHECK(std::abs(quarter.a) < 1e-15);
  CHECK(std::abs(quarter.b - Complex{0.0, -1.0}) < 1e-15);

  for (int k = 0; k < 200; ++k) {
    const double t = 0.05 * k;
    const AmplitudePair s = rabi::rwa(t);
    CHECK(s.prob_a() == std::cos(t) * std::cos(t));  // identical expressions
    CHECK(std::abs(s.prob_a() + s.prob_b() - 1.0) < 1e-15);
  }
}

TEST_CASE("naive series matches its printed coefficients") {
  const AmplitudePair origin = rabi::single_scale(0.0, 0.3, 2);
  CHECK(origin.a == Complex{1.0, 0.0});
  CHECK(origin.b == Complex{0.0, 0.0});

  // at t = 2 pi the oscillatory summands close and only the secular parts remain
  const double eps = 0.3;
  const double t = 2.0 * kPi;
  const AmplitudePair s = rabi::single_scale(t, eps, 2);
  const Complex expect_a = 1.0 + eps * eps * Complex{-2.0 * kPi * kPi, -2.0 * kPi};
  const Complex expect_b = -2.0 * kPi * kI * eps;
  CHECK(std::abs(s.a - expect_a) < 1e-12);
  CHECK(std::abs(s.b - expect_b) < 1e-12);

  // truncation order controls which corrections enter
  const AmplitudePair o0 = rabi::single_scale(1.7, eps, 0);
  CHECK(o0.a == Complex{1.0, 0.0});
  CHECK(o0.b == Complex{0.0, 0.0});
  const AmplitudePair o1 = rabi::single_scale(1.7, eps, 1);
  CHECK(o1.a == Complex{1.0, 0.0});
  CHECK(std::abs(o1.b - eps * rabi::single_scale_b1(1.7)) == 0.0);

  CHECK_THROWS_AS(rabi::single_scale(1.0, 0.1, 3), UnsupportedOrderError);
  CHECK_THROWS_AS(rabi::single_scale(1.0, 0.1, -1), UnsupportedOrderError);
  CHECK_THROWS_AS(rabi::single_scale(1.0, -0.1, 2), ParamError);
}

TEST_CASE("naive series is accurate on the fast scale at weak coupling") {
  // numeric reference at tau = 0.5, big_delta = 50 (t = tau/eps = 25), frozen
  // from the adaptive run at rel_tol 1e-10: the a channel lands within the
  // expected eps^2-size window, the b channel carries a secular -i t summand
  // whose phase error is already visible at this depth.
  const double prob_a_ref = 0.7725497488687071;
  const double prob_b_ref = 0.2274502511312744;
  const AmplitudePair s = rabi::single_scale(25.0, 0.02, 2);
  CHECK(std::abs(s.prob_a() - prob_a_ref) < 5e-3);
  CHECK(std::abs(s.prob_b() - prob_b_ref) < 2.5e-2);
}

TEST_CASE("naive series grows without bound on the flopping scale") {
  // |a| >= eps^2 t^2 / 2 - 3 for eps^2 t <= 2: the t^2/2 secular summand of a2
  // dominates everything else in the truncation.
  for (double t : {50.0, 100.0, 200.0})
    CHECK(std::abs(rabi::single_scale(t, 0.1, 2).a) >= 0.01 * t * t / 2.0 - 3.0);
  for (double t : {400.0, 800.0})
    CHECK(std::abs(rabi::single_scale(t, 0.05, 2).a) >= 0.0025 * t * t / 2.0 - 3.0);
}

TEST_CASE("two-scale expansion is exact at the origin and reduces to the rotating wave") {
  const AmplitudePair origin = rabi::two_scale(TwoTimes{0.0, 0.0}, 0.1, 2);
  CHECK(origin.a == Complex{1.0, 0.0});
  CHECK(origin.b == Complex{0.0, 0.0});

  for (int k = 0; k < 50; ++k) {
    const double tau = 0.21 * k;
    const AmplitudePair lead = rabi::two_scale(map_times(tau, 0.1), 0.1, 0);
    const AmplitudePair wave = rabi::rwa(tau);
    CHECK(lead.a == wave.a);
    CHECK(lead.b == wave.b);
  }
}

TEST_CASE("two-scale term table flags the secular order") {
  const auto& terms = rabi::two_scale_terms();
  REQUIRE(terms.size() == 3);
  CHECK(terms[0].order == 0);
  CHECK(!terms[0].a_secular);
  CHECK(!terms[0].b_secular);
  CHECK(!terms[1].a_secular);
  CHECK(!terms[1].b_secular);
  CHECK(terms[2].a_secular);  // (1/2) t2 sin t2
  CHECK(terms[2].b_secular);  // (i/2) t2 cos t2

  // the leading term ignores the fast time entirely
  for (double t1 : {0.0, 1.7, 9.3})
    CHECK(terms[0].a(t1, 2.0) == terms[0].a(0.0, 2.0));
}

TEST_CASE("two-scale value at a right-angle slow time") {
  // independent (t1, t2) evaluation: a(0, pi/2) = -i eps + (pi/4) eps^2
  const double eps = 0.2;
  const AmplitudePair s = rabi::two_scale_at(0.0, kPi / 2.0, eps, 2);
  CHECK(std::abs(s.a - Complex{kPi / 4.0 * eps * eps, -eps}) < 1e-15);
}

TEST_CASE("two-scale rejects inconsistent time pairs") {
  CHECK_THROWS_AS(rabi::two_scale(TwoTimes{10.0, 1.5}, 0.1, 2), ParamError);
  // eps = 0 drops the fast phase, so any t1 is admissible
  const AmplitudePair s = rabi::two_scale(TwoTimes{123.0, 0.7}, 0.0, 2);
  CHECK(s.a == rabi::rwa(0.7).a);
}

TEST_CASE("two-scale truncation blows up near the secular time scale") {
  // max over [0, 150] of |a|^2 at eps = 0.1; the numeric curve never leaves
  // [0, 1], so this is also a lower bound on the probability error there.
  double worst = 0.0;
  for (int k = 0; k <= 1500; ++k) {
    const double tau = 0.1 * k;
    worst = std::max(worst, rabi::two_scale(map_times(tau, 0.1), 0.1, 2).prob_a());
  }
  CHECK(worst >= 1.5);
}

TEST_CASE("carrier pair halves the amplitude and resums the secular group") {
  for (double eps : {0.0, 0.05, 0.1, 0.3}) {
    for (int k = 0; k < 40; ++k) {
      const double t2 = 0.4 * k;
      const Complex plus = rabi::renorm_group(+1, t2, Complex{eps, 0.0});
      const Complex minus = rabi::renorm_group(-1, t2, Complex{eps, 0.0});
      CHECK(std::abs(std::abs(plus) - 0.5) < 1e-15);
      CHECK(std::abs(std::abs(minus) - 0.5) < 1e-15);
      const double shifted = t2 * (1.0 - 0.5 * eps * eps);
      CHECK(std::abs(plus + minus - std::cos(shifted)) < 1e-15);
    }
  }
  // the shifted carrier at t2 = pi, eps = 0.1
  const Complex sum =
      rabi::renorm_group(+1, kPi, Complex{0.1, 0.0}) + rabi::renorm_group(-1, kPi, Complex{0.1, 0.0});
  CHECK(std::abs(sum - (-0.9998766)) < 1e-6);

  CHECK_THROWS_AS(rabi::renorm_group(0, 1.0, Complex{0.1, 0.0}), ParamError);
  CHECK_THROWS_AS(rabi::renorm_group(2, 1.0, Complex{0.1, 0.0}), ParamError);
}

TEST_CASE("carrier Taylor coefficients in epsilon") {
  // A(+-) = (1/2) e^{+-i t2} -+ (i t2 / 4) e^{+-i t2} eps^2 + O(eps^4); the sum
  // reproduces cos t2 + (t2/2) sin t2 eps^2, the group the resummation absorbs.
  for (int k = 1; k <= 12; ++k) {
    const double t2 = 0.5 * k;
    for (int sign : {+1, -1}) {
      const auto c = probe::taylor_contour(
          [&](probe::Cx eps) { return rabi::renorm_group(sign, t2, eps); }, 3);
      const Complex carrier = 0.5 * std::exp(static_cast<double>(sign) * kI * t2);
      CHECK(std::abs(c[0] - carrier) < 1e-12);
      CHECK(std::abs(c[1]) < 1e-12);
      CHECK(std::abs(c[2] - (-static_cast<double>(sign) * kI * 0.5 * t2 * carrier)) < 1e-12);
      CHECK(std::abs(c[3]) < 1e-12);
    }
    const auto sum = probe::taylor_contour(
        [&](probe::Cx eps) {
          return rabi::renorm_group(+1, t2, eps) + rabi::renorm_group(-1, t2, eps);
        },
        2);
    CHECK(std::abs(sum[0] - std::cos(t2)) < 1e-12);
    CHECK(std::abs(sum[1]) < 1e-12);
    CHECK(std::abs(sum[2] - 0.5 * t2 * std::sin(t2)) < 1e-12);
  }
}

TEST_CASE("resummation expands back into the two-scale terms") {
  // Both channels: Taylor coefficients 0..2 of the resummed amplitudes in eps
  // at independent (t1, t2) must equal the two-scale term table exactly.
  const auto& terms = rabi::two_scale_terms();
  for (int k = 1; k <= 20; ++k) {
    const double t1 = 1.3 * k;
    const double t2 = 0.3 * k;
    const auto ca = probe::taylor_contour(
        [&](probe::Cx eps) { return rabi::renormalized_at(t1, t2, eps).a; }, 2);
    const auto cb = probe::taylor_contour(
        [&](probe::Cx eps) { return rabi::renormalized_at(t1, t2, eps).b; }, 2);
    for (int order = 0; order <= 2; ++order) {
      const std::size_t o = static_cast<std::size_t>(order);
      CHECK(std::abs(ca[o] - terms[o].a(t1, t2)) < 1e-12);
      CHECK(std::abs(cb[o] - terms[o].b(t1, t2)) < 1e-12);
    }
  }
}

TEST_CASE("stencil differentiation agrees with the contour probe") {
  const double t1 = 7.1, t2 = 2.3;
  auto f = [&](probe::Cx eps) { return rabi::renormalized_at(t1, t2, eps).a; };
  const auto contour = probe::taylor_contour(f, 3);
  const auto stencil = probe::taylor_central(f);
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(contour[k] - stencil[k]) < 1e-6);
}

TEST_CASE("resummed amplitude stays bounded at long times") {
  // |a| <= 1 + eps + 2 eps^2: the carrier contributes 1, the eps term sin t2,
  // and the eps^2 group at most 2. Checked over a thousand flopping periods.
  for (double eps : {0.05, 0.1, 0.2}) {
    const double bound = 1.0 + eps + 2.0 * eps * eps;
    double sup = 0.0;
    for (int k = 0; k <= 10000; ++k) {
      const double tau = 0.1 * k;
      sup = std::max(sup, std::abs(rabi::renormalized(map_times(tau, eps), eps).a));
    }
    CHECK(sup <= bound);
  }
}

TEST_CASE("resummed amplitude converges to the rotating wave as epsilon vanishes") {
  for (double eps : {0.02, 0.05, 0.1}) {
    double worst = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const double tau = 0.01 * k;
      worst = std::max(worst,
                       std::abs(rabi::renormalized(map_times(tau, eps), eps).a - std::cos(tau)));
    }
    CHECK(worst <= 2.0 * eps);
  }
}

TEST_CASE("resummed amplitude at printed sample points") {
  // tau = pi at eps = 0.1: the fast phase closes (t1 = 10 pi) and the value
  // collapses onto the shifted carrier cos(0.995 pi).
  const AmplitudePair at_pi = rabi::renormalized(TwoTimes{10.0 * kPi, kPi}, 0.1);
  CHECK(std::abs(at_pi.a - std::cos(0.995 * kPi)) < 1e-12);

  // tau = 150 at eps = 0.1, deep past the secular scale: frozen numeric
  // |a|^2 = 0.0098048124492700 from the adaptive run at rel_tol 1e-10.
  const AmplitudePair late = rabi::renormalized(map_times(150.0, 0.1), 0.1);
  CHECK(std::abs(late.prob_a() - 0.0098048124492700) < 2e-2);
}

TEST_CASE("resummed b channel tracks the numeric one on the fast window") {
  const ModelParams p = make_params(Model::rabi, 0.0, 10.0);
  const TimeGrid grid{0.0, 3.0, 301};
  const Trajectory traj = ode::integrate_rabi(p, AmplitudePair{1.0, 0.0}, grid);
  double worst = 0.0;
  for (int k = 0; k < grid.n_samples; ++k) {
    const double tau = grid.time(k);
    const AmplitudePair s = rabi::renormalized(map_times(tau, 0.1), 0.1);
    worst = std::max(worst,
                     std::abs(s.prob_b() - traj.states[static_cast<std::size_t>(k)].prob_b()));
  }
  CHECK(worst < 5e-3);
}

TEST_CASE("resummation validates its arguments") {
  CHECK_THROWS_AS(rabi::renormalized(TwoTimes{10.0, 1.5}, 0.1), ParamError);
  CHECK_THROWS_AS(rabi::renormalized(TwoTimes{1.0, 0.1}, -0.1), ParamError);
}
