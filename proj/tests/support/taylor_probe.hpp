// Numeric differentiation in the expansion parameter. The closed forms under
// test are entire in epsilon, so Taylor coefficients can be read off two ways:
//
//  * contour sampling: average f(r e^{i phi}) e^{-i k phi} over a uniform
//    circle; exact for every k < n_samples up to roundoff and the r^n_samples
//    aliasing tail, which makes it the workhorse for tight tolerances;
//  * Richardson-extrapolated central differences on the real axis, the
//    classical stencil route, kept as an independent cross-check.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace probe {

using Cx = std::complex<double>;

template <class F>
std::vector<Cx> taylor_contour(F&& f, int k_max, double radius = 0.2, int n_samples = 64) {
  std::vector<Cx> vals(static_cast<std::size_t>(n_samples));
  for (int j = 0; j < n_samples; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / n_samples;
    vals[static_cast<std::size_t>(j)] = f(std::polar(radius, phi));
  }
  std::vector<Cx> coeffs(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    Cx acc{};
    for (int j = 0; j < n_samples; ++j) {
      const double phi = 2.0 * std::numbers::pi * j * k / n_samples;
      acc += vals[static_cast<std::size_t>(j)] * std::polar(1.0, -phi);
    }
    coeffs[static_cast<std::size_t>(k)] = acc / (static_cast<double>(n_samples) * std::pow(radius, k));
  }
  return coeffs;
}

namespace detail {

// One Richardson level: D(h) with error c h^2 refined by D(h/2).
inline Cx richardson(Cx coarse, Cx fine) { return (4.0 * fine - coarse) / 3.0; }

}  // namespace detail

// Coefficients c_0..c_3 of f around 0 from real-axis central differences.
template <class F>
std::vector<Cx> taylor_central(F&& f, double h = 0.04) {
  const Cx f0 = f(Cx{0.0, 0.0});
  auto at = [&f](double x) { return f(Cx{x, 0.0}); };

  auto d1 = [&](double step) { return (at(step) - at(-step)) / (2.0 * step); };
  auto d2 = [&](double step) { return (at(step) - 2.0 * f0 + at(-step)) / (step * step); };
  auto d3 = [&](double step) {
    return (at(2.0 * step) - 2.0 * at(step) + 2.0 * at(-step) - at(-2.0 * step)) /
           (2.0 * step * step * step);
  };

  const Cx c1 = detail::richardson(d1(h), d1(h / 2.0));
  const Cx c2 = detail::richardson(d2(h), d2(h / 2.0)) / 2.0;
  const Cx c3 = detail::richardson(d3(h), d3(h / 2.0)) / 6.0;
  return {f0, c1, c2, c3};
}

}  // namespace probe
