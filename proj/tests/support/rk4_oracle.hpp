// Brute-force fixed-step classical RK4 over complex state vectors. Kept free
// of the adaptive machinery on purpose: it cross-checks the production
// integrator through an entirely separate code path.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using Cvec = std::vector<std::complex<double>>;

// Integrates from sample to sample, splitting each gap into steps no longer
// than dt_max so every requested time is hit exactly.
template <class Rhs>
std::vector<Cvec> rk4_fixed(Rhs&& rhs, Cvec y, const std::vector<double>& sample_times,
                            double dt_max) {
  const std::size_t dim = y.size();
  Cvec k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  std::vector<Cvec> out;
  out.reserve(sample_times.size());
  out.push_back(y);

  double t = sample_times.front();
  for (std::size_t s = 1; s < sample_times.size(); ++s) {
    const double gap = sample_times[s] - t;
    const long n_steps = std::max(1L, static_cast<long>(std::ceil(gap / dt_max)));
    const double h = gap / static_cast<double>(n_steps);
    for (long step = 0; step < n_steps; ++step) {
      rhs(t, y, k1);
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      rhs(t + 0.5 * h, tmp, k2);
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      rhs(t + 0.5 * h, tmp, k3);
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
      rhs(t + h, tmp, k4);
      for (std::size_t i = 0; i < dim; ++i)
        y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      t += h;
    }
    t = sample_times[s];  // kill accumulated rounding before the next gap
    out.push_back(y);
  }
  return out;
}

}  // namespace oracle
