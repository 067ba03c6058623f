// Core types shared by every solver: model parameters, time grids, amplitude
// containers, structured errors, and the fast/slow time mapping.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwakit {

using Complex = std::complex<double>;

// ----- errors ---------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid or mutually inconsistent input values.
struct ParamError : Error {
  using Error::Error;
};

// Series order outside the range that has been derived in closed form.
struct UnsupportedOrderError : Error {
  using Error::Error;
};

// Experiment setup that cannot be run (method/model mismatch and the like).
struct ConfigError : Error {
  using Error::Error;
};

// Adaptive integration could not continue; carries the last time reached.
struct IntegrationError : Error {
  IntegrationError(const std::string& msg, double t) : Error(msg), last_good_time(t) {}
  double last_good_time;
};

// Evaluation requested too close to a pole of the solution.
struct PoleError : Error {
  PoleError(const std::string& msg, double pole) : Error(msg), nearest_pole(pole) {}
  double nearest_pole;
};

struct IoError : Error {
  using Error::Error;
};

// ----- model parameters -------------------------------------------------------

enum class Model { rabi, jaynes_cummings };

// Dimensionless detunings of the driven atom in units of the coupling rate:
// delta = (w0 - w)/Omega is the resonance offset, big_delta = (w0 + w)/Omega the
// counter-rotating frequency. The expansion parameter epsilon = 1/big_delta is
// always derived from big_delta, never stored on its own.
struct ModelParams {
  double delta = 0.0;
  double big_delta = 0.0;
  Model model = Model::rabi;

  double epsilon() const { return 1.0 / big_delta; }
};

// Throws ParamError for non-finite delta or non-positive big_delta. When a
// warning sink is supplied it receives a strong-coupling note for epsilon >= 0.5
// (the asymptotic series are unreliable there) and is cleared otherwise.
inline ModelParams validate_params(const ModelParams& p, std::string* warning = nullptr) {
  if (!std::isfinite(p.delta)) throw ParamError("delta must be finite");
  if (!std::isfinite(p.big_delta) || p.big_delta <= 0.0)
    throw ParamError("big_delta must be positive and finite");
  if (warning) {
    warning->clear();
    if (p.epsilon() >= 0.5)
      *warning = "epsilon = " + std::to_string(p.epsilon()) +
                 " >= 0.5: strong coupling, asymptotic expansions degrade here";
  }
  return p;
}

inline ModelParams make_params(Model model, double delta, double big_delta) {
  return validate_params(ModelParams{delta, big_delta, model});
}

// ----- time scales ------------------------------------------------------------

// Fast/slow time pair: t1 = tau/epsilon advances with the counter-rotating
// phase, t2 = tau with the slow flopping envelope, so t2 == epsilon * t1.
struct TwoTimes {
  double t1 = 0.0;
  double t2 = 0.0;
};

inline TwoTimes map_times(double tau, double epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0)
    throw ParamError("map_times: epsilon must be positive");
  if (!(tau >= 0.0)) throw ParamError("map_times: tau must be nonnegative");
  return TwoTimes{tau / epsilon, tau};
}

// ----- state containers -------------------------------------------------------

// Two-level amplitudes; |a|^2 + |b|^2 = 1 for physical states (the closed forms
// only approach this to their order, the integrator enforces it).
struct AmplitudePair {
  Complex a{};
  Complex b{};

  double prob_a() const { return std::norm(a); }
  double prob_b() const { return std::norm(b); }
};

// Truncated ladder amplitudes a_n (atom down, n photons) and b_n (atom up,
// n photons) for n = 0..n_max; amplitudes beyond n_max are treated as zero.
struct LadderState {
  std::vector<Complex> a;
  std::vector<Complex> b;

  int n_max() const { return static_cast<int>(a.size()) - 1; }

  double total_probability() const {
    double s = 0.0;
    for (const Complex& v : a) s += std::norm(v);
    for (const Complex& v : b) s += std::norm(v);
    return s;
  }

  static LadderState zero(int n_max) {
    if (n_max < 1) throw ParamError("LadderState: n_max must be >= 1");
    LadderState s;
    s.a.assign(static_cast<std::size_t>(n_max) + 1, Complex{});
    s.b.assign(static_cast<std::size_t>(n_max) + 1, Complex{});
    return s;
  }

  // The one-photon initial condition a_1(0) = 1 used throughout.
  static LadderState single_photon_ground(int n_max) {
    LadderState s = zero(n_max);
    s.a[1] = Complex{1.0, 0.0};
    return s;
  }
};

// ----- grids ------------------------------------------------------------------

// Uniform sampling grid. The first sample is exactly t_start and the last is
// exactly t_end; t_end == t_start is allowed as a degenerate zero-length run.
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  int n_samples = 2;

  double time(int i) const {
    if (i == n_samples - 1) return t_end;
    return t_start + (t_end - t_start) * static_cast<double>(i) /
                         static_cast<double>(n_samples - 1);
  }

  std::vector<double> times() const {
    std::vector<double> out(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) out[static_cast<std::size_t>(i)] = time(i);
    return out;
  }
};

inline TimeGrid validate_grid(const TimeGrid& g) {
  if (g.n_samples < 2) throw ParamError("grid needs at least 2 samples");
  if (!std::isfinite(g.t_start) || !(g.t_start >= 0.0))
    throw ParamError("grid t_start must be nonnegative");
  if (!std::isfinite(g.t_end) || g.t_end < g.t_start)
    throw ParamError("grid t_end must not precede t_start");
  return g;
}

// ----- method tags and trajectories --------------------------------------------

enum class MethodKind {
  numeric,               // adaptive reference integration of the full equations
  rwa,                   // rotating wave closed form
  single_scale,          // naive series in epsilon, secular at long times
  two_scale,             // fast/slow expansion, still secular at order 2
  renormalized,          // resummed two-scale expansion, bounded at long times
  riccati_numeric,       // adaptive integration of the amplitude-ratio equation
  riccati_renormalized,  // resummed expansion of the amplitude ratio
};

struct Method {
  MethodKind kind = MethodKind::numeric;
  int order = 2;  // truncation order; meaningful for single_scale and two_scale
};

inline std::string method_label(const Method& m) {
  switch (m.kind) {
    case MethodKind::numeric: return "numeric";
    case MethodKind::rwa: return "rwa";
    case MethodKind::single_scale: return "single_scale_" + std::to_string(m.order);
    case MethodKind::two_scale: return "two_scale_" + std::to_string(m.order);
    case MethodKind::renormalized: return "renormalized";
    case MethodKind::riccati_numeric: return "riccati_numeric";
    case MethodKind::riccati_renormalized: return "riccati_renormalized";
  }
  throw ParamError("method_label: unknown method kind");
}

// Everything except the reference integrator is derived at resonance.
inline bool requires_resonance(MethodKind k) { return k != MethodKind::numeric; }

struct Trajectory {
  TimeGrid grid;
  Method method;
  ModelParams params;
  std::vector<AmplitudePair> states;
};

struct LadderTrajectory {
  TimeGrid grid;
  Method method;
  ModelParams params;
  std::vector<LadderState> states;
};

}  // namespace rwakit
