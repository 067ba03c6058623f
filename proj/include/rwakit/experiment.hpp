// Experiment driver: evaluates a set of methods on a shared grid, measures
// each against the adaptive reference integration, and carries everything an
// emitter needs. Initial conditions are fixed by convention: a(0) = 1 for the
// two-level model, a_1(0) = 1 for the ladder.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rwakit/core.hpp"
#include "rwakit/integrator.hpp"
#include "rwakit/jc_series.hpp"
#include "rwakit/rabi_series.hpp"
#include "rwakit/riccati.hpp"

namespace rwakit::experiment {

enum class OutputFormat { csv, json };

inline constexpr double kElisionThreshold = 1e-12;  // ladder channels quieter than this are dropped

struct ExperimentSpec {
  ModelParams params;
  std::vector<Method> methods;
  TimeGrid grid{0.0, 10.0, 2000};
  ode::IntegratorConfig integrator;
  int n_max = 15;       // ladder truncation, Jaynes-Cummings only
  std::string output;   // destination path; empty lets the caller pick
  OutputFormat format = OutputFormat::csv;
};

// One (method, channel) pair sampled on the shared grid. channel is the photon
// number for ladder runs and -1 for the two-level pair. An empty `valid` means
// every sample is usable; Riccati methods flag the segment beyond a pole.
struct ChannelSeries {
  Method method;
  int channel = -1;
  std::vector<Complex> a;
  std::vector<Complex> b;
  std::vector<char> valid;

  bool sample_valid(std::size_t k) const { return valid.empty() || valid[k] != 0; }
};

struct MethodError {
  Method method;
  double max_err_a = 0.0;  // max | |a|^2 - |a_num|^2 |  (ladder: channel 1)
  double tau_at_max_a = 0.0;
  bool has_b = false;      // whether the method models the b channel compared below
  double max_err_b = 0.0;  // ladder: channel 0
  double tau_at_max_b = 0.0;
};

struct ErrorReport {
  std::vector<MethodError> entries;
};

struct RunResult {
  ExperimentSpec spec;
  std::vector<double> taus;
  std::vector<ChannelSeries> series;  // grouped by method, channels ascending
  ErrorReport report;
  std::vector<std::string> notes;
};

namespace detail {

inline void check_methods(const ExperimentSpec& spec) {
  if (spec.methods.empty()) throw ConfigError("run: at least one method is required");
  const bool wants_closed_form =
      std::any_of(spec.methods.begin(), spec.methods.end(),
                  [](const Method& m) { return requires_resonance(m.kind); });
  if (wants_closed_form && spec.params.delta != 0.0)
    throw ConfigError("run: closed-form methods are derived at resonance; "
                      "set delta = 0 or request numeric only");
  if (spec.params.model == Model::jaynes_cummings) {
    for (const Method& m : spec.methods) {
      const bool ok = m.kind == MethodKind::numeric || m.kind == MethodKind::rwa ||
                      m.kind == MethodKind::renormalized;
      if (!ok)
        throw ConfigError("run: method '" + method_label(m) +
                          "' is not available for the ladder model");
    }
    if (spec.n_max < 1) throw ParamError("run: n_max must be >= 1");
  }
}

// Amplitudes in the gauge that makes a real and nonnegative; the ratio u fixes
// the state only up to a global phase, probabilities are gauge free.
inline AmplitudePair gauge_from_ratio(Complex u) {
  const riccati::Probabilities p = riccati::probabilities_from_u(u);
  const double a = std::sqrt(p.pa);
  return AmplitudePair{Complex{a, 0.0}, u * a};
}

inline ChannelSeries two_level_series(const ExperimentSpec& spec, const Method& method,
                                      const std::optional<Trajectory>& numeric) {
  const TimeGrid& grid = spec.grid;
  const double eps = spec.params.epsilon();
  const std::size_t m = static_cast<std::size_t>(grid.n_samples);
  ChannelSeries cs{method, -1, {}, {}, {}};
  cs.a.resize(m);
  cs.b.resize(m);

  switch (method.kind) {
    case MethodKind::numeric: {
      for (std::size_t k = 0; k < m; ++k) {
        cs.a[k] = numeric->states[k].a;
        cs.b[k] = numeric->states[k].b;
      }
      break;
    }
    case MethodKind::rwa: {
      for (std::size_t k = 0; k < m; ++k) {
        const AmplitudePair s = rabi::rwa(grid.time(static_cast<int>(k)));
        cs.a[k] = s.a;
        cs.b[k] = s.b;
      }
      break;
    }
    case MethodKind::single_scale: {
      for (std::size_t k = 0; k < m; ++k) {
        const double tau = grid.time(static_cast<int>(k));
        const AmplitudePair s = rabi::single_scale(tau / eps, eps, method.order);
        cs.a[k] = s.a;
        cs.b[k] = s.b;
      }
      break;
    }
    case MethodKind::two_scale: {
      for (std::size_t k = 0; k < m; ++k) {
        const double tau = grid.time(static_cast<int>(k));
        const AmplitudePair s = rabi::two_scale(map_times(tau, eps), eps, method.order);
        cs.a[k] = s.a;
        cs.b[k] = s.b;
      }
      break;
    }
    case MethodKind::renormalized: {
      for (std::size_t k = 0; k < m; ++k) {
        const double tau = grid.time(static_cast<int>(k));
        const AmplitudePair s = rabi::renormalized(map_times(tau, eps), eps);
        cs.a[k] = s.a;
        cs.b[k] = s.b;
      }
      break;
    }
    case MethodKind::riccati_numeric: {
      const std::vector<riccati::RiccatiState> run =
          riccati::integrate(eps, grid, spec.integrator);
      cs.valid.assign(m, 0);
      for (std::size_t k = 0; k < m; ++k) {
        if (!run[k].valid) continue;
        const AmplitudePair s = gauge_from_ratio(run[k].u);
        cs.a[k] = s.a;
        cs.b[k] = s.b;
        cs.valid[k] = 1;
      }
      break;
    }
    case MethodKind::riccati_renormalized: {
      cs.valid.assign(m, 0);
      for (std::size_t k = 0; k < m; ++k) {
        const double tau = grid.time(static_cast<int>(k));
        try {
          const AmplitudePair s = gauge_from_ratio(riccati::renormalized(tau, eps));
          cs.a[k] = s.a;
          cs.b[k] = s.b;
          cs.valid[k] = 1;
        } catch (const PoleError&) {
          // sample sits inside the pole guard; leave it flagged
        }
      }
      break;
    }
  }
  return cs;
}

}  // namespace detail

inline RunResult run(const ExperimentSpec& spec_in) {
  ExperimentSpec spec = spec_in;
  std::string warning;
  validate_params(spec.params, &warning);
  validate_grid(spec.grid);
  detail::check_methods(spec);

  RunResult out;
  out.spec = spec;
  out.taus = spec.grid.times();
  if (!warning.empty()) out.notes.push_back(warning);

  const bool has_numeric =
      std::any_of(spec.methods.begin(), spec.methods.end(),
                  [](const Method& m) { return m.kind == MethodKind::numeric; });
  const std::size_t m = static_cast<std::size_t>(spec.grid.n_samples);

  if (spec.params.model == Model::rabi) {
    std::optional<Trajectory> numeric;
    if (has_numeric)
      numeric = ode::integrate_rabi(spec.params, AmplitudePair{Complex{1.0, 0.0}, Complex{}},
                                    spec.grid, spec.integrator);
    for (const Method& method : spec.methods)
      out.series.push_back(detail::two_level_series(spec, method, numeric));

    if (has_numeric) {
      const ChannelSeries* ref = nullptr;
      for (const ChannelSeries& cs : out.series)
        if (cs.method.kind == MethodKind::numeric) ref = &cs;
      for (const ChannelSeries& cs : out.series) {
        if (cs.method.kind == MethodKind::numeric) continue;
        MethodError e{cs.method};
        e.has_b = true;
        for (std::size_t k = 0; k < m; ++k) {
          if (!cs.sample_valid(k)) continue;
          const double da = std::abs(std::norm(cs.a[k]) - std::norm(ref->a[k]));
          const double db = std::abs(std::norm(cs.b[k]) - std::norm(ref->b[k]));
          if (da > e.max_err_a) {
            e.max_err_a = da;
            e.tau_at_max_a = out.taus[k];
          }
          if (db > e.max_err_b) {
            e.max_err_b = db;
            e.tau_at_max_b = out.taus[k];
          }
        }
        out.report.entries.push_back(e);
      }
    }
    return out;
  }

  // Ladder model.
  const double eps = spec.params.epsilon();
  std::optional<LadderTrajectory> numeric;
  if (has_numeric)
    numeric = ode::integrate_jc(spec.params, LadderState::single_photon_ground(spec.n_max),
                                spec.grid, spec.integrator);

  for (const Method& method : spec.methods) {
    switch (method.kind) {
      case MethodKind::numeric: {
        std::vector<int> elided;
        for (int n = 0; n <= spec.n_max; ++n) {
          ChannelSeries cs{method, n, {}, {}, {}};
          cs.a.resize(m);
          cs.b.resize(m);
          double loudest = 0.0;
          for (std::size_t k = 0; k < m; ++k) {
            const LadderState& s = numeric->states[k];
            cs.a[k] = s.a[static_cast<std::size_t>(n)];
            cs.b[k] = s.b[static_cast<std::size_t>(n)];
            loudest = std::max({loudest, std::abs(cs.a[k]), std::abs(cs.b[k])});
          }
          if (loudest < kElisionThreshold) {
            elided.push_back(n);
            continue;
          }
          out.series.push_back(std::move(cs));
        }
        if (!elided.empty()) {
          std::string note = "elided quiet ladder channels (max amplitude < 1e-12):";
          for (int n : elided) note += " " + std::to_string(n);
          out.notes.push_back(std::move(note));
        }
        break;
      }
      case MethodKind::rwa: {
        ChannelSeries c0{method, 0, {}, {}, {}};
        ChannelSeries c1{method, 1, {}, {}, {}};
        c0.a.assign(m, Complex{});
        c0.b.resize(m);
        c1.a.resize(m);
        c1.b.assign(m, Complex{});
        for (std::size_t k = 0; k < m; ++k) {
          const AmplitudePair s = jc::rwa(out.taus[k]);
          c1.a[k] = s.a;  // a_1
          c0.b[k] = s.b;  // b_0
        }
        out.series.push_back(std::move(c0));
        out.series.push_back(std::move(c1));
        break;
      }
      case MethodKind::renormalized: {
        // Only a_1 is resummed; b_1 vanishes identically by parity.
        ChannelSeries c1{method, 1, {}, {}, {}};
        c1.a.resize(m);
        c1.b.assign(m, Complex{});
        for (std::size_t k = 0; k < m; ++k)
          c1.a[k] = jc::renormalized_a1(map_times(out.taus[k], eps), eps);
        out.series.push_back(std::move(c1));
        break;
      }
      default:
        throw ConfigError("run: unexpected ladder method");  // unreachable, checked above
    }
  }

  if (has_numeric) {
    const ChannelSeries* ref_a1 = nullptr;
    const ChannelSeries* ref_b0 = nullptr;
    for (const ChannelSeries& cs : out.series) {
      if (cs.method.kind != MethodKind::numeric) continue;
      if (cs.channel == 1) ref_a1 = &cs;
      if (cs.channel == 0) ref_b0 = &cs;
    }
    for (const Method& method : spec.methods) {
      if (method.kind == MethodKind::numeric) continue;
      MethodError e{method};
      for (const ChannelSeries& cs : out.series) {
        if (cs.method.kind != method.kind) continue;
        if (cs.channel == 1 && ref_a1) {
          for (std::size_t k = 0; k < m; ++k) {
            const double da = std::abs(std::norm(cs.a[k]) - std::norm(ref_a1->a[k]));
            if (da > e.max_err_a) {
              e.max_err_a = da;
              e.tau_at_max_a = out.taus[k];
            }
          }
        }
        if (cs.channel == 0 && ref_b0 && method.kind == MethodKind::rwa) {
          e.has_b = true;
          for (std::size_t k = 0; k < m; ++k) {
            const double db = std::abs(std::norm(cs.b[k]) - std::norm(ref_b0->b[k]));
            if (db > e.max_err_b) {
              e.max_err_b = db;
              e.tau_at_max_b = out.taus[k];
            }
          }
        }
      }
      out.report.entries.push_back(e);
    }
  }
  return out;
}

// ----- epsilon sweeps ---------------------------------------------------------------

struct SweepCell {
  Method method;
  double epsilon = 0.0;
  double max_err = 0.0;  // max | |a|^2 - |a_num|^2 | over the window
  double tau_at_max = 0.0;
  bool has_ratio = false;
  double ratio_to_prev = 0.0;  // previous cell's error over this one, same method
};

struct SweepResult {
  ExperimentSpec base;
  std::vector<double> epsilons;
  std::vector<SweepCell> cells;  // grouped by method, epsilons in given order
};

inline SweepResult sweep_epsilon(const ExperimentSpec& base, const std::vector<double>& epsilons) {
  if (epsilons.size() < 2)
    throw ParamError("sweep_epsilon: need at least two epsilon values to form ratios");
  for (double eps : epsilons)
    if (!std::isfinite(eps) || eps <= 0.0)
      throw ParamError("sweep_epsilon: epsilon values must be positive");

  std::vector<Method> swept;
  for (const Method& mth : base.methods)
    if (mth.kind != MethodKind::numeric) swept.push_back(mth);
  if (swept.empty())
    throw ConfigError("sweep_epsilon: need at least one closed-form method to sweep");

  SweepResult out;
  out.base = base;
  out.epsilons = epsilons;

  // One run per epsilon; every swept method shares the reference integration.
  std::vector<ErrorReport> reports;
  for (double eps : epsilons) {
    ExperimentSpec spec = base;
    spec.params.big_delta = 1.0 / eps;
    spec.methods.clear();
    spec.methods.push_back(Method{MethodKind::numeric});
    spec.methods.insert(spec.methods.end(), swept.begin(), swept.end());
    reports.push_back(run(spec).report);
  }

  for (std::size_t mi = 0; mi < swept.size(); ++mi) {
    for (std::size_t ei = 0; ei < epsilons.size(); ++ei) {
      const MethodError& e = reports[ei].entries[mi];
      SweepCell cell{swept[mi], epsilons[ei], e.max_err_a, e.tau_at_max_a, false, 0.0};
      if (ei > 0) {
        const SweepCell& prev = out.cells.back();
        cell.has_ratio = true;
        cell.ratio_to_prev = prev.max_err / cell.max_err;
      }
      out.cells.push_back(cell);
    }
  }
  return out;
}

// ----- figure presets ----------------------------------------------------------------

// Canned parameter sets for the eight standard comparison plots.
inline ExperimentSpec figure_preset(int n) {
  ExperimentSpec s;
  s.grid.n_samples = 2000;
  const Method numeric{MethodKind::numeric};
  const Method rwa{MethodKind::rwa};
  const Method single2{MethodKind::single_scale, 2};
  const Method two2{MethodKind::two_scale, 2};
  const Method renorm{MethodKind::renormalized};
  const Method riccati_rg{MethodKind::riccati_renormalized};

  switch (n) {
    case 1:  // rotating wave vs full dynamics, weak coupling
      s.params = make_params(Model::rabi, 0.0, 50.0);
      s.methods = {numeric, rwa};
      s.grid.t_end = 10.0;
      break;
    case 2:  // naive series fails on the flopping time scale
      s.params = make_params(Model::rabi, 0.0, 50.0);
      s.methods = {numeric, rwa, single2};
      s.grid.t_end = 3.0;
      break;
    case 3:  // two-scale expansion and its secular growth
      s.params = make_params(Model::rabi, 0.0, 10.0);
      s.methods = {numeric, rwa, two2};
      s.grid.t_end = 150.0;
      break;
    case 4:  // renormalized resummation stays bounded where two-scale grows
      s.params = make_params(Model::rabi, 0.0, 10.0);
      s.methods = {numeric, two2, renorm};
      s.grid.t_end = 150.0;
      break;
    case 5:  // ladder: rotating wave vs full dynamics
      s.params = make_params(Model::jaynes_cummings, 0.0, 10.0);
      s.methods = {numeric, rwa};
      s.grid.t_end = 100.0;
      break;
    case 6:  // ladder: renormalized expansion at long times
      s.params = make_params(Model::jaynes_cummings, 0.0, 10.0);
      s.methods = {numeric, rwa, renorm};
      s.grid.t_end = 100.0;
      break;
    case 7:  // ladder at strong coupling, where the expansion breaks down
      s.params = make_params(Model::jaynes_cummings, 0.0, 2.0);
      s.methods = {numeric, renorm};
      s.grid.t_end = 10.0;
      s.n_max = 30;  // strong coupling populates higher rungs; 15 is not converged here
      break;
    case 8:  // amplitude-ratio route inside the first pole-free window
      s.params = make_params(Model::rabi, 0.0, 10.0);
      s.methods = {numeric, rwa, riccati_rg};
      s.grid.t_end = 1.4;
      break;
    default:
      throw ParamError("figure_preset: figure number must be 1..8");
  }
  return s;
}

}  // namespace rwakit::experiment
