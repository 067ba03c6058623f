// Command line front end: runs two-level / ladder comparisons, the
// amplitude-ratio route, canned figure presets, and epsilon convergence
// sweeps, writing CSV or JSON tables.
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rwakit/rwakit.hpp"

namespace {

using namespace rwakit;

struct CommonOpts {
  double big_delta = 10.0;
  double epsilon = 0.0;  // alternative way to give big_delta
  double delta = 0.0;
  double t_max = 10.0;
  int samples = 2000;
  int order = 2;
  std::string methods;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int n_max = 15;
  std::string output;
  std::string format = "csv";
};

void add_common_flags(CLI::App* sub, CommonOpts& o, bool with_methods) {
  auto* bd = sub->add_option("--big-delta", o.big_delta,
                             "counter-rotating frequency (w0 + w)/Omega");
  auto* ep = sub->add_option("--epsilon", o.epsilon, "expansion parameter 1/big_delta");
  bd->excludes(ep);
  ep->excludes(bd);
  sub->add_option("--delta", o.delta, "resonance offset (w0 - w)/Omega, numeric only");
  sub->add_option("--t-max", o.t_max, "end of the time window, flopping units");
  sub->add_option("--samples", o.samples, "number of uniform grid samples");
  if (with_methods) {
    sub->add_option("--methods", o.methods,
                    "comma separated: numeric,rwa,single_scale,two_scale,renormalized,"
                    "riccati,riccati_numeric");
    sub->add_option("--order", o.order, "truncation order for the scale expansions (0..2)");
  }
  sub->add_option("--rel-tol", o.rel_tol, "integrator relative tolerance");
  sub->add_option("--abs-tol", o.abs_tol, "integrator absolute tolerance");
  sub->add_option("--output", o.output, "output file path");
  sub->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

experiment::OutputFormat parse_format(const std::string& f) {
  return f == "json" ? experiment::OutputFormat::json : experiment::OutputFormat::csv;
}

std::vector<Method> parse_methods(const std::string& text, int order,
                                  const std::vector<Method>& fallback) {
  if (text.empty()) return fallback;
  std::vector<Method> out;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    if (name == "numeric") {
      out.push_back(Method{MethodKind::numeric});
    } else if (name == "rwa") {
      out.push_back(Method{MethodKind::rwa});
    } else if (name == "single_scale") {
      out.push_back(Method{MethodKind::single_scale, order});
    } else if (name == "two_scale") {
      out.push_back(Method{MethodKind::two_scale, order});
    } else if (name == "renormalized") {
      out.push_back(Method{MethodKind::renormalized});
    } else if (name == "riccati" || name == "riccati_renormalized") {
      out.push_back(Method{MethodKind::riccati_renormalized});
    } else if (name == "riccati_numeric") {
      out.push_back(Method{MethodKind::riccati_numeric});
    } else {
      throw ParamError("unknown method '" + name + "'");
    }
  }
  if (out.empty()) throw ParamError("no methods given");
  return out;
}

std::string resolve_output(const std::string& given, const std::string& default_name) {
  if (!given.empty()) return given;
  if (const char* dir = std::getenv("RWAKIT_OUTPUT_DIR"); dir && *dir)
    return std::string(dir) + "/" + default_name;
  return default_name;
}

double resolved_big_delta(const CLI::App* sub, const CommonOpts& o) {
  if (sub->count("--epsilon") > 0) {
    if (!(o.epsilon > 0.0)) throw ParamError("--epsilon must be positive");
    return 1.0 / o.epsilon;
  }
  return o.big_delta;
}

experiment::ExperimentSpec build_spec(const CLI::App* sub, const CommonOpts& o, Model model,
                                      const std::vector<Method>& default_methods) {
  experiment::ExperimentSpec spec;
  spec.params = ModelParams{o.delta, resolved_big_delta(sub, o), model};
  spec.methods = parse_methods(o.methods, o.order, default_methods);
  spec.grid = TimeGrid{0.0, o.t_max, o.samples};
  spec.integrator.rel_tol = o.rel_tol;
  spec.integrator.abs_tol = o.abs_tol;
  spec.n_max = o.n_max;
  spec.format = parse_format(o.format);
  return spec;
}

void print_summary(const experiment::RunResult& r, const std::string& path) {
  for (const std::string& note : r.notes) std::cerr << "note: " << note << "\n";
  std::cout << "wrote " << path << "\n";
  if (r.report.entries.empty()) return;
  std::cout << "max deviation from the numeric reference:\n";
  for (const experiment::MethodError& e : r.report.entries) {
    std::cout << "  " << method_label(e.method) << ": |a|^2 err " << e.max_err_a
              << " at tau = " << e.tau_at_max_a;
    if (e.has_b) std::cout << ", |b|^2 err " << e.max_err_b << " at tau = " << e.tau_at_max_b;
    std::cout << "\n";
  }
}

int run_and_emit(const experiment::ExperimentSpec& spec, const std::string& path) {
  const experiment::RunResult result = experiment::run(spec);
  experiment::emit(result, path);
  print_summary(result, path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonant two-level and Jaynes-Cummings dynamics: closed-form "
               "approximants measured against an adaptive reference integrator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read option defaults from a key=value file");

  CommonOpts rabi_opts;
  CLI::App* rabi_cmd = app.add_subcommand("rabi", "two-level model comparison");
  add_common_flags(rabi_cmd, rabi_opts, true);

  CommonOpts jc_opts;
  jc_opts.t_max = 20.0;
  CLI::App* jc_cmd = app.add_subcommand("jc", "Jaynes-Cummings ladder comparison");
  add_common_flags(jc_cmd, jc_opts, true);
  jc_cmd->add_option("--n-max", jc_opts.n_max, "ladder truncation (photon number)");

  CommonOpts ric_opts;
  ric_opts.t_max = 1.4;
  CLI::App* ric_cmd = app.add_subcommand("riccati", "amplitude-ratio route, two-level model");
  add_common_flags(ric_cmd, ric_opts, false);

  CommonOpts fig_opts;
  int fig_number = 0;
  CLI::App* fig_cmd = app.add_subcommand("figure", "run a canned comparison preset");
  fig_cmd->add_option("n", fig_number, "figure number, 1..8")->required();
  add_common_flags(fig_cmd, fig_opts, false);
  fig_cmd->add_option("--n-max", fig_opts.n_max, "ladder truncation (photon number)");

  CommonOpts sweep_opts;
  sweep_opts.t_max = 5.0;
  std::string sweep_model = "rabi";
  std::vector<double> sweep_epsilons;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "convergence table across epsilon values");
  add_common_flags(sweep_cmd, sweep_opts, true);
  sweep_cmd->add_option("--model", sweep_model, "rabi or jc")
      ->check(CLI::IsMember({"rabi", "jc"}));
  sweep_cmd->add_option("--epsilons", sweep_epsilons, "epsilon values, comma separated")
      ->delimiter(',')
      ->required();
  sweep_cmd->add_option("--n-max", sweep_opts.n_max, "ladder truncation (photon number)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (rabi_cmd->parsed()) {
      const std::vector<Method> defaults{Method{MethodKind::numeric}, Method{MethodKind::rwa},
                                         Method{MethodKind::renormalized}};
      const auto spec = build_spec(rabi_cmd, rabi_opts, Model::rabi, defaults);
      return run_and_emit(spec, resolve_output(rabi_opts.output, "rabi." + rabi_opts.format));
    }
    if (jc_cmd->parsed()) {
      const std::vector<Method> defaults{Method{MethodKind::numeric}, Method{MethodKind::rwa},
                                         Method{MethodKind::renormalized}};
      const auto spec = build_spec(jc_cmd, jc_opts, Model::jaynes_cummings, defaults);
      return run_and_emit(spec, resolve_output(jc_opts.output, "jc." + jc_opts.format));
    }
    if (ric_cmd->parsed()) {
      const std::vector<Method> defaults{Method{MethodKind::numeric},
                                         Method{MethodKind::riccati_numeric},
                                         Method{MethodKind::riccati_renormalized}};
      auto spec = build_spec(ric_cmd, ric_opts, Model::rabi, defaults);
      return run_and_emit(spec, resolve_output(ric_opts.output, "riccati." + ric_opts.format));
    }
    if (fig_cmd->parsed()) {
      experiment::ExperimentSpec spec = experiment::figure_preset(fig_number);
      if (fig_cmd->count("--big-delta") > 0 || fig_cmd->count("--epsilon") > 0)
        spec.params.big_delta = resolved_big_delta(fig_cmd, fig_opts);
      if (fig_cmd->count("--delta") > 0) spec.params.delta = fig_opts.delta;
      if (fig_cmd->count("--t-max") > 0) spec.grid.t_end = fig_opts.t_max;
      if (fig_cmd->count("--samples") > 0) spec.grid.n_samples = fig_opts.samples;
      if (fig_cmd->count("--rel-tol") > 0) spec.integrator.rel_tol = fig_opts.rel_tol;
      if (fig_cmd->count("--abs-tol") > 0) spec.integrator.abs_tol = fig_opts.abs_tol;
      if (fig_cmd->count("--n-max") > 0) spec.n_max = fig_opts.n_max;
      spec.format = parse_format(fig_opts.format);
      const std::string name = "fig" + std::to_string(fig_number) + "." + fig_opts.format;
      return run_and_emit(spec, resolve_output(fig_opts.output, name));
    }
    if (sweep_cmd->parsed()) {
      const Model model = sweep_model == "jc" ? Model::jaynes_cummings : Model::rabi;
      const std::vector<Method> defaults{Method{MethodKind::renormalized}};
      experiment::ExperimentSpec base = build_spec(sweep_cmd, sweep_opts, model, defaults);
      base.params.big_delta = 1.0 / sweep_epsilons.front();  // placeholder, swept per cell
      const experiment::SweepResult result = experiment::sweep_epsilon(base, sweep_epsilons);
      const std::string path =
          resolve_output(sweep_opts.output, "sweep." + sweep_opts.format);
      experiment::emit(result, parse_format(sweep_opts.format), path);
      std::cout << "wrote " << path << "\n";
      for (const experiment::SweepCell& cell : result.cells) {
        std::cout << "  " << method_label(cell.method) << " eps = " << cell.epsilon
                  << ": max |a|^2 err " << cell.max_err;
        if (cell.has_ratio) std::cout << " (ratio to previous " << cell.ratio_to_prev << ")";
        std::cout << "\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
