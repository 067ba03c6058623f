// Serialization of run and sweep results. CSV is the plotting workhorse:
// fixed column order, shortest round-trip decimal text, LF line endings, and
// byte-identical output for identical inputs. JSON mirrors the same records.
#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <string>
#include <system_error>

#include <json.hpp>

#include "rwakit/core.hpp"
#include "rwakit/experiment.hpp"

namespace rwakit::experiment {

// Shortest decimal text that parses back to exactly the same double.
inline std::string format_double(double v) {
  std::array<char, 32> buf;
  const std::to_chars_result r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

namespace detail {

inline void append_record_fields(std::string& out, double tau, const std::string& label,
                                 const Complex& a, const Complex& b) {
  out += format_double(tau);
  out += ',';
  out += label;
  out += ',';
  out += format_double(a.real());
  out += ',';
  out += format_double(a.imag());
  out += ',';
  out += format_double(b.real());
  out += ',';
  out += format_double(b.imag());
  out += ',';
  out += format_double(std::norm(a));
  out += ',';
  out += format_double(std::norm(b));
}

// Channel series grouped per method, preserving method order.
inline std::vector<std::pair<std::size_t, std::size_t>> method_blocks(const RunResult& r) {
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  std::size_t begin = 0;
  while (begin < r.series.size()) {
    std::size_t end = begin + 1;
    while (end < r.series.size() &&
           method_label(r.series[end].method) == method_label(r.series[begin].method))
      ++end;
    blocks.emplace_back(begin, end);
    begin = end;
  }
  return blocks;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace detail

inline std::string to_csv(const RunResult& r) {
  const bool ladder = r.spec.params.model == Model::jaynes_cummings;
  std::string out = "tau,method,re_a,im_a,re_b,im_b,prob_a,prob_b";
  if (ladder) out += ",n";
  out += '\n';

  for (const auto& [begin, end] : detail::method_blocks(r)) {
    const std::string label = method_label(r.series[begin].method);
    for (std::size_t k = 0; k < r.taus.size(); ++k) {
      for (std::size_t si = begin; si < end; ++si) {
        const ChannelSeries& cs = r.series[si];
        if (!cs.sample_valid(k)) continue;
        detail::append_record_fields(out, r.taus[k], label, cs.a[k], cs.b[k]);
        if (ladder) {
          out += ',';
          out += std::to_string(cs.channel);
        }
        out += '\n';
      }
    }
  }
  return out;
}

inline std::string to_csv(const SweepResult& r) {
  std::string out = "method,epsilon,max_err_prob_a,tau_at_max,ratio_to_prev\n";
  for (const SweepCell& cell : r.cells) {
    out += method_label(cell.method);
    out += ',';
    out += format_double(cell.epsilon);
    out += ',';
    out += format_double(cell.max_err);
    out += ',';
    out += format_double(cell.tau_at_max);
    out += ',';
    if (cell.has_ratio) out += format_double(cell.ratio_to_prev);
    out += '\n';
  }
  return out;
}

inline nlohmann::json to_json(const RunResult& r) {
  const bool ladder = r.spec.params.model == Model::jaynes_cummings;
  nlohmann::json j;
  j["model"] = ladder ? "jaynes_cummings" : "rabi";
  j["params"] = {{"delta", r.spec.params.delta},
                 {"big_delta", r.spec.params.big_delta},
                 {"epsilon", r.spec.params.epsilon()}};
  j["grid"] = {{"t_start", r.spec.grid.t_start},
               {"t_end", r.spec.grid.t_end},
               {"n_samples", r.spec.grid.n_samples}};
  if (ladder) j["n_max"] = r.spec.n_max;

  nlohmann::json methods = nlohmann::json::array();
  for (const Method& m : r.spec.methods) methods.push_back(method_label(m));
  j["methods"] = methods;

  nlohmann::json records = nlohmann::json::array();
  for (const auto& [begin, end] : detail::method_blocks(r)) {
    const std::string label = method_label(r.series[begin].method);
    for (std::size_t k = 0; k < r.taus.size(); ++k) {
      for (std::size_t si = begin; si < end; ++si) {
        const ChannelSeries& cs = r.series[si];
        if (!cs.sample_valid(k)) continue;
        nlohmann::json rec = {{"tau", r.taus[k]},         {"method", label},
                              {"re_a", cs.a[k].real()},   {"im_a", cs.a[k].imag()},
                              {"re_b", cs.b[k].real()},   {"im_b", cs.b[k].imag()},
                              {"prob_a", std::norm(cs.a[k])},
                              {"prob_b", std::norm(cs.b[k])}};
        if (ladder) rec["n"] = cs.channel;
        records.push_back(std::move(rec));
      }
    }
  }
  j["records"] = std::move(records);

  nlohmann::json report = nlohmann::json::array();
  for (const MethodError& e : r.report.entries) {
    nlohmann::json entry = {{"method", method_label(e.method)},
                            {"max_err_prob_a", e.max_err_a},
                            {"tau_at_max_a", e.tau_at_max_a}};
    if (e.has_b) {
      entry["max_err_prob_b"] = e.max_err_b;
      entry["tau_at_max_b"] = e.tau_at_max_b;
    }
    report.push_back(std::move(entry));
  }
  j["error_report"] = std::move(report);
  j["notes"] = r.notes;
  return j;
}

inline nlohmann::json to_json(const SweepResult& r) {
  nlohmann::json j;
  j["epsilons"] = r.epsilons;
  nlohmann::json cells = nlohmann::json::array();
  for (const SweepCell& cell : r.cells) {
    nlohmann::json c = {{"method", method_label(cell.method)},
                        {"epsilon", cell.epsilon},
                        {"max_err_prob_a", cell.max_err},
                        {"tau_at_max", cell.tau_at_max}};
    if (cell.has_ratio) c["ratio_to_prev"] = cell.ratio_to_prev;
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  return j;
}

template <class Result>
void emit(const Result& result, OutputFormat format, const std::string& path) {
  if (format == OutputFormat::csv) {
    detail::write_file(path, to_csv(result));
  } else {
    detail::write_file(path, to_json(result).dump(2) + "\n");
  }
}

inline void emit(const RunResult& result, const std::string& path) {
  emit(result, result.spec.format, path);
}

}  // namespace rwakit::experiment
