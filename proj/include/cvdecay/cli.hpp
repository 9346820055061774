// Copyright 2026 The cvdecay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line front end. Subcommands: thresholds, sweep, evolve, report,
// oracle-check. Exit codes: 0 success, 2 usage or validation, 3 I/O,
// 4 oracle-check failure.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvdecay/analysis.hpp"
#include "cvdecay/channels.hpp"
#include "cvdecay/fock_oracle.hpp"
#include "cvdecay/measures.hpp"
#include "cvdecay/parallel.hpp"

namespace cvdecay::cli {

using json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitOracle = 4;
inline constexpr int kMaxSteps = 1000000;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Nine significant digits, the format of every float the CLI writes.
inline std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

/// A JSON number rounded to nine significant digits.
inline json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(fmt(x));
}

inline json opt_num(const std::optional<double>& x) { return x ? num(*x) : json(nullptr); }

struct RunConfig {
  std::string command;
  std::string scenario;
  double r = 0.0;
  double nbar = 0.0;
  double gamma = 1.0;
  std::optional<double> gamma1, gamma2, nbar1, nbar2;
  std::string variant = "paper-literal";
  int steps = 101;
  int dim = 25;
  std::string output;
  std::string format = "csv";
  std::optional<double> tau;
  std::optional<double> total_t;
  std::vector<double> r_list;
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

inline void validate(const RunConfig& c) {
  require(std::isfinite(c.r) && c.r >= 0.0, "--r must be >= 0");
  require(std::isfinite(c.nbar) && c.nbar >= 0.0, "--nbar must be >= 0");
  require(std::isfinite(c.gamma) && c.gamma >= 0.0, "--gamma must be >= 0");
  for (const auto& g : {c.gamma1, c.gamma2}) {
    require(!g || (std::isfinite(*g) && *g >= 0.0), "--gamma1/--gamma2 must be >= 0");
  }
  for (const auto& n : {c.nbar1, c.nbar2}) {
    require(!n || (std::isfinite(*n) && *n >= 0.0), "--nbar1/--nbar2 must be >= 0");
  }
  require(c.steps >= 2 && c.steps <= kMaxSteps, "--steps must lie in [2, 1000000]");
  require(c.dim >= fock::kMinCutoff && c.dim <= fock::kMaxCutoff, "--dim must lie in [8, 64]");
  require(c.format == "text" || c.format == "csv" || c.format == "json",
          "--format must be csv or json");
  require(!c.tau || (*c.tau >= 0.0 && *c.tau <= 1.0), "--tau must lie in [0, 1]");
  require(!c.total_t || (std::isfinite(*c.total_t) && *c.total_t >= 0.0), "--total-t must be >= 0");
  for (double r : c.r_list) require(std::isfinite(r) && r >= 0.0, "--r-list entries must be >= 0");
}

inline Scenario scenario_of(const RunConfig& c) {
  require(!c.scenario.empty(), "--scenario is required");
  const auto sc = parse_scenario(c.scenario);
  require(sc.has_value(), "unknown scenario '" + c.scenario + "'");
  return *sc;
}

inline ChannelVariant variant_of(const RunConfig& c) {
  const auto v = parse_variant(c.variant);
  require(v.has_value(), "unknown variant '" + c.variant + "'");
  return *v;
}

/// Local scenarios: mode 1 uses --gamma/--nbar unless overridden, mode 2 is
/// undamped unless --gamma2 is given (single-bath default).
inline BathSpec bath_of(const RunConfig& c, Scenario sc) {
  if (!is_local(sc)) {
    require(c.gamma > 0.0, "--gamma must be > 0 for the global bath");
    return GlobalBathSpec{c.gamma, c.nbar};
  }
  LocalBathSpec spec{c.gamma1.value_or(c.gamma), c.nbar1.value_or(c.nbar), c.gamma2.value_or(0.0),
                     c.nbar2.value_or(c.nbar)};
  require(spec.gamma1 > 0.0 || spec.gamma2 > 0.0, "at least one local bath rate must be > 0");
  return spec;
}

inline json bath_json(const BathSpec& bath) {
  if (const auto* g = std::get_if<GlobalBathSpec>(&bath)) {
    return {{"kind", "global"}, {"gamma", num(g->gamma)}, {"nbar", num(g->nbar)}};
  }
  const auto& l = std::get<LocalBathSpec>(bath);
  return {{"kind", "local"},
          {"gamma1", num(l.gamma1)},
          {"nbar1", num(l.nbar1)},
          {"gamma2", num(l.gamma2)},
          {"nbar2", num(l.nbar2)}};
}

inline json matrix_json(const Mat4& m) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) row.push_back(num(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Writes `text` to `path`, or to `out` when the path is empty. A file gets a
/// `<path>.meta.json` sidecar describing the run.
inline void emit(const std::string& text, const RunConfig& c, const json& params, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw IoError("cannot open " + c.output + " for writing");
  f << text;
  if (!f.flush()) throw IoError("write to " + c.output + " failed");
  const std::string meta_path = c.output + ".meta.json";
  std::ofstream m(meta_path, std::ios::binary);
  if (!m) throw IoError("cannot open " + meta_path + " for writing");
  json meta = {{"command", c.command},
               {"parameters", params},
               {"format", c.format},
               {"generated_at", utc_now()},
               {"threads", worker_count()}};
  m << meta.dump(2) << "\n";
  if (!m.flush()) throw IoError("write to " + meta_path + " failed");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands. Each returns an exit code and writes its result to `out`.

inline int cmd_thresholds(const RunConfig& c, std::ostream& out) {
  const double n = c.nbar;
  const auto l = thresholds(ThresholdEnvironment::LocalSingleBath, n);
  const auto g = thresholds(ThresholdEnvironment::Global, n);
  const double tb = tau_b(n);
  const double td = tau_d(n);
  const json params = {{"nbar", num(n)}};
  std::ostringstream s;
  if (c.format == "json") {
    json j = {{"nbar", num(n)},
              {"r_c_local", num(l.r_c)},
              {"r_t_local", num(l.r_t)},
              {"tau_b", num(tb)},
              {"r_c_global", num(g.r_c)},
              {"r_t_global", num(g.r_t)},
              {"tau_d", num(td)}};
    json bands = json::array();
    bands.push_back({{"environment", "identical-local"}, {"r_min", 0}, {"r_max", nullptr},
                     {"better", to_string(Resource::Equivalent)}});
    bands.push_back({{"environment", "single-local"}, {"r_min", 0}, {"r_max", num(l.r_t)},
                     {"better", to_string(Resource::EntanglementBetter)}});
    bands.push_back({{"environment", "single-local"}, {"r_min", num(l.r_t)},
                     {"r_max", nullptr}, {"better", to_string(Resource::SqueezingBetter)}});
    bands.push_back({{"environment", "global"}, {"r_min", 0}, {"r_max", num(g.r_t)},
                     {"better", to_string(Resource::SqueezingBetter)}});
    bands.push_back({{"environment", "global"}, {"r_min", num(g.r_t)}, {"r_max", nullptr},
                     {"better", to_string(Resource::EntanglementBetter)}});
    j["bands"] = bands;
    s << j.dump(2) << "\n";
  } else {
    s << "nbar        " << fmt(n) << "\n"
      << "r_c_local   " << fmt(l.r_c) << "\n"
      << "r_t_local   " << fmt(l.r_t) << "\n"
      << "tau_b       " << fmt(tb) << "\n"
      << "r_c_global  " << fmt(g.r_c) << "\n"
      << "r_t_global  " << fmt(g.r_t) << "\n"
      << "tau_d       " << fmt(td) << "\n"
      << "\n";
    auto row = [&s](const std::string& env, const std::string& range, Resource better) {
      s << std::left << std::setw(17) << env << std::setw(22) << range << to_string(better) << "\n";
    };
    s << std::left << std::setw(17) << "environment" << std::setw(22) << "squeezing range"
      << "better resource\n";
    row("identical-local", "any r", Resource::Equivalent);
    row("single-local", "r < " + fmt(l.r_t), Resource::EntanglementBetter);
    row("single-local", "r >= " + fmt(l.r_t), Resource::SqueezingBetter);
    row("global", "r < " + fmt(g.r_t), Resource::SqueezingBetter);
    row("global", "r >= " + fmt(g.r_t), Resource::EntanglementBetter);
  }
  detail::emit(s.str(), c, params, out);
  return kExitOk;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const Scenario sc = detail::scenario_of(c);
  const ChannelVariant v = detail::variant_of(c);
  const BathSpec bath = detail::bath_of(c, sc);
  const auto curve = sweep(sc, c.r, bath, v, c.steps);
  const json params = {{"scenario", to_string(sc)}, {"r", num(c.r)},       {"variant", to_string(v)},
                       {"steps", c.steps},          {"bath", detail::bath_json(bath)}};
  std::ostringstream s;
  if (c.format == "json") {
    json rows = json::array();
    for (const auto& p : curve.samples) {
      rows.push_back({{"tau", num(p.tau)},
                      {"e_n", num(p.log_negativity)},
                      {"lambda_min", num(p.lambda_min)},
                      {"simon_lhs", num(p.simon_lhs)}});
    }
    s << json{{"parameters", params}, {"samples", rows}}.dump(2) << "\n";
  } else {
    s << "tau,e_n,lambda_min,simon_lhs\n";
    for (const auto& p : curve.samples) {
      s << fmt(p.tau) << ',' << fmt(p.log_negativity) << ',' << fmt(p.lambda_min) << ','
        << fmt(p.simon_lhs) << '\n';
    }
  }
  detail::emit(s.str(), c, params, out);
  return kExitOk;
}

inline int cmd_evolve(const RunConfig& c, std::ostream& out) {
  const Scenario sc = detail::scenario_of(c);
  const ChannelVariant v = detail::variant_of(c);
  const BathSpec bath = detail::bath_of(c, sc);
  detail::require(c.tau.has_value(), "--tau is required");
  const auto state = run_scenario(sc, c.r, bath, TauTime(*c.tau), v);
  const Mat4& m = state.cov().matrix();
  const json params = {{"scenario", to_string(sc)}, {"r", num(c.r)},   {"variant", to_string(v)},
                       {"tau", num(*c.tau)},        {"bath", detail::bath_json(bath)}};
  std::ostringstream s;
  if (c.format == "json") {
    s << json{{"parameters", params}, {"covariance", detail::matrix_json(m)}}.dump(2) << "\n";
  } else {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) s << (j ? "," : "") << fmt(m(i, j));
      s << "\n";
    }
  }
  detail::emit(s.str(), c, params, out);
  return kExitOk;
}

inline json report_json(const DiscrepancyReport& rep) {
  json rows = json::array();
  for (const auto& row : rep.rows) {
    rows.push_back({{"scenario", to_string(row.scenario)},
                    {"variant", row.variant ? json(to_string(*row.variant)) : json(nullptr)},
                    {"nbar", num(row.nbar)},
                    {"r", num(row.r)},
                    {"formula", row.formula},
                    {"numeric", opt_num(row.numeric)},
                    {"closed_form", opt_num(row.closed_form)},
                    {"abs_diff", opt_num(row.abs_diff)},
                    {"match", row.match},
                    {"non_monotone", row.non_monotone}});
  }
  json summary = json::object();
  for (Scenario sc : kAllScenarios) {
    json entry = {{"all_match", rep.all_match(sc)}};
    if (is_local(sc)) {
      json vs = json::array();
      for (ChannelVariant v : rep.matching_variants(sc)) vs.push_back(to_string(v));
      entry["matching_variants"] = vs;
    }
    summary[std::string(to_string(sc))] = entry;
  }
  json grid = json::array();
  for (double r : rep.r_grid) grid.push_back(num(r));
  return {{"nbar", num(rep.nbar)}, {"r_grid", grid}, {"summary", summary}, {"rows", rows}};
}

inline int cmd_report(const RunConfig& c, std::ostream& out) {
  const std::vector<double> grid = c.r_list.empty() ? default_report_r_grid() : c.r_list;
  const auto rep = discrepancy_report(c.nbar, grid);
  json params = {{"nbar", num(c.nbar)}, {"r_grid", report_json(rep)["r_grid"]}};
  detail::emit(report_json(rep).dump(2) + "\n", c, params, out);
  return kExitOk;
}

/// Oracle cross-check: local baths (gamma, nbar on both modes) against the
/// derived local map on a TMSV input, and the global bath against the
/// collective map on the separable squeezed input.
inline int cmd_oracle_check(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<double> times;
  if (c.total_t) {
    times.push_back(*c.total_t);
  } else {
    for (double tau : {0.2, 0.5, 0.8}) times.push_back(tau_to_time(c.gamma, TauTime(tau)));
  }
  detail::require(c.gamma > 0.0, "--gamma must be > 0");
  const LocalBathSpec local = LocalBathSpec::identical(c.gamma, c.nbar);
  const GlobalBathSpec global{c.gamma, c.nbar};

  struct Outcome {
    std::string name;
    std::vector<double> deviation;
    std::string error;
    bool tail_warning = false;
  };
  const auto outcomes = parallel_map(2, [&](std::size_t job) {
    Outcome o;
    o.name = job == 0 ? "local" : "global";
    try {
      const auto prep = job == 0 ? fock::Preparation::TMSV : fock::Preparation::SeparableSqueezed;
      const auto gen = job == 0 ? fock::LindbladGenerator::local(local, c.dim)
                                : fock::LindbladGenerator::global(global, c.dim);
      auto rho = fock::build_state(prep, c.r, c.dim);
      const GaussianState in(fock::covariance_from_density(rho).cov);
      double t_done = 0.0;
      for (double t : times) {
        rho = fock::integrate(rho, gen, t - t_done, fock::max_step(gen));
        t_done = t;
        const auto moments = fock::covariance_from_density(rho);
        o.tail_warning = o.tail_warning || moments.tail_warning;
        const TauTime tau = time_to_tau(c.gamma, t);
        const auto expected = job == 0
                                  ? local_bath_map(in, tau, tau, local, ChannelVariant::LindbladDerived)
                                  : global_bath_map(in, tau, global);
        o.deviation.push_back(max_abs(moments.cov.matrix() - expected.cov().matrix()));
      }
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    return o;
  });

  bool ok = true;
  json params = {{"r", num(c.r)}, {"nbar", num(c.nbar)}, {"gamma", num(c.gamma)}, {"dim", c.dim}};
  json times_json = json::array();
  for (double t : times) times_json.push_back(num(t));
  params["times"] = times_json;
  std::ostringstream s;
  s << "generator  time         tau          max_cov_deviation\n";
  for (const auto& o : outcomes) {
    if (!o.error.empty()) {
      err << "oracle-check (" << o.name << "): " << o.error << "\n";
      ok = false;
      continue;
    }
    if (o.tail_warning) {
      err << "oracle-check (" << o.name << "): tail mass above " << fock::kTailBound
          << " at dim " << c.dim << "; raise --dim\n";
      ok = false;
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
      s << std::left << std::setw(11) << o.name << std::setw(13) << fmt(times[k]) << std::setw(13)
        << fmt(time_to_tau(c.gamma, times[k]).value()) << fmt(o.deviation[k]) << "\n";
      if (!(o.deviation[k] < 1e-3)) ok = false;
    }
  }
  s << (ok ? "PASS" : "FAIL") << "\n";
  detail::emit(s.str(), c, params, out);
  return ok ? kExitOk : kExitOracle;
}

// ---------------------------------------------------------------------------
// Argument handling.

namespace detail {

/// One flag that can also come from the --config file.
struct Field {
  std::string key;
  CLI::Option* opt;
  std::function<void(const json&)> from_json;
};

inline double json_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw UsageError("config key '" + key + "' must be a number");
  return v.get<double>();
}

inline std::string json_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw UsageError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

inline int json_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw UsageError("config key '" + key + "' must be an integer");
  return v.get<int>();
}

class Builder {
 public:
  Builder(CLI::App* app, RunConfig& cfg) : app_(app), cfg_(cfg) {}

  Builder& number(const std::string& key, double& target, const std::string& help) {
    auto* o = app_->add_option("--" + key, target, help);
    fields_.push_back({key, o, [&target, key](const json& v) { target = json_number(v, key); }});
    return *this;
  }
  Builder& optional_number(const std::string& key, std::optional<double>& target,
                           const std::string& help) {
    auto* o = app_->add_option_function<double>(
        "--" + key, [&target](double v) { target = v; }, help);
    fields_.push_back({key, o, [&target, key](const json& v) { target = json_number(v, key); }});
    return *this;
  }
  Builder& integer(const std::string& key, int& target, const std::string& help) {
    auto* o = app_->add_option("--" + key, target, help);
    fields_.push_back({key, o, [&target, key](const json& v) { target = json_int(v, key); }});
    return *this;
  }
  Builder& text(const std::string& key, std::string& target, const std::string& help) {
    auto* o = app_->add_option("--" + key, target, help);
    fields_.push_back({key, o, [&target, key](const json& v) { target = json_string(v, key); }});
    return *this;
  }
  Builder& number_list(const std::string& key, std::vector<double>& target, const std::string& help) {
    auto* o = app_->add_option("--" + key, target, help)->delimiter(',');
    fields_.push_back({key, o, [&target, key](const json& v) {
                         if (!v.is_array()) throw UsageError("config key '" + key + "' must be an array");
                         target.clear();
                         for (const auto& x : v) target.push_back(json_number(x, key));
                       }});
    return *this;
  }
  Builder& output() { return text("output", cfg_.output, "Write to this file (default: stdout)"); }
  Builder& format() { return text("format", cfg_.format, "csv or json"); }
  Builder& bath() {
    number("gamma", cfg_.gamma, "Bath coupling rate");
    optional_number("gamma1", cfg_.gamma1, "Local bath rate on mode 1 (default --gamma)");
    optional_number("gamma2", cfg_.gamma2, "Local bath rate on mode 2 (default 0)");
    optional_number("nbar1", cfg_.nbar1, "Local bath occupation on mode 1 (default --nbar)");
    optional_number("nbar2", cfg_.nbar2, "Local bath occupation on mode 2 (default --nbar)");
    return *this;
  }

  /// Fills every field not given on the command line from the config file.
  void apply_config(const json& cfg) const {
    std::set<std::string> known;
    for (const auto& f : fields_) known.insert(f.key);
    for (const auto& [key, value] : cfg.items()) {
      if (!known.count(key)) throw UsageError("unknown config key '" + key + "'");
    }
    for (const auto& f : fields_) {
      if (f.opt->count() == 0 && cfg.contains(f.key)) f.from_json(cfg.at(f.key));
    }
  }

 private:
  CLI::App* app_;
  RunConfig& cfg_;
  std::vector<Field> fields_;
};

inline json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config file " + path);
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw UsageError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  return j;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-mode Gaussian states under local and global thermal baths"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file mirroring the flags; flags take precedence");

  struct Sub {
    RunConfig cfg;
    std::unique_ptr<detail::Builder> builder;
    CLI::App* app = nullptr;
  };
  std::map<std::string, Sub> subs;
  auto add = [&](const std::string& name, const std::string& help) -> Sub& {
    Sub& s = subs[name];
    s.cfg.command = name;
    s.app = app.add_subcommand(name, help);
    s.builder = std::make_unique<detail::Builder>(s.app, s.cfg);
    return s;
  };

  {
    Sub& s = add("thresholds", "Closed-form thresholds and the resource classification");
    s.cfg.nbar = 4.0;
    s.cfg.format = "text";
    s.builder->number("nbar", s.cfg.nbar, "Bath mean photon number").output().format();
  }
  for (const std::string name : {"sweep", "evolve"}) {
    Sub& s = add(name, name == "sweep" ? "E_N, min variance and Simon LHS over a tau grid (CSV)"
                                       : "Final covariance matrix of one scenario at one tau");
    s.cfg.nbar = 4.0;
    s.builder->text("scenario", s.cfg.scenario, "local-case1, local-case2, global-case1, global-case2")
        .number("r", s.cfg.r, "Squeezing parameter")
        .number("nbar", s.cfg.nbar, "Bath mean photon number")
        .bath()
        .text("variant", s.cfg.variant, "paper-literal, lindblad-derived, threshold-consistent")
        .output()
        .format();
    if (name == "sweep") {
      s.builder->integer("steps", s.cfg.steps, "Grid points on [0, 1]");
    } else {
      s.builder->optional_number("tau", s.cfg.tau, "Dimensionless time in [0, 1]");
    }
  }
  {
    Sub& s = add("report", "Closed-form vs numeric sudden-death times (JSON)");
    s.cfg.nbar = 4.0;
    s.cfg.format = "json";
    s.builder->number("nbar", s.cfg.nbar, "Bath mean photon number")
        .number_list("r-list", s.cfg.r_list, "Comma-separated squeezing values")
        .output();
  }
  {
    Sub& s = add("oracle-check", "Fock-space master equation vs Gaussian maps");
    s.cfg.r = 0.3;
    s.cfg.nbar = 1.0;
    s.cfg.format = "text";
    s.builder->number("r", s.cfg.r, "Squeezing parameter")
        .number("nbar", s.cfg.nbar, "Bath mean photon number")
        .number("gamma", s.cfg.gamma, "Bath coupling rate")
        .integer("dim", s.cfg.dim, "Fock cutoff per mode")
        .optional_number("total-t", s.cfg.total_t, "Single integration time (default: tau 0.2, 0.5, 0.8)")
        .output();
  }

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        out << app.help();
        return kExitOk;
      }
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    for (auto& [name, s] : subs) {
      if (!s.app->parsed()) continue;
      if (!config_path.empty()) s.builder->apply_config(detail::load_config(config_path));
      detail::validate(s.cfg);
      if (name == "thresholds") return cmd_thresholds(s.cfg, out);
      if (name == "sweep") return cmd_sweep(s.cfg, out);
      if (name == "evolve") return cmd_evolve(s.cfg, out);
      if (name == "report") return cmd_report(s.cfg, out);
      return cmd_oracle_check(s.cfg, out, err);
    }
    err << "error: no subcommand\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cvdecay::cli
