// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#include "dboost/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dboost/selfcheck.hpp"
#include "dboost/serialize.hpp"

namespace dboost::cli {
namespace {

using nlohmann::json;

constexpr const char* kAppDescription =
    "decision-focused gradient boosting over convex quadratic cone programs";

std::string edge_token(EdgeExponent e) {
  return e == EdgeExponent::kAsPrinted ? "as-printed" : "adjacent-favored";
}

EdgeExponent edge_from_token(const std::string& token) {
  if (token == "as-printed") return EdgeExponent::kAsPrinted;
  if (token == "adjacent-favored") return EdgeExponent::kAdjacentFavored;
  throw std::invalid_argument("unknown --edge-exponent value '" + token +
                              "' (expected as-printed or adjacent-favored)");
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// ---------------------------------------------------------------------------
// Flag plumbing
// ---------------------------------------------------------------------------

// Raw flag values; defaults mirror RunConfig so a bare `run` is valid.
struct RunFlags {
  std::string problem = "qp";
  double tau = 0.0;
  int depth = 1;
  long long m_train = 100;
  long long m_test = 100;
  int trials = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> methods;  // Empty selects every method.
  std::string edge_exponent = "as-printed";
  std::string out_dir = "results";
  bool plot = false;
  int jobs = 1;
  bool allow_any_tau = false;
  std::string config_path;
  int max_iter = SolverSettings{}.max_iter;
  double tol_abs = SolverSettings{}.tol_abs;
  double tol_rel = SolverSettings{}.tol_rel;
  int check_every = SolverSettings{}.check_every;
};

// Options whose explicit use takes precedence over config-file values.
struct RunOptionSet {
  CLI::Option* problem = nullptr;
  CLI::Option* tau = nullptr;
  CLI::Option* depth = nullptr;
  CLI::Option* m_train = nullptr;
  CLI::Option* m_test = nullptr;
  CLI::Option* trials = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* methods = nullptr;
  CLI::Option* edge_exponent = nullptr;
  CLI::Option* out_dir = nullptr;
  CLI::Option* plot = nullptr;
  CLI::Option* jobs = nullptr;
  CLI::Option* allow_any_tau = nullptr;
  CLI::Option* max_iter = nullptr;
  CLI::Option* tol_abs = nullptr;
  CLI::Option* tol_rel = nullptr;
  CLI::Option* check_every = nullptr;
};

CLI::App* add_run_command(CLI::App& app, RunFlags& flags, RunOptionSet& opts) {
  CLI::App* cmd = app.add_subcommand("run", "run benchmark trials and write results");
  opts.problem = cmd->add_option("--problem", flags.problem,
                                 "problem family: network | qp | portfolio | motivating");
  opts.tau = cmd->add_option("--tau", flags.tau, "noise level; 0, 0.5 or 1 unless --allow-any-tau");
  opts.depth = cmd->add_option("--depth", flags.depth, "tree depth, 0-2");
  opts.m_train = cmd->add_option("--m-train", flags.m_train, "training samples per trial");
  opts.m_test = cmd->add_option("--m-test", flags.m_test, "test samples per trial");
  opts.trials = cmd->add_option("--trials", flags.trials, "number of independent trials");
  opts.seed = cmd->add_option("--seed", flags.seed, "master seed");
  opts.methods = cmd->add_option("--methods", flags.methods,
                                 "comma-separated subset of "
                                 "cart,cart_forest,spot,spot_forest,mse_boost,dboost")
                     ->delimiter(',');
  opts.edge_exponent =
      cmd->add_option("--edge-exponent", flags.edge_exponent,
                      "network edge-probability exponent: as-printed | adjacent-favored");
  opts.out_dir = cmd->add_option("--out", flags.out_dir, "output directory");
  opts.plot = cmd->add_flag("--plot", flags.plot, "also write an SVG box plot of test excess");
  opts.jobs = cmd->add_option("--jobs", flags.jobs, "parallel workers across trials");
  opts.allow_any_tau =
      cmd->add_flag("--allow-any-tau", flags.allow_any_tau, "accept tau outside {0, 0.5, 1}");
  cmd->add_option("--config", flags.config_path,
                  "JSON config file; explicitly passed flags take precedence");
  opts.max_iter = cmd->add_option("--max-iter", flags.max_iter, "solver iteration cap");
  opts.tol_abs = cmd->add_option("--tol-abs", flags.tol_abs, "solver absolute tolerance");
  opts.tol_rel = cmd->add_option("--tol-rel", flags.tol_rel, "solver relative tolerance");
  opts.check_every =
      cmd->add_option("--check-every", flags.check_every, "solver convergence check interval");
  return cmd;
}

bool unset(const CLI::Option* option) { return option == nullptr || option->count() == 0; }

void merge_config_file(const std::string& path, const RunOptionSet& opts, RunFlags& flags) {
  const json j = json::parse(load_text_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::invalid_argument("config file " + path + " is not a JSON object");
  }
  static const std::vector<std::string> known = {
      "format", "version",       "problem", "tau",  "depth", "m_train",       "m_test", "trials",
      "seed",   "methods",       "edge_exponent",   "out",   "plot",          "jobs",
      "allow_any_tau",           "solver"};
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw std::invalid_argument("config file " + path + ": unknown key '" + item.key() + "'");
    }
  }
  try {
    if (j.contains("format") && j.at("format").get<std::string>() != "dboost-config") {
      throw std::invalid_argument("config file " + path + ": format must be 'dboost-config'");
    }
    if (j.contains("version") && j.at("version").get<int>() != 1) {
      throw std::invalid_argument("config file " + path + ": unsupported version");
    }
    if (unset(opts.problem) && j.contains("problem")) {
      flags.problem = j.at("problem").get<std::string>();
    }
    if (unset(opts.tau) && j.contains("tau")) flags.tau = j.at("tau").get<double>();
    if (unset(opts.depth) && j.contains("depth")) flags.depth = j.at("depth").get<int>();
    if (unset(opts.m_train) && j.contains("m_train")) {
      flags.m_train = j.at("m_train").get<long long>();
    }
    if (unset(opts.m_test) && j.contains("m_test")) flags.m_test = j.at("m_test").get<long long>();
    if (unset(opts.trials) && j.contains("trials")) flags.trials = j.at("trials").get<int>();
    if (unset(opts.seed) && j.contains("seed")) flags.seed = j.at("seed").get<std::uint64_t>();
    if (unset(opts.methods) && j.contains("methods")) {
      flags.methods = j.at("methods").get<std::vector<std::string>>();
    }
    if (unset(opts.edge_exponent) && j.contains("edge_exponent")) {
      flags.edge_exponent = j.at("edge_exponent").get<std::string>();
    }
    if (unset(opts.out_dir) && j.contains("out")) flags.out_dir = j.at("out").get<std::string>();
    if (unset(opts.plot) && j.contains("plot")) flags.plot = j.at("plot").get<bool>();
    if (unset(opts.jobs) && j.contains("jobs")) flags.jobs = j.at("jobs").get<int>();
    if (unset(opts.allow_any_tau) && j.contains("allow_any_tau")) {
      flags.allow_any_tau = j.at("allow_any_tau").get<bool>();
    }
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      if (!s.is_object()) {
        throw std::invalid_argument("config file " + path + ": 'solver' must be an object");
      }
      static const std::vector<std::string> solver_keys = {"max_iter", "tol_abs", "tol_rel",
                                                           "check_every"};
      for (const auto& item : s.items()) {
        if (std::find(solver_keys.begin(), solver_keys.end(), item.key()) == solver_keys.end()) {
          throw std::invalid_argument("config file " + path + ": unknown solver key '" +
                                      item.key() + "'");
        }
      }
      if (unset(opts.max_iter) && s.contains("max_iter")) {
        flags.max_iter = s.at("max_iter").get<int>();
      }
      if (unset(opts.tol_abs) && s.contains("tol_abs")) {
        flags.tol_abs = s.at("tol_abs").get<double>();
      }
      if (unset(opts.tol_rel) && s.contains("tol_rel")) {
        flags.tol_rel = s.at("tol_rel").get<double>();
      }
      if (unset(opts.check_every) && s.contains("check_every")) {
        flags.check_every = s.at("check_every").get<int>();
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument("config file " + path + ": " + e.what());
  }
}

RunConfig resolve_run_config(RunFlags flags, const RunOptionSet& opts) {
  if (!flags.config_path.empty()) merge_config_file(flags.config_path, opts, flags);

  RunConfig config;
  config.spec.problem = problem_from_token(flags.problem);
  config.spec.tau = flags.tau;
  config.spec.depth = flags.depth;
  config.spec.m_train = static_cast<Eigen::Index>(flags.m_train);
  config.spec.m_test = static_cast<Eigen::Index>(flags.m_test);
  config.spec.trials = flags.trials;
  config.spec.seed = flags.seed;
  if (!flags.methods.empty()) {
    std::vector<Method> requested;
    requested.reserve(flags.methods.size());
    for (const std::string& token : flags.methods) requested.push_back(method_from_token(token));
    config.spec.methods.clear();
    for (Method m : all_methods()) {  // Canonical order, duplicates collapsed.
      if (std::find(requested.begin(), requested.end(), m) != requested.end()) {
        config.spec.methods.push_back(m);
      }
    }
  }
  config.spec.edge_exponent = edge_from_token(flags.edge_exponent);
  config.out_dir = flags.out_dir;
  config.plot = flags.plot;
  config.jobs = flags.jobs;
  config.allow_any_tau = flags.allow_any_tau;
  config.solver.max_iter = flags.max_iter;
  config.solver.tol_abs = flags.tol_abs;
  config.solver.tol_rel = flags.tol_rel;
  config.solver.check_every = flags.check_every;

  if (!config.allow_any_tau && config.spec.tau != 0.0 && config.spec.tau != 0.5 &&
      config.spec.tau != 1.0) {
    throw std::invalid_argument("--tau must be 0, 0.5 or 1 (pass --allow-any-tau to override)");
  }
  if (config.jobs < 1) throw std::invalid_argument("--jobs must be at least 1");
  if (config.solver.max_iter < 1 || config.solver.check_every < 1 ||
      !(config.solver.tol_abs > 0.0) || !(config.solver.tol_rel > 0.0)) {
    throw std::invalid_argument(
        "solver settings need max_iter >= 1, check_every >= 1 and positive tolerances");
  }
  config.spec.validate();
  return config;
}

// ---------------------------------------------------------------------------
// Output writers
// ---------------------------------------------------------------------------

std::string manifest_text(const RunConfig& config) {
  json j;
  j["format"] = "dboost-config";
  j["version"] = 1;
  j["problem"] = dboost::to_token(config.spec.problem);
  j["tau"] = config.spec.tau;
  j["depth"] = config.spec.depth;
  j["m_train"] = static_cast<long long>(config.spec.m_train);
  j["m_test"] = static_cast<long long>(config.spec.m_test);
  j["trials"] = config.spec.trials;
  j["seed"] = config.spec.seed;
  json methods = json::array();
  for (Method m : config.spec.methods) methods.push_back(dboost::to_token(m));
  j["methods"] = std::move(methods);
  j["edge_exponent"] = edge_token(config.spec.edge_exponent);
  j["out"] = config.out_dir;
  j["plot"] = config.plot;
  j["jobs"] = config.jobs;
  j["allow_any_tau"] = config.allow_any_tau;
  j["solver"] = {{"max_iter", config.solver.max_iter},
                 {"tol_abs", config.solver.tol_abs},
                 {"tol_rel", config.solver.tol_rel},
                 {"check_every", config.solver.check_every}};
  return j.dump(2) + "\n";
}

std::string results_csv(const ExperimentSpec& spec, const std::vector<TrialResult>& results) {
  std::ostringstream out;
  out << "problem,method,depth,tau,trial,split,excess_cost,n_trees,stop_reason,runtime_s\n";
  for (const TrialResult& trial : results) {
    for (const MethodResult& m : trial.methods) {
      const auto row = [&](const char* split, double excess) {
        const std::string value =
            (!m.failed && std::isfinite(excess)) ? fmt("%.6g", excess) : std::string("nan");
        out << dboost::to_token(spec.problem) << ',' << dboost::to_token(m.method) << ','
            << spec.depth << ',' << fmt("%g", spec.tau) << ',' << trial.trial_index << ',' << split
            << ',' << value << ',' << m.n_trees << ',' << m.stop_reason << ','
            << fmt("%.6g", m.runtime_s) << '\n';
      };
      row("train", m.train_excess);
      row("test", m.test_excess);
    }
  }
  return out.str();
}

TrialResult guarded_trial(const ExperimentSpec& spec, int index, const SolverSettings& settings) {
  try {
    return run_trial(spec, index, settings);
  } catch (const std::exception& e) {
    TrialResult failed;
    failed.trial_index = index;
    for (Method m : all_methods()) {
      if (std::find(spec.methods.begin(), spec.methods.end(), m) == spec.methods.end()) continue;
      MethodResult r;
      r.method = m;
      r.failed = true;
      r.error = e.what();
      r.train_excess = std::numeric_limits<double>::quiet_NaN();
      r.test_excess = std::numeric_limits<double>::quiet_NaN();
      r.stop_reason = "failed";
      failed.methods.push_back(std::move(r));
    }
    return failed;
  }
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  if (sorted.size() == 1) return sorted.front();
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(h);
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(i);
  return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

std::string svg_box_plot(const std::string& title, const std::string& y_label,
                         const std::vector<std::string>& labels,
                         const std::vector<std::vector<double>>& groups,
                         const std::vector<int>& failures) {
  const int n = static_cast<int>(labels.size());
  const double left = 72.0, right = 24.0, top = 48.0, bottom = 72.0;
  const double plot_w = std::max(240.0, 96.0 * std::max(n, 1));
  const double plot_h = 300.0;
  const double width = left + plot_w + right;
  const double height = top + plot_h + bottom;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const std::vector<double>& g : groups) {
    for (double v : g) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (lo > 0.0) lo = 0.0;  // Excess costs: keep a zero baseline.
  if (hi <= lo) hi = lo + 1.0;
  const double pad = 0.08 * (hi - lo);
  hi += pad;
  if (lo < 0.0) lo -= pad;
  const auto y_of = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt("%.0f", width)
    << "\" height=\"" << fmt("%.0f", height) << "\" viewBox=\"0 0 " << fmt("%.0f", width) << ' '
    << fmt("%.0f", height) << "\" font-family=\"sans-serif\">\n";
  s << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  s << "  <text x=\"" << fmt("%.2f", width / 2.0)
    << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  s << "  <text x=\"16\" y=\"" << fmt("%.2f", top + plot_h / 2.0)
    << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
    << fmt("%.2f", top + plot_h / 2.0) << ")\">" << y_label << "</text>\n";

  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * static_cast<double>(k) / 4.0;
    const double y = y_of(v);
    s << "  <line x1=\"" << fmt("%.2f", left) << "\" y1=\"" << fmt("%.2f", y) << "\" x2=\""
      << fmt("%.2f", left + plot_w) << "\" y2=\"" << fmt("%.2f", y)
      << "\" stroke=\"#dddddd\"/>\n";
    s << "  <text x=\"" << fmt("%.2f", left - 8.0) << "\" y=\"" << fmt("%.2f", y + 4.0)
      << "\" text-anchor=\"end\" font-size=\"11\">" << fmt("%.3g", v) << "</text>\n";
  }
  s << "  <line x1=\"" << fmt("%.2f", left) << "\" y1=\"" << fmt("%.2f", top) << "\" x2=\""
    << fmt("%.2f", left) << "\" y2=\"" << fmt("%.2f", top + plot_h) << "\" stroke=\"#333333\"/>\n";
  s << "  <line x1=\"" << fmt("%.2f", left) << "\" y1=\"" << fmt("%.2f", top + plot_h)
    << "\" x2=\"" << fmt("%.2f", left + plot_w) << "\" y2=\"" << fmt("%.2f", top + plot_h)
    << "\" stroke=\"#333333\"/>\n";

  for (int i = 0; i < n; ++i) {
    const double cx = left + (static_cast<double>(i) + 0.5) * plot_w / static_cast<double>(n);
    const std::vector<double>& g = groups[static_cast<std::size_t>(i)];
    if (!g.empty()) {
      const double mn = g.front();
      const double mx = g.back();
      const double q1 = quantile_sorted(g, 0.25);
      const double med = quantile_sorted(g, 0.5);
      const double q3 = quantile_sorted(g, 0.75);
      const double bw = 44.0;
      const auto vline = [&](double v0, double v1) {
        s << "  <line x1=\"" << fmt("%.2f", cx) << "\" y1=\"" << fmt("%.2f", y_of(v0))
          << "\" x2=\"" << fmt("%.2f", cx) << "\" y2=\"" << fmt("%.2f", y_of(v1))
          << "\" stroke=\"#333333\"/>\n";
      };
      const auto hline = [&](double v, double half, const char* extra) {
        s << "  <line x1=\"" << fmt("%.2f", cx - half) << "\" y1=\"" << fmt("%.2f", y_of(v))
          << "\" x2=\"" << fmt("%.2f", cx + half) << "\" y2=\"" << fmt("%.2f", y_of(v))
          << "\" stroke=\"#333333\"" << extra << "/>\n";
      };
      vline(mx, q3);
      vline(q1, mn);
      hline(mx, 10.0, "");
      hline(mn, 10.0, "");
      const double box_y = y_of(q3);
      const double box_h = std::max(0.75, y_of(q1) - y_of(q3));
      s << "  <rect x=\"" << fmt("%.2f", cx - bw / 2.0) << "\" y=\"" << fmt("%.2f", box_y)
        << "\" width=\"" << fmt("%.2f", bw) << "\" height=\"" << fmt("%.2f", box_h)
        << "\" fill=\"#9ecae1\" stroke=\"#333333\"/>\n";
      hline(med, bw / 2.0, " stroke-width=\"2\"");
    } else {
      s << "  <text x=\"" << fmt("%.2f", cx) << "\" y=\"" << fmt("%.2f", top + plot_h / 2.0)
        << "\" text-anchor=\"middle\" font-size=\"12\" fill=\"#bb0000\">no data</text>\n";
    }
    s << "  <text x=\"" << fmt("%.2f", cx) << "\" y=\"" << fmt("%.2f", top + plot_h + 20.0)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << labels[static_cast<std::size_t>(i)]
      << "</text>\n";
    if (failures[static_cast<std::size_t>(i)] > 0) {
      s << "  <text x=\"" << fmt("%.2f", cx) << "\" y=\"" << fmt("%.2f", top + plot_h + 38.0)
        << "\" text-anchor=\"middle\" font-size=\"11\" fill=\"#bb0000\">"
        << failures[static_cast<std::size_t>(i)] << " failed</text>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

void write_motivating_files(const RunConfig& config) {
  const MotivatingDetail detail = run_motivating_detail(config.spec, config.solver);
  const std::filesystem::path out_dir(config.out_dir);

  std::ostringstream trace;
  trace << "method,stage,train_excess_cost,train_loss\n";
  const auto trace_rows = [&](const char* name, const std::vector<double>& excess,
                              const std::vector<double>& loss) {
    const std::size_t rows = std::min(excess.size(), loss.size());
    for (std::size_t k = 0; k < rows; ++k) {
      trace << name << ',' << k << ',' << fmt("%.6g", excess[k]) << ',' << fmt("%.6g", loss[k])
            << '\n';
    }
  };
  trace_rows("dboost", detail.dboost_excess_trace, detail.dboost_loss_trace);
  trace_rows("mse_boost", detail.mse_excess_trace, detail.mse_loss_trace);
  const std::string trace_path = (out_dir / "motivating_loss_trace.csv").string();
  save_text_file(trace_path, trace.str());
  std::cout << "wrote " << trace_path << "\n";

  std::ostringstream curve;
  curve << "x,dboost_c1,dboost_c2,mse_c1,mse_c2,true_c1,true_c2\n";
  for (Eigen::Index i = 0; i < detail.grid_x.size(); ++i) {
    curve << fmt("%.6g", detail.grid_x[i]) << ',' << fmt("%.6g", detail.dboost_curve(i, 0)) << ','
          << fmt("%.6g", detail.dboost_curve(i, 1)) << ',' << fmt("%.6g", detail.mse_curve(i, 0))
          << ',' << fmt("%.6g", detail.mse_curve(i, 1)) << ','
          << fmt("%.6g", detail.true_curve(i, 0)) << ',' << fmt("%.6g", detail.true_curve(i, 1))
          << '\n';
  }
  const std::string curve_path = (out_dir / "motivating_prediction_curve.csv").string();
  save_text_file(curve_path, curve.str());
  std::cout << "wrote " << curve_path << "\n";
}

// ---------------------------------------------------------------------------
// Subcommand runners
// ---------------------------------------------------------------------------

int run_check(std::uint64_t seed) {
  const std::vector<CheckResult> results = run_selfchecks(seed);
  int passed = 0;
  for (const CheckResult& r : results) {
    if (r.passed) {
      std::cout << "ok   " << r.name << "\n";
      ++passed;
    } else {
      std::cout << "FAIL " << r.name << ": " << r.detail << "\n";
    }
  }
  std::cout << passed << "/" << results.size() << " checks passed\n";
  return all_passed(results) ? 0 : 1;
}

int run_solve(const std::string& path, const SolverSettings& settings) {
  const QcpProblem problem = problem_from_json(load_text_file(path));
  const QcpSolution solution = solve(problem, settings);
  std::cout << solution_to_json(solution, kkt_residuals(problem, solution));
  return 0;
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{kAppDescription, "dboost"};
  app.require_subcommand(1);
  RunFlags flags;
  RunOptionSet opts;
  CLI::App* run_cmd = add_run_command(app, flags, opts);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    throw std::invalid_argument(std::string(e.what()) + "\n\n" + app.help());
  }
  if (!run_cmd->parsed()) {
    throw std::invalid_argument("expected the `run` subcommand\n\n" + app.help());
  }
  return resolve_run_config(flags, opts);
}

RunConfig parse_args(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

int run(const RunConfig& config) {
  config.spec.validate();
  if (config.jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);
  save_text_file((out_dir / "manifest.json").string(), manifest_text(config));

  const int n_trials = config.spec.trials;
  std::vector<TrialResult> results(static_cast<std::size_t>(n_trials));
  const int workers = std::min(config.jobs, n_trials);
  if (workers <= 1) {
    for (int t = 0; t < n_trials; ++t) {
      results[static_cast<std::size_t>(t)] = guarded_trial(config.spec, t, config.solver);
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::future<void>> tasks;
    tasks.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      tasks.push_back(std::async(std::launch::async, [&]() {
        for (int t = next.fetch_add(1); t < n_trials; t = next.fetch_add(1)) {
          results[static_cast<std::size_t>(t)] = guarded_trial(config.spec, t, config.solver);
        }
      }));
    }
    for (std::future<void>& task : tasks) task.get();
  }

  const std::string csv_path = (out_dir / "results.csv").string();
  save_text_file(csv_path, results_csv(config.spec, results));
  std::cout << "wrote " << csv_path << "\n";

  if (config.plot) {
    for (const std::string& path : emit_plots(results, config.spec, config.out_dir)) {
      std::cout << "wrote " << path << "\n";
    }
  }
  if (config.spec.problem == Problem::kMotivating) {
    // The detail refit is an auxiliary output; a solver failure here must not
    // mask the per-method report and exit code below.
    try {
      write_motivating_files(config);
    } catch (const std::exception& e) {
      std::cerr << "warning: skipped detail outputs: " << e.what() << "\n";
    }
  }

  bool any_failed = false;
  for (Method m : all_methods()) {
    double sum = 0.0;
    int ok = 0;
    int failed = 0;
    bool present = false;
    for (const TrialResult& trial : results) {
      for (const MethodResult& r : trial.methods) {
        if (r.method != m) continue;
        present = true;
        if (r.failed || !std::isfinite(r.test_excess)) {
          ++failed;
        } else {
          sum += r.test_excess;
          ++ok;
        }
      }
    }
    if (!present) continue;
    any_failed = any_failed || failed > 0;
    std::cout << dboost::to_token(m) << ": ";
    if (ok > 0) {
      std::cout << "mean test excess " << fmt("%.6g", sum / ok);
    } else {
      std::cout << "no successful trials";
    }
    if (failed > 0) std::cout << "  [" << failed << "/" << (ok + failed) << " trials failed]";
    std::cout << "\n";
  }
  return any_failed ? 2 : 0;
}

std::vector<std::string> emit_plots(const std::vector<TrialResult>& results,
                                    const ExperimentSpec& spec, const std::string& out_dir) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> groups;
  std::vector<int> failures;
  for (Method m : all_methods()) {
    std::vector<double> samples;
    int failed = 0;
    bool present = false;
    for (const TrialResult& trial : results) {
      for (const MethodResult& r : trial.methods) {
        if (r.method != m) continue;
        present = true;
        if (!r.failed && std::isfinite(r.test_excess)) {
          samples.push_back(r.test_excess);
        } else {
          ++failed;
        }
      }
    }
    if (!present) continue;
    std::sort(samples.begin(), samples.end());
    labels.push_back(dboost::to_token(m));
    groups.push_back(std::move(samples));
    failures.push_back(failed);
  }
  const std::string problem = dboost::to_token(spec.problem);
  const std::string title =
      problem + "  tau=" + fmt("%g", spec.tau) + "  depth=" + std::to_string(spec.depth);
  const std::string svg = svg_box_plot(title, "test excess cost", labels, groups, failures);
  const std::filesystem::path path =
      std::filesystem::path(out_dir) / ("plot_" + problem + "_tau" + fmt("%g", spec.tau) + ".svg");
  save_text_file(path.string(), svg);
  return {path.string()};
}

int main(int argc, char** argv) {
  CLI::App app{kAppDescription, "dboost"};
  app.require_subcommand(1);

  RunFlags flags;
  RunOptionSet opts;
  CLI::App* run_cmd = add_run_command(app, flags, opts);

  std::uint64_t check_seed = 20260819ULL;
  CLI::App* check_cmd = app.add_subcommand("check", "run the built-in invariant suite");
  check_cmd->add_option("--seed", check_seed, "seed for the randomized checks");

  std::string problem_file;
  SolverSettings solve_settings;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one problem from a JSON file");
  solve_cmd->add_option("--problem-file", problem_file, "path to a dboost-problem JSON file")
      ->required();
  solve_cmd->add_option("--max-iter", solve_settings.max_iter, "solver iteration cap");
  solve_cmd->add_option("--tol-abs", solve_settings.tol_abs, "solver absolute tolerance");
  solve_cmd->add_option("--tol-rel", solve_settings.tol_rel, "solver relative tolerance");
  solve_cmd->add_option("--check-every", solve_settings.check_every,
                        "solver convergence check interval");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run_cmd->parsed()) return run(resolve_run_config(flags, opts));
    if (check_cmd->parsed()) return run_check(check_seed);
    if (solve_cmd->parsed()) return run_solve(problem_file, solve_settings);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace dboost::cli
