#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rbx/extension.hpp"
#include "rbx/imagination.hpp"
#include "rbx/io.hpp"
#include "rbx/linalg.hpp"
#include "rbx/mdl.hpp"
#include "rbx/report.hpp"
#include "rbx/verify.hpp"

namespace {

using rbx::report::Json;

struct Options {
  std::string config_path;
  std::string data_path;
  std::string sim_path;
  std::string out_path;
  std::string plot_path;
  std::vector<double> lambda_grid;
  std::vector<std::string> checks;
  bool all_checks = false;
  bool csv_weights = false;
  std::size_t trials = 500;
  std::optional<std::uint64_t> seed;
};

void emit(const Json& report, const Options& opt) {
  std::string text = rbx::report::to_canonical_string(report);
  if (opt.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw rbx::Error("cannot open output file " + opt.out_path);
    out << text;
  }
}

rbx::Dataset load_data(const std::string& path, bool csv_weights) {
  return rbx::io::ingest_dataset(path, rbx::io::format_from_path(path),
                                 csv_weights);
}

void require_strictly_increasing(const std::vector<double>& grid) {
  if (grid.empty()) {
    throw rbx::ConfigError("lambda grid must be nonempty");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw rbx::ConfigError("lambda grid must be strictly increasing");
    }
  }
}

struct LoadedRun {
  rbx::io::RunConfig config;
  rbx::Dataset data;
  std::size_t dim;
  rbx::Subspace initial;
  rbx::MdlConfig mdl;
};

LoadedRun load_run(const Options& opt) {
  rbx::io::RunConfig config = rbx::io::load_config(opt.config_path);
  if (opt.seed) config.seed = *opt.seed;
  rbx::Dataset data = load_data(opt.data_path, opt.csv_weights);
  std::size_t dim = config.resolve_dim(data.ambient_dim());
  rbx::Subspace initial = config.initial_space(dim);
  rbx::MdlConfig mdl = config.mdl(dim);
  return {std::move(config), std::move(data), dim, std::move(initial),
          std::move(mdl)};
}

int cmd_analyze(const Options& opt) {
  LoadedRun run = load_run(opt);
  Json report = rbx::report::run_report_header("analyze", run.config, run.dim,
                                               run.data);
  report["initial_basis"] = rbx::report::basis_json(run.initial.basis());
  report["description_length"] =
      rbx::description_length(run.initial, run.data, run.mdl);
  rbx::Subspace w = rbx::residual_span(run.initial, run.data, run.mdl.tol());
  report["residual_span_dim"] = w.dim();
  rbx::ResidualCovariance sigma =
      rbx::residual_covariance(run.initial, run.data);
  std::vector<rbx::EigenPair> spectrum = rbx::eigen_spectrum(
      sigma, run.mdl.tol(), rbx::kEigenMaxIter, run.dim);
  Json values = Json::array();
  for (const auto& pair : spectrum) values.push_back(pair.value);
  report["spectrum"] = values;
  report["proposal"] = rbx::report::proposal_json(
      rbx::propose_one_dim(run.initial, run.data, run.mdl));
  emit(report, opt);
  return 0;
}

int cmd_extend(const Options& opt) {
  LoadedRun run = load_run(opt);
  Json report =
      rbx::report::run_report_header("extend", run.config, run.dim, run.data);
  report["initial_basis"] = rbx::report::basis_json(run.initial.basis());
  rbx::ExtensionTrace trace =
      rbx::extend_greedy(run.initial, run.data, run.mdl);
  report["trace"] = rbx::report::trace_json(trace);
  report["accepted_dims"] = trace.accepted_steps();
  emit(report, opt);
  return 0;
}

int cmd_simulate(const Options& opt) {
  LoadedRun run = load_run(opt);
  rbx::SimulationBatch batch{load_data(opt.sim_path, opt.csv_weights),
                             opt.sim_path};
  Json report = rbx::report::run_report_header("simulate", run.config, run.dim,
                                               run.data);
  report["initial_basis"] = rbx::report::basis_json(run.initial.basis());
  report["simulation"] = rbx::report::dataset_digest_json(batch.items);
  report["mechanism"] = rbx::report::mechanism_json(
      rbx::classify_simulation(run.initial, run.data, batch, run.mdl));
  report["trace_ext"] = rbx::report::trace_json(
      rbx::extend_greedy(run.initial, run.data, run.mdl));
  report["trace_all"] = rbx::report::trace_json(rbx::extend_greedy(
      run.initial, rbx::Dataset::merged(run.data, batch.items), run.mdl));
  emit(report, opt);
  return 0;
}

int cmd_sweep(const Options& opt) {
  require_strictly_increasing(opt.lambda_grid);
  LoadedRun run = load_run(opt);
  Json report =
      rbx::report::run_report_header("sweep", run.config, run.dim, run.data);
  report["initial_basis"] = rbx::report::basis_json(run.initial.basis());
  Json grid = Json::array();
  for (double lambda : opt.lambda_grid) grid.push_back(lambda);
  report["lambda_grid"] = grid;

  std::string plot = "# lambda accepted_dims\n";
  Json rows = Json::array();
  for (double lambda : opt.lambda_grid) {
    rbx::MdlConfig cfg(lambda, run.mdl.loss(), run.mdl.tol(),
                       run.mdl.rank_bound());
    rbx::ExtensionTrace trace = rbx::extend_greedy(run.initial, run.data, cfg);
    Json row = Json::object();
    row["lambda"] = lambda;
    row["accepted_dims"] = trace.accepted_steps();
    Json eigenvalues = Json::array();
    for (const auto& step : trace.steps) {
      if (step.accepted) eigenvalues.push_back(step.eigenvalue);
    }
    row["step_eigenvalues"] = eigenvalues;
    rows.push_back(row);

    Json lambda_text = lambda;
    plot += rbx::report::to_canonical_string(lambda_text);
    plot.pop_back();  // strip newline
    plot += " " + std::to_string(trace.accepted_steps()) + "\n";
  }
  report["results"] = rows;
  if (!opt.plot_path.empty()) {
    std::ofstream out(opt.plot_path, std::ios::binary);
    if (!out) throw rbx::Error("cannot open plot-data file " + opt.plot_path);
    out << plot;
  }
  emit(report, opt);
  return 0;
}

int cmd_verify(const Options& opt) {
  std::uint64_t seed = 0;
  if (!opt.config_path.empty()) {
    seed = rbx::io::load_config(opt.config_path).seed;
  }
  if (opt.seed) seed = *opt.seed;
  if (opt.trials < 1) throw rbx::ConfigError("trials must be >= 1");

  std::vector<std::string> selected = opt.checks;
  if (opt.all_checks) selected = rbx::verify::check_names();
  if (selected.empty()) {
    throw rbx::ConfigError("verify: select checks with --check or --all");
  }
  for (const std::string& name : selected) {
    const auto& names = rbx::verify::check_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw rbx::ConfigError("unknown check name: " + name);
    }
  }
  std::vector<double> grid = opt.lambda_grid.empty()
                                 ? rbx::verify::default_lambda_grid()
                                 : opt.lambda_grid;
  require_strictly_increasing(grid);

  rbx::verify::InstanceGenerator gen;
  gen.seed = seed;

  Json report = Json::object();
  report["schema_version"] = rbx::report::kSchemaVersion;
  report["command"] = "verify";
  Json cfg = Json::object();
  cfg["trials"] = opt.trials;
  cfg["seed"] = seed;
  Json grid_json = Json::array();
  for (double lambda : grid) grid_json.push_back(lambda);
  cfg["lambda_grid"] = grid_json;
  report["config"] = cfg;

  bool all_passed = true;
  Json checks = Json::array();
  for (const std::string& name : selected) {
    rbx::verify::CheckReport result =
        rbx::verify::run_check(name, gen, opt.trials, grid);
    all_passed = all_passed && result.passed();
    checks.push_back(rbx::report::check_report_json(result));
    std::cerr << "check " << name << ": "
              << (result.passed() ? "passed" : "FAILED") << " ("
              << result.instances << " instances)\n";
  }
  report["checks"] = checks;
  report["all_passed"] = all_passed;
  emit(report, opt);
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MDL-governed basis extension of conceptual subspaces"};
  app.require_subcommand(1);

  Options opt;
  std::uint64_t seed_value = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config, bool needs_data) {
    auto* config =
        sub->add_option("--config", opt.config_path, "JSON run configuration");
    if (needs_config) config->required();
    auto* data = sub->add_option("--data", opt.data_path,
                                 "dataset file (.csv or .json)");
    if (needs_data) data->required();
    sub->add_option("--out", opt.out_path, "write the JSON report here");
    sub->add_flag("--csv-weights", opt.csv_weights,
                  "treat the last CSV column as weights");
    sub->add_option("--seed", seed_value, "override the config seed")
        ->each([&](const std::string&) { opt.seed = seed_value; });
  };

  CLI::App* analyze = app.add_subcommand(
      "analyze", "description length, residual span and covariance spectrum");
  add_common(analyze, true, true);

  CLI::App* extend = app.add_subcommand(
      "extend", "greedy MDL-accepted basis extension");
  add_common(extend, true, true);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "classify a simulated batch against external data");
  add_common(simulate, true, true);
  simulate->add_option("--sim", opt.sim_path, "simulated dataset file")
      ->required();

  CLI::App* sweep = app.add_subcommand(
      "sweep", "accepted dimensions across a lambda grid");
  add_common(sweep, true, true);
  sweep->add_option("--lambda-grid", opt.lambda_grid,
                    "comma-separated, strictly increasing")
      ->required()
      ->delimiter(',');
  sweep->add_option("--plot-data", opt.plot_path,
                    "write a whitespace-separated (lambda, accepted_dims) table");

  CLI::App* verify = app.add_subcommand(
      "verify", "randomized checks of the structural propositions");
  add_common(verify, false, false);
  verify->add_option("--trials", opt.trials, "instances per check");
  verify->add_option("--check", opt.checks, "check name (repeatable)");
  verify->add_flag("--all", opt.all_checks, "run every check");
  verify->add_option("--lambda-grid", opt.lambda_grid,
                     "grid for the signatures check")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto started = std::chrono::steady_clock::now();
  int status = 0;
  std::string command;
  try {
    if (analyze->parsed()) {
      command = "analyze";
      status = cmd_analyze(opt);
    } else if (extend->parsed()) {
      command = "extend";
      status = cmd_extend(opt);
    } else if (simulate->parsed()) {
      command = "simulate";
      status = cmd_simulate(opt);
    } else if (sweep->parsed()) {
      command = "sweep";
      status = cmd_sweep(opt);
    } else if (verify->parsed()) {
      command = "verify";
      status = cmd_verify(opt);
    }
  } catch (const rbx::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - started)
                     .count();
  std::cerr << "rbx " << command << ": done in " << elapsed << " ms\n";
  return status;
}
