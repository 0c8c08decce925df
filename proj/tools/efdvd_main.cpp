#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "efdvd/property_checks.hpp"
#include "efdvd/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCheck = 4;

struct CliOptions {
  std::string preset = "breather-paper";
  std::string config_path;
  // (key, value) pairs in application order; only flags the user passed
  std::vector<std::pair<std::string, std::string>> overrides;
  bool sweep = false;
};

void add_run_flags(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--preset", opts.preset, "Named parameter preset")
      ->capture_default_str();
  cmd->add_option("--config", opts.config_path, "key=value configuration file");
  auto track = [&opts](const std::string& key) {
    return [&opts, key](const std::string& value) {
      opts.overrides.emplace_back(key, value);
    };
  };
  cmd->add_option_function<std::string>("--scheme", track("scheme.variant"),
                                        "dvd, ef-dvd, avf or ef-avf");
  cmd->add_option_function<std::string>("--omega", track("omega"),
                                        "Frequency (fitting weight and exact solution)");
  cmd->add_option_function<std::string>("--beta", track("breather.beta"),
                                        "Breather shape parameter");
  cmd->add_option_function<std::string>("--T", track("grid.t_final"), "Final time");
  cmd->add_option_function<std::string>("--dx", track("grid.dx"), "Spatial step");
  cmd->add_option_function<std::string>("--dt", track("run.dt"), "Base time step");
  cmd->add_option_function<std::string>("--sweep-k", track("sweep.k_max"),
                                        "Deepest step halving in a sweep");
  cmd->add_option_function<std::string>("--tol", track("solver.tol_residual"),
                                        "Newton residual tolerance");
  cmd->add_option_function<std::string>("--max-iters", track("solver.max_iters"),
                                        "Newton iteration cap");
  cmd->add_option_function<std::string>("--output", track("output.dir"),
                                        "Output directory");
  cmd->add_option_function<std::string>("--jobs", track("run.jobs"),
                                        "Parallel sweep rows");
}

efdvd::RunConfig assemble(const CliOptions& opts) {
  if (opts.preset != "breather-paper")
    throw std::invalid_argument("unknown preset: " + opts.preset);
  efdvd::RunConfig cfg = efdvd::preset_breather_paper();
  if (!opts.config_path.empty()) efdvd::apply_config_file(cfg, opts.config_path);

  bool output_set = false;
  for (const auto& [key, value] : opts.overrides) {
    efdvd::apply_config_kv(cfg, key, value);
    output_set = output_set || key == "output.dir";
  }
  if (!output_set)
    if (const char* env = std::getenv("EFDVD_OUTPUT_DIR")) cfg.output_dir = env;
  return cfg;
}

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& emit) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path.string());
  emit(out);
  if (!out) throw std::invalid_argument("write failed: " + path.string());
}

int emit_report(const efdvd::RunConfig& cfg, const efdvd::RunReport& report,
                bool sweep) {
  const std::string scheme = efdvd::scheme_name(cfg.scheme);
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  const std::string csv_name = (sweep ? "sweep_" : "run_") + scheme + ".csv";
  write_file(dir / csv_name,
             [&report](std::ostream& os) { efdvd::write_csv(report, os); });
  if (sweep)
    write_file(dir / ("plot_" + scheme + ".dat"),
               [&report](std::ostream& os) { efdvd::write_plot_data(report, os); });
  efdvd::write_report(report, std::cout);
  std::cout << "wrote " << (dir / csv_name).string() << "\n";

  for (const efdvd::RunRow& row : report.rows)
    if (row.failed) return kExitSolver;
  return kExitOk;
}

int run_checks(std::uint64_t seed) {
  bool all_pass = true;
  for (const efdvd::CheckResult& r : efdvd::run_property_checks(seed)) {
    std::printf("%-22s %s  (worst %.3e, bound %.0e)\n", r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.worst, r.threshold);
    all_pass = all_pass && r.pass;
  }
  return all_pass ? kExitOk : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-conserving NLS integrators: runs, sweeps and property checks"};
  app.require_subcommand(1);

  CliOptions opts;
  CLI::App* run_cmd = app.add_subcommand("run", "Integrate once at the base step");
  add_run_flags(run_cmd, opts);
  run_cmd->add_flag("--sweep", opts.sweep, "Run the step-halving sweep instead");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Convergence sweep dt/2^k");
  add_run_flags(sweep_cmd, opts);

  std::uint64_t seed = 12345;
  CLI::App* check_cmd = app.add_subcommand("check", "Algebraic property suite");
  check_cmd->add_option("--seed", seed, "Random field seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (check_cmd->parsed()) return run_checks(seed);
    const efdvd::RunConfig cfg = assemble(opts);
    const bool sweep = sweep_cmd->parsed() || opts.sweep;
    const efdvd::RunReport report =
        sweep ? efdvd::run_sweep(cfg) : efdvd::run_single(cfg);
    return emit_report(cfg, report, sweep);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}
