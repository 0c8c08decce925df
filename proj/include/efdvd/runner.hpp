#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "efdvd/breather.hpp"
#include "efdvd/grid.hpp"
#include "efdvd/newton_solver.hpp"
#include "efdvd/nls_schemes.hpp"

namespace efdvd {

/** One experiment: integrate the breather initial condition to grid.t_final
 * and collect solution-error, conservation and solver diagnostics.  The grid
 * carries the base time step (dt = t_final / num_steps); a sweep re-runs the
 * experiment with the step halved sweep_k_max times. */
struct RunConfig {
  SchemeKind scheme{SchemeVariant::Dvd, 25.0};
  GridSpec grid;
  BreatherParams breather;
  SolverConfig solver;
  int sweep_k_max = 5;
  std::string output_dir = ".";
  int jobs = 1;

  void validate() const;
};

struct RunRow {
  std::string scheme;
  double dt = 0.0, dx = 0.0, omega = 0.0, beta = 0.0;
  double sol_err = 0.0;
  bool has_order = false;
  double order = 0.0;
  bool floored = false;
  double err_cl_charge = 0.0, err_cl_energy = 0.0;
  double err_inv_charge = 0.0, err_inv_energy = 0.0;
  long long newton_iters = 0;
  double wall_seconds = 0.0;
  bool failed = false;
  long long failed_step = -1;

  std::string status() const;  // "ok" or "failed@<step>"
};

struct RunReport {
  std::vector<RunRow> rows;  // ordered by decreasing dt
};

/// Integrate once at the base step.
RunReport run_single(const RunConfig& cfg);

/// Integrate at dt_k = dt / 2^k for k = 0..sweep_k_max and append the order
/// column.  Rows run independently, up to cfg.jobs at a time.
RunReport run_sweep(const RunConfig& cfg);

/* CSV with a fixed header
 *   scheme,dt,dx,omega,beta,sol_err,order,err_cl_charge,err_cl_energy,
 *   err_inv_charge,err_inv_energy,newton_iters,wall_seconds,status
 * floating-point cells carry 17 significant digits; the order cell is empty
 * on the first row (or where undefined) and holds the literal *** on
 * floor-limited rows. */
void write_csv(const RunReport& report, std::ostream& os);

/// Two columns per line: dt and sol_err, for log-log plotting.
void write_plot_data(const RunReport& report, std::ostream& os);

/// Human-readable table of the same rows.
void write_report(const RunReport& report, std::ostream& os);

/** The benchmark configuration: breather with beta = 1.4, omega = 25 on
 * [-pi/7, pi/7] with dx = 2 pi / 7000 (1001 nodes), integrated to T = 0.5
 * with base step dt = 0.01, solver tolerance 1e-12. */
RunConfig preset_breather_paper();

/** Flat key=value configuration (one pair per line, # comments, blank lines
 * ignored).  Keys follow the config field paths; unknown keys are an error.
 * apply_config_file throws std::invalid_argument with the offending line. */
void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value);
void apply_config_file(RunConfig& cfg, const std::string& path);

}  // namespace efdvd
