#include "efdvd/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "efdvd/conservation.hpp"

namespace efdvd {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r\n");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r\n");
  return s.substr(from, to - from + 1);
}

double parse_real(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": not a number: " + value);
  }
  if (pos != value.size())
    throw std::invalid_argument("config key " + key + ": trailing characters in " + value);
  return x;
}

long long parse_int(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": not an integer: " + value);
  }
  if (pos != value.size())
    throw std::invalid_argument("config key " + key + ": trailing characters in " + value);
  return x;
}

// node count for a requested spacing; rejects spacings that do not divide the
// interval
int nodes_for_dx(double a, double b, double dx) {
  if (!(dx > 0.0) || !std::isfinite(dx)) throw std::invalid_argument("dx must be positive");
  const double ratio = (b - a) / dx;
  const double rounded = std::round(ratio);
  if (rounded < 2.0 || std::fabs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("dx does not divide the interval");
  return static_cast<int>(rounded) + 1;
}

int steps_for_dt(double t_final, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  const double ratio = t_final / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::fabs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("dt does not divide the final time");
  return static_cast<int>(rounded);
}

SchemeVariant variant_from_name(const std::string& name) {
  if (name == "dvd") return SchemeVariant::Dvd;
  if (name == "ef-dvd") return SchemeVariant::EfDvd;
  if (name == "avf") return SchemeVariant::Avf;
  if (name == "ef-avf") return SchemeVariant::EfAvf;
  throw std::invalid_argument("unknown scheme: " + name +
                              " (expected dvd, ef-dvd, avf or ef-avf)");
}

RunRow run_one(const RunConfig& cfg) {
  const GridSpec& grid = cfg.grid;
  RunRow row;
  row.scheme = scheme_name(cfg.scheme);
  row.dt = grid.dt();
  row.dx = grid.dx();
  row.omega = cfg.breather.omega;
  row.beta = cfg.breather.beta;

  const auto t0 = std::chrono::steady_clock::now();
  ComplexField z = breather_field(cfg.breather, grid, 0.0);
  ConservationAccumulator acc(grid, cfg.scheme);
  acc.start(z);
  long long completed = 0;
  for (int n = 0; n < grid.num_steps; ++n) {
    StepResult res = step(cfg.scheme, z, grid, cfg.solver);
    row.newton_iters += res.stats.iterations;
    if (!res.ok()) {
      row.failed = true;
      row.failed_step = n;
      break;
    }
    z = std::move(res.znp1);
    acc.push(z);
    ++completed;
  }
  const auto t1 = std::chrono::steady_clock::now();
  row.wall_seconds = std::chrono::duration<double>(t1 - t0).count();

  const double t_end = row.failed ? static_cast<double>(completed) * grid.dt()
                                  : grid.t_final;
  row.sol_err = sol_err(z, breather_field(cfg.breather, grid, t_end));
  row.err_cl_charge = acc.local().err1;
  row.err_cl_energy = acc.local().err2;
  row.err_inv_charge = acc.global().errM;
  row.err_inv_energy = acc.global().errH;
  return row;
}

}  // namespace

void RunConfig::validate() const {
  grid.validate();
  breather.validate();
  solver.validate();
  if (scheme.omega < 0.0 || !std::isfinite(scheme.omega))
    throw std::invalid_argument("fitting frequency must be finite and nonnegative");
  if (sweep_k_max < 0 || sweep_k_max > 20)
    throw std::invalid_argument("sweep depth must be in [0, 20]");
  if (jobs < 1 || jobs > 256) throw std::invalid_argument("jobs must be in [1, 256]");
  if (scheme.fitted() && grid.num_steps > 0)
    (void)scheme_alpha(scheme, grid.dt());  // rejects omega*dt >= pi
}

std::string RunRow::status() const {
  return failed ? "failed@" + std::to_string(failed_step) : "ok";
}

RunReport run_single(const RunConfig& cfg) {
  cfg.validate();
  RunReport report;
  report.rows.push_back(run_one(cfg));
  return report;
}

RunReport run_sweep(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.grid.num_steps < 1)
    throw std::invalid_argument("sweep needs a positive base step count");
  if (cfg.grid.num_steps > (1 << 24))
    throw std::invalid_argument("base step count too large to sweep");

  const int count = cfg.sweep_k_max + 1;
  RunReport report;
  report.rows.resize(count);
  std::vector<std::exception_ptr> errors(count);

  auto worker = [&](int k) {
    try {
      RunConfig sub = cfg;
      sub.grid.num_steps = cfg.grid.num_steps << k;
      report.rows[k] = run_one(sub);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };

  if (cfg.jobs <= 1) {
    for (int k = 0; k < count; ++k) worker(k);
  } else {
    for (int base = 0; base < count; base += cfg.jobs) {
      std::vector<std::thread> pool;
      for (int k = base; k < std::min(base + cfg.jobs, count); ++k)
        pool.emplace_back(worker, k);
      for (std::thread& t : pool) t.join();
    }
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  bool all_ok = true;
  for (const RunRow& row : report.rows) all_ok = all_ok && !row.failed;
  if (all_ok && count >= 2) {
    std::vector<double> errs(count);
    for (int k = 0; k < count; ++k) errs[k] = report.rows[k].sol_err;
    const std::vector<OrderEntry> orders = order_estimate(errs);
    for (int k = 1; k < count; ++k) {
      report.rows[k].has_order = true;
      report.rows[k].order = orders[k - 1].order;
      report.rows[k].floored = orders[k - 1].floored;
    }
  }
  return report;
}

void write_csv(const RunReport& report, std::ostream& os) {
  os << "scheme,dt,dx,omega,beta,sol_err,order,err_cl_charge,err_cl_energy,"
        "err_inv_charge,err_inv_energy,newton_iters,wall_seconds,status\n";
  for (const RunRow& r : report.rows) {
    std::string order;
    if (r.has_order) order = r.floored ? "***" : fmt17(r.order);
    os << r.scheme << ',' << fmt17(r.dt) << ',' << fmt17(r.dx) << ',' << fmt17(r.omega)
       << ',' << fmt17(r.beta) << ',' << fmt17(r.sol_err) << ',' << order << ','
       << fmt17(r.err_cl_charge) << ',' << fmt17(r.err_cl_energy) << ','
       << fmt17(r.err_inv_charge) << ',' << fmt17(r.err_inv_energy) << ','
       << r.newton_iters << ',' << fmt17(r.wall_seconds) << ',' << r.status() << '\n';
  }
}

void write_plot_data(const RunReport& report, std::ostream& os) {
  for (const RunRow& r : report.rows) os << fmt17(r.dt) << ' ' << fmt17(r.sol_err) << '\n';
}

void write_report(const RunReport& report, std::ostream& os) {
  char line[256];
  std::snprintf(line, sizeof(line), "%-8s %-12s %-11s %-7s %-9s %-9s %-9s %-9s %7s %9s  %s\n",
                "scheme", "dt", "sol_err", "order", "err_cl1", "err_cl2", "err_invM",
                "err_invH", "iters", "wall[s]", "status");
  os << line;
  for (const RunRow& r : report.rows) {
    std::string order = "";
    if (r.has_order) {
      if (r.floored) {
        order = "***";
      } else {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.2f", r.order);
        order = buf;
      }
    }
    std::snprintf(line, sizeof(line),
                  "%-8s %-12.6g %-11.3e %-7s %-9.2e %-9.2e %-9.2e %-9.2e %7lld %9.2f  %s\n",
                  r.scheme.c_str(), r.dt, r.sol_err, order.c_str(), r.err_cl_charge,
                  r.err_cl_energy, r.err_inv_charge, r.err_inv_energy, r.newton_iters,
                  r.wall_seconds, r.status().c_str());
    os << line;
  }
}

RunConfig preset_breather_paper() {
  RunConfig cfg;
  cfg.scheme = {SchemeVariant::Dvd, 25.0};
  cfg.grid.a = -std::numbers::pi / 7.0;
  cfg.grid.b = std::numbers::pi / 7.0;
  cfg.grid.num_nodes = 1001;  // dx = 2 pi / 7000
  cfg.grid.t_final = 0.5;
  cfg.grid.num_steps = 50;  // dt = 0.01
  cfg.breather = {1.4, 25.0};
  cfg.solver.tol_residual = 1e-12;
  cfg.solver.max_iters = 25;
  cfg.sweep_k_max = 5;
  return cfg;
}

void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "scheme.variant") {
    cfg.scheme.variant = variant_from_name(value);
  } else if (key == "scheme.omega") {
    cfg.scheme.omega = parse_real(key, value);
  } else if (key == "breather.omega") {
    cfg.breather.omega = parse_real(key, value);
  } else if (key == "omega") {
    cfg.scheme.omega = cfg.breather.omega = parse_real(key, value);
  } else if (key == "breather.beta") {
    cfg.breather.beta = parse_real(key, value);
  } else if (key == "grid.a") {
    cfg.grid.a = parse_real(key, value);
  } else if (key == "grid.b") {
    cfg.grid.b = parse_real(key, value);
  } else if (key == "grid.dx") {
    cfg.grid.num_nodes = nodes_for_dx(cfg.grid.a, cfg.grid.b, parse_real(key, value));
  } else if (key == "grid.t_final") {
    cfg.grid.t_final = parse_real(key, value);
    if (cfg.grid.t_final == 0.0) cfg.grid.num_steps = 0;
  } else if (key == "run.dt") {
    cfg.grid.num_steps = steps_for_dt(cfg.grid.t_final, parse_real(key, value));
  } else if (key == "sweep.k_max") {
    cfg.sweep_k_max = static_cast<int>(parse_int(key, value));
  } else if (key == "solver.tol_residual") {
    cfg.solver.tol_residual = parse_real(key, value);
  } else if (key == "solver.max_iters") {
    cfg.solver.max_iters = static_cast<int>(parse_int(key, value));
  } else if (key == "output.dir") {
    cfg.output_dir = value;
  } else if (key == "run.jobs") {
    cfg.jobs = static_cast<int>(parse_int(key, value));
  } else if (key == "grid.dx_numerator" || key == "grid.dx_denominator") {
    throw std::invalid_argument("config key " + key +
                                " must be paired with its counterpart in a config file");
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key=value");
    entries.emplace_back(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }

  // geometry first so that spacing/step keys see their final interval
  auto is_geometry = [](const std::string& k) {
    return k == "grid.a" || k == "grid.b" || k == "grid.t_final";
  };
  long long dx_num = 0, dx_den = 0;
  for (const auto& [k, v] : entries)
    if (is_geometry(k)) apply_config_kv(cfg, k, v);
  for (const auto& [k, v] : entries) {
    if (is_geometry(k)) continue;
    if (k == "grid.dx_numerator") {
      dx_num = parse_int(k, v);
    } else if (k == "grid.dx_denominator") {
      dx_den = parse_int(k, v);
    } else {
      apply_config_kv(cfg, k, v);
    }
  }
  if ((dx_num != 0) != (dx_den != 0))
    throw std::invalid_argument(
        "grid.dx_numerator and grid.dx_denominator must be given together");
  if (dx_num != 0) {
    if (dx_num < 0 || dx_den <= 0)
      throw std::invalid_argument("dx fraction must be positive");
    cfg.grid.num_nodes =
        nodes_for_dx(cfg.grid.a, cfg.grid.b,
                     static_cast<double>(dx_num) * std::numbers::pi /
                         static_cast<double>(dx_den));
  }
}

}  // namespace efdvd
