#include "efdvd/newton_solver.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace efdvd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double max_abs(std::span<const double> x) {
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, std::fabs(v));
  return worst;
}

// Partial derivatives of the nonlinear row terms with respect to (U, V).
struct NlJacobian {
  double r1_u, r1_v, r2_u, r2_v;
};

NlJacobian nl_jacobian(bool avf, double u, double v, double U, double V) {
  if (!avf) {
    const double w = 0.5 * ((u * u + v * v) + (U * U + V * V));
    const double ub = 0.5 * (u + U);
    const double vb = 0.5 * (v + V);
    return {U * vb, V * vb + 0.5 * w, U * ub + 0.5 * w, V * ub};
  }
  const double ub = 0.5 * (u + U);
  const double vb = 0.5 * (v + V);
  const double cross = (2.0 / 3.0) * ub * vb + U * V / 3.0;
  const double r1_v =
      V * vb + 0.5 * (0.5 * (v * v + V * V) + (2.0 / 3.0) * ub * ub) + U * U / 6.0;
  const double r2_u =
      U * ub + 0.5 * (0.5 * (u * u + U * U) + (2.0 / 3.0) * vb * vb) + V * V / 6.0;
  return {cross, r1_v, r2_u, cross};
}

// Upper bound for the max-norm roundoff in one evaluation of the residual
// rows at fields of the given size; used to recognize stagnation at the
// floor rather than genuine non-convergence.
double residual_floor(double alpha, double dt, double dx, const ComplexField& zn,
                      const ComplexField& w) {
  double mod2 = 0.0;
  double amp = 1.0;
  for (std::size_t m = 0; m < zn.size(); ++m) {
    mod2 = std::max(mod2, zn.u[m] * zn.u[m] + zn.v[m] * zn.v[m]);
    mod2 = std::max(mod2, w.u[m] * w.u[m] + w.v[m] * w.v[m]);
    amp = std::max({amp, std::fabs(zn.u[m]), std::fabs(zn.v[m]), std::fabs(w.u[m]),
                    std::fabs(w.v[m])});
  }
  const double scale = alpha / dt + 2.0 / (dx * dx) + 3.0 * mod2;
  return 8.0 * kEps * scale * (1.0 + amp);
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol_residual > 0.0) || !std::isfinite(tol_residual))
    throw std::invalid_argument("residual tolerance must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
}

void scheme_jacobian(const SchemeKind& scheme, const StepPair& pair,
                     std::vector<Block2>& diag, Block2& off) {
  pair.validate();
  const double alpha = scheme_alpha(scheme, pair.dt);
  const double inv_dx2 = 1.0 / (pair.dx * pair.dx);
  const bool avf = scheme.avf_family();
  const std::size_t n = pair.zn.size();
  diag.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const NlJacobian nl =
        nl_jacobian(avf, pair.zn.u[m], pair.zn.v[m], pair.znp1.u[m], pair.znp1.v[m]);
    diag[m] = {alpha / pair.dt + nl.r1_u, -inv_dx2 + nl.r1_v, -inv_dx2 + nl.r2_u,
               -alpha / pair.dt + nl.r2_v};
  }
  off = {0.0, 0.5 * inv_dx2, 0.5 * inv_dx2, 0.0};
}

std::vector<double> dense_jacobian(const SchemeKind& scheme, const StepPair& pair) {
  std::vector<Block2> diag;
  Block2 off;
  scheme_jacobian(scheme, pair, diag, off);
  const std::size_t n = diag.size();
  const std::size_t dim = 2 * n;
  std::vector<double> jac(dim * dim, 0.0);
  auto add = [&](std::size_t br, std::size_t bc, const Block2& b) {
    jac[dim * (2 * br) + 2 * bc] += b.a11;
    jac[dim * (2 * br) + 2 * bc + 1] += b.a12;
    jac[dim * (2 * br + 1) + 2 * bc] += b.a21;
    jac[dim * (2 * br + 1) + 2 * bc + 1] += b.a22;
  };
  for (std::size_t m = 0; m < n; ++m) {
    add(m, m, diag[m]);
    add(m, (m + 1) % n, off);
    add(m, (m + n - 1) % n, off);
  }
  return jac;
}

double jacobian_fd_check(const SchemeKind& scheme, const StepPair& pair) {
  const std::vector<double> analytic = dense_jacobian(scheme, pair);
  const std::size_t n = pair.zn.size();
  const std::size_t dim = 2 * n;

  ComplexField w = pair.znp1;
  auto entry = [&](std::size_t j) -> double& { return j % 2 == 0 ? w.u[j / 2] : w.v[j / 2]; };

  double worst = 0.0;
  double scale = 1.0;
  for (double a : analytic) scale = std::max(scale, std::fabs(a));
  for (std::size_t j = 0; j < dim; ++j) {
    const double saved = entry(j);
    const double h = 1e-7 * (1.0 + std::fabs(saved));
    entry(j) = saved + h;
    const ResidualRows plus =
        scheme_residual(scheme, StepPair{pair.zn, w, pair.dt, pair.dx});
    entry(j) = saved - h;
    const ResidualRows minus =
        scheme_residual(scheme, StepPair{pair.zn, w, pair.dt, pair.dx});
    entry(j) = saved;
    for (std::size_t m = 0; m < n; ++m) {
      const double fd1 = (plus.row1[m] - minus.row1[m]) / (2.0 * h);
      const double fd2 = (plus.row2[m] - minus.row2[m]) / (2.0 * h);
      worst = std::max(worst, std::fabs(analytic[dim * (2 * m) + j] - fd1));
      worst = std::max(worst, std::fabs(analytic[dim * (2 * m + 1) + j] - fd2));
    }
  }
  return worst / scale;
}

StepResult step(const SchemeKind& scheme, const ComplexField& zn, const GridSpec& grid,
                const SolverConfig& cfg) {
  grid.validate();
  cfg.validate();
  zn.validate();
  if (zn.size() != static_cast<std::size_t>(grid.unknowns()))
    throw std::invalid_argument("field length does not match the grid");
  const double dt = grid.dt();
  if (!(dt > 0.0)) throw std::invalid_argument("grid has no time step to take");
  const double dx = grid.dx();
  const double alpha = scheme_alpha(scheme, dt);

  StepResult result;
  result.znp1 = zn;
  ComplexField& w = result.znp1;
  NewtonStats& stats = result.stats;

  ResidualRows rows = scheme_residual(scheme, StepPair{zn, w, dt, dx});
  double rnorm = rows.max_norm();
  stats.iterations = 1;

  ComplexField best = w;
  double best_norm = rnorm;
  int stalled = 0;

  std::vector<Block2> diag;
  Block2 off;
  std::vector<double> neg_r(2 * zn.size());

  while (true) {
    if (best_norm <= cfg.tol_residual) {
      w = best;
      stats.final_residual_norm = best_norm;
      stats.converged = true;
      return result;
    }
    const double floor = residual_floor(alpha, dt, dx, zn, best);
    if (stalled >= 2 && best_norm <= floor) {
      w = best;
      stats.final_residual_norm = best_norm;
      stats.floor_limited = true;
      return result;
    }
    if (stats.iterations >= cfg.max_iters || stalled >= 4) {
      w = best;
      stats.final_residual_norm = best_norm;
      result.error = StepError::MaxIterations;
      return result;
    }

    scheme_jacobian(scheme, StepPair{zn, w, dt, dx}, diag, off);
    if (cfg.jacobian_mode == JacobianMode::FiniteDifferenceCheck) {
      const double gap = jacobian_fd_check(scheme, StepPair{zn, w, dt, dx});
      if (gap > 1e-6) throw std::logic_error("analytic Jacobian disagrees with differences");
    }
    std::vector<double> increment;
    try {
      const CyclicBlockSolver solver(diag, off);
      for (std::size_t m = 0; m < zn.size(); ++m) {
        neg_r[2 * m] = -rows.row1[m];
        neg_r[2 * m + 1] = -rows.row2[m];
      }
      increment = solver.solve(neg_r);
#ifndef NDEBUG
      const std::vector<double> check = solver.apply(increment);
      double resid = 0.0;
      for (std::size_t i = 0; i < check.size(); ++i)
        resid = std::max(resid, std::fabs(check[i] - neg_r[i]));
      assert(resid <= 1e-12 * std::max(1.0, max_abs(neg_r)));
#endif
    } catch (const std::runtime_error&) {
      w = best;
      stats.final_residual_norm = best_norm;
      result.error = StepError::SingularJacobian;
      return result;
    }

    for (std::size_t m = 0; m < zn.size(); ++m) {
      w.u[m] += increment[2 * m];
      w.v[m] += increment[2 * m + 1];
    }
    if (!w.finite()) {
      w = best;
      stats.final_residual_norm = best_norm;
      result.error = StepError::NonFinite;
      return result;
    }
    stats.prev_increment_norm = stats.last_increment_norm;
    stats.last_increment_norm = max_abs(increment);

    rows = scheme_residual(scheme, StepPair{zn, w, dt, dx});
    rnorm = rows.max_norm();
    ++stats.iterations;

    if (rnorm < best_norm * (1.0 - 1e-2)) {
      stalled = 0;
    } else {
      ++stalled;
    }
    if (rnorm < best_norm) {
      best = w;
      best_norm = rnorm;
    }
  }
}

}  // namespace efdvd
