#pragma once

#include <vector>

#include "efdvd/cyclic_block_solver.hpp"
#include "efdvd/grid.hpp"
#include "efdvd/nls_schemes.hpp"

namespace efdvd {

enum class JacobianMode { Analytic, FiniteDifferenceCheck };

struct SolverConfig {
  double tol_residual = 1e-12;  // max-norm target for the residual rows
  int max_iters = 25;
  JacobianMode jacobian_mode = JacobianMode::Analytic;

  void validate() const;
};

/** Per-step iteration record.  iterations counts residual evaluations (the
 * initial guess counts as one, so an exact initial guess reports 1), and
 * converged holds exactly when final_residual_norm <= tol_residual.
 *
 * A step can also be accepted with converged = false when the iteration
 * stalls at the evaluation roundoff floor of the residual (floor_limited =
 * true): the second differences and the squared moduli in the rows set a
 * data-dependent lower bound on any evaluated residual, and demanding
 * tol_residual below it would reject iterates that are exact roots up to
 * last-place rounding of the stored fields. */
struct NewtonStats {
  int iterations = 0;
  double final_residual_norm = 0.0;
  bool converged = false;
  bool floor_limited = false;
  double last_increment_norm = 0.0;
  double prev_increment_norm = 0.0;
};

enum class StepError { None, MaxIterations, SingularJacobian, NonFinite };

struct StepResult {
  ComplexField znp1;
  NewtonStats stats;
  StepError error = StepError::None;

  bool ok() const { return error == StepError::None; }
};

/** One implicit time step: solve the selected scheme's rows for the next
 * level by Newton iteration with the analytic periodic block-tridiagonal
 * Jacobian, starting from the previous level.  Non-convergence and singular
 * Jacobians are reported through StepResult::error, never by exception. */
StepResult step(const SchemeKind& scheme, const ComplexField& zn, const GridSpec& grid,
                const SolverConfig& cfg);

/// Jacobian blocks of the residual rows with respect to (u_{n+1}, v_{n+1}),
/// packed per node; the off-diagonal/corner block is constant.
void scheme_jacobian(const SchemeKind& scheme, const StepPair& pair,
                     std::vector<Block2>& diag, Block2& off);

/// Dense 2(M-1) x 2(M-1) Jacobian assembled from the blocks (row/column
/// order: u_0, v_0, u_1, v_1, ...); for small-grid checks.
std::vector<double> dense_jacobian(const SchemeKind& scheme, const StepPair& pair);

/// Max-norm relative gap between the analytic Jacobian and a central
/// finite-difference Jacobian; intended for small grids.
double jacobian_fd_check(const SchemeKind& scheme, const StepPair& pair);

}  // namespace efdvd
