#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace efdvd {

/// One algebraic property evaluated on seeded random data.
struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;      // worst discrepancy observed
  double threshold = 0.0;  // contract bound
};

/** The identity/property suite behind the `check` subcommand.  Everything here
 * is an algebraic statement about the discrete operators — no reference
 * solutions, no convergence:
 *
 *   - charge identity       delta_n+ G1 + delta_m+ F1 = 2 mu_n(u) row1 - 2 mu_n(v) row2
 *                           for the alpha-weighted two-level rows, alpha in {1, 0.7}
 *   - energy identity       delta_n+ G2 + delta_m+ F2 = -2 delta_n+(v) row1 - 2 delta_n+(u) row2
 *                           for both nonlinear treatments and alpha in {1, 0.7}
 *   - generic-machinery and quadrature cross-checks (dvd_cross_check, avf_gradient_check)
 *   - rho discrete-gradient property, k = 2..6
 *   - fitting-weight exactness on the trigonometric space, alpha -> 1 as omega -> 0
 *   - analytic vs finite-difference Jacobian, all schemes
 *   - fitted schemes degenerate to their classic counterparts as omega*dt -> 0
 */
std::vector<CheckResult> run_property_checks(std::uint64_t seed = 12345);

}  // namespace efdvd
