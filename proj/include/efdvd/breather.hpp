#pragma once

#include <span>
#include <vector>

#include "efdvd/grid.hpp"

namespace efdvd {

/** Parameters of the exact breather solution of i z_t + z_xx + |z|^2 z = 0,
 *
 *   z(x,t) = [ (2 b^2 cosh(th) + 2 i b s sinh(th))
 *              / (2 cosh(th) - sqrt(4 - 2 b^2) cos(sqrt(w) b x)) - 1 ]
 *            * sqrt(w) * e^{i w t},
 *
 * with s = sqrt(2 - b^2) and th = w b s t.  The spatial period is
 * 2 pi / (sqrt(w) b); with w = 25, b = 1.4 the interval [-pi/7, pi/7] is one
 * full period. */
struct BreatherParams {
  double beta = 1.4;
  double omega = 25.0;

  void validate() const;  // requires 0 < beta < sqrt(2), omega > 0
};

Cplx breather(const BreatherParams& p, double x, double t);

/// Exact solution sampled on the stored nodes x_m = a + m dx, m = 0..M-2.
ComplexField breather_field(const BreatherParams& p, const GridSpec& grid, double t);

/// Relative l2 solution error
///   sqrt( (||u_num - u||^2 + ||v_num - v||^2) / (||u||^2 + ||v||^2) ).
double sol_err(const ComplexField& numeric, const ComplexField& exact);

/** Convergence orders from a sequence of solution errors at halved steps:
 * order_k = log2(err_{k-1}/err_k) for k >= 1.  An entry is flagged as
 * floor-limited when its order drops below 1 while the error sits within a
 * factor 4 of the smallest error in the sequence — i.e. halving the step no
 * longer helps because the spatial error dominates.  (A low-order entry far
 * above the floor, as in a pre-asymptotic first ratio, is not flagged.) */
struct OrderEntry {
  double order = 0.0;
  bool floored = false;
};
std::vector<OrderEntry> order_estimate(std::span<const double> errs);

}  // namespace efdvd
