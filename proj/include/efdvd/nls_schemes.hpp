#pragma once

#include <string>
#include <vector>

#include "efdvd/grid.hpp"

namespace efdvd {

enum class SchemeVariant { Dvd, EfDvd, Avf, EfAvf };

/** Time integrator selector.  The fitted variants weight the discrete time
 * derivative by alpha(omega*dt) so that one-step integration is exact on
 * span{1, cos(omega t), sin(omega t)}; the classic variants pin alpha = 1
 * and ignore omega. */
struct SchemeKind {
  SchemeVariant variant = SchemeVariant::Dvd;
  double omega = 0.0;

  bool fitted() const {
    return variant == SchemeVariant::EfDvd || variant == SchemeVariant::EfAvf;
  }
  bool avf_family() const {
    return variant == SchemeVariant::Avf || variant == SchemeVariant::EfAvf;
  }
};

std::string scheme_name(const SchemeKind& kind);  // "dvd", "ef-dvd", "avf", "ef-avf"

/// Weight in front of the discrete time derivative: 1 for classic variants,
/// the fitted alpha(omega*dt) otherwise.  Throws for fitted omega*dt >= pi.
double scheme_alpha(const SchemeKind& kind, double dt);

/// Two consecutive time levels plus the grid steps, the argument of every
/// residual and diagnostic below.
struct StepPair {
  const ComplexField& zn;
  const ComplexField& znp1;
  double dt;
  double dx;

  void validate() const;
};

/// Entrywise residual rows of a one-step scheme; a pair (zn, znp1) solves the
/// scheme exactly when both rows vanish.
struct ResidualRows {
  std::vector<double> row1, row2;

  double max_norm() const;
};

/** Rows of the two-level discrete-variational scheme for i z_t + z_xx + |z|^2 z = 0:
 *
 *   row1 = alpha*d_t u + mu_t(d2 v) + mu_t(u^2+v^2) * mu_t(v)
 *   row2 = -alpha*d_t v + mu_t(d2 u) + mu_t(u^2+v^2) * mu_t(u)
 *
 * where d_t is the forward time difference, mu_t the two-level average, and
 * d2 the periodic second difference (applied per level, then averaged, which
 * keeps the conservation identities exact to roundoff).  mu_t(u^2+v^2)
 * averages the squared moduli of the two levels.
 */
ResidualRows residual_dvd(const StepPair& pair, double alpha);

/** Rows of the averaged-gradient scheme: same linear part as residual_dvd,
 * nonlinear terms equal to the exact xi-integral of the cubic gradient along
 * the segment between the levels,
 *
 *   nl1 = (mu_t(v^2) + (2/3) mu_t(u)^2) * mu_t(v) + (1/3) mu_t(u^2 v)
 *
 * and symmetrically for nl2 with u and v exchanged.  (The squared-average
 * form (2/3) mu_t(u)^2 is what the integral produces; see the quadrature
 * check below.) */
ResidualRows residual_avf(const StepPair& pair, double alpha);

/// Dispatch on kind.variant with alpha = scheme_alpha(kind, pair.dt).
ResidualRows scheme_residual(const SchemeKind& kind, const StepPair& pair);

/** Max-norm gap between the closed-form nonlinear terms of residual_avf and
 * the segment integral of the cubic gradient evaluated by two-point
 * Gauss-Legendre quadrature (exact for the cubic integrand); roundoff-level
 * by construction. */
double avf_gradient_check(const StepPair& pair);

/** Max-norm gap between residual_dvd(pair, 1) and the residual assembled
 * from the generic discrete variational derivative of the cubic Schroedinger
 * density: rows of i*d_t z - dvd(zn, znp1). */
double dvd_cross_check(const StepPair& pair);

}  // namespace efdvd
