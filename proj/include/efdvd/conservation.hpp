#pragma once

#include <span>
#include <vector>

#include "efdvd/grid.hpp"
#include "efdvd/nls_schemes.hpp"

namespace efdvd {

struct LocalCLReport {
  double err1 = 0.0;  // worst pointwise charge-law residual over (m, n)
  double err2 = 0.0;  // worst pointwise energy-law residual over (m, n)
};

struct GlobalInvariantReport {
  double errM = 0.0;  // max_n |charge_n - charge_0|
  double errH = 0.0;  // max_n |energy_n - energy_0|
};

/** Charge flux and density of a level pair in characteristic form.  With
 * time-averaged components ub = mu_t(u), vb = mu_t(v):
 *
 *   F1[m] = 2 * mu_x(ub)_{m-1} * dm(vb)_m - 2 * dm(ub)_m * mu_x(vb)_{m-1}
 *   G1[m] = alpha * (u_m^2 + v_m^2)   per level
 *
 * (dm = backward difference, mu_x = forward average, cyclic indices), and the
 * exact identity  dt+(G1) + dx+(F1) = 2*ub*row1 - 2*vb*row2  holds entrywise
 * for the residual rows of residual_dvd at the same alpha, for arbitrary
 * fields, to roundoff. */
struct ChargeFluxDensity {
  std::vector<double> F1, G1_n, G1_np1;
};
ChargeFluxDensity charge_flux_density(const StepPair& pair, double alpha);

/** Energy flux and density.  With Du = dt+(u), Dv = dt+(v):
 *
 *   F2[m] = -2 * dm(ub)_m * mu_x(Du)_{m-1} - 2 * dm(vb)_m * mu_x(Dv)_{m-1}
 *   G2[m] = ( (dp u)^2 + (dm u)^2 + (dp v)^2 + (dm v)^2 )/2 - (u^2+v^2)^2/2
 *
 * per level; the identity  dt+(G2) + dx+(F2) = -2*Dv*row1 - 2*Du*row2  holds
 * entrywise for the rows of every scheme variant (the cross terms of the
 * averaged-gradient rows cancel against the multiplier). */
struct EnergyFluxDensity {
  std::vector<double> F2, G2_n, G2_np1;
};
EnergyFluxDensity energy_flux_density(const StepPair& pair);

/// dx * sum_m (u^2 + v^2).
double global_charge(const ComplexField& z, double dx);
/// dx * sum_m G2[m]; agrees with the semidiscrete energy of the cubic density.
double global_energy(const ComplexField& z, double dx);

/** Streaming diagnostics over the levels of one run: keeps only the previous
 * level plus running maxima.  The charge density carries the fitted alpha for
 * the fitted discrete-variational scheme (where it is the conserved density)
 * and 1 otherwise. */
class ConservationAccumulator {
 public:
  ConservationAccumulator(const GridSpec& grid, const SchemeKind& scheme);

  void start(const ComplexField& level0);
  void push(const ComplexField& next);

  LocalCLReport local() const { return local_; }
  GlobalInvariantReport global() const { return global_; }
  long long levels_seen() const { return levels_; }

 private:
  double dx_, dt_, charge_alpha_;
  ComplexField prev_;
  double charge0_ = 0.0, energy0_ = 0.0;
  LocalCLReport local_;
  GlobalInvariantReport global_;
  long long levels_ = 0;
};

/// Batch forms of the accumulator over a stored trajectory.
LocalCLReport local_cl_residuals(std::span<const ComplexField> levels, const GridSpec& grid,
                                 const SchemeKind& scheme);
GlobalInvariantReport global_invariants(std::span<const ComplexField> levels,
                                        const GridSpec& grid);

}  // namespace efdvd
