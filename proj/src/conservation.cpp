#include "efdvd/conservation.hpp"

#include <cmath>
#include <stdexcept>

namespace efdvd {

namespace {

std::vector<double> charge_density(const ComplexField& z, double alpha) {
  std::vector<double> g(z.size());
  for (std::size_t m = 0; m < z.size(); ++m)
    g[m] = alpha * (z.u[m] * z.u[m] + z.v[m] * z.v[m]);
  return g;
}

std::vector<double> energy_density(const ComplexField& z, double dx) {
  const std::vector<double> dpu = delta_plus(z.u, dx);
  const std::vector<double> dmu = delta_minus(z.u, dx);
  const std::vector<double> dpv = delta_plus(z.v, dx);
  const std::vector<double> dmv = delta_minus(z.v, dx);
  std::vector<double> g(z.size());
  for (std::size_t m = 0; m < z.size(); ++m) {
    const double mod2 = z.u[m] * z.u[m] + z.v[m] * z.v[m];
    g[m] = 0.5 * (dpu[m] * dpu[m] + dmu[m] * dmu[m] + dpv[m] * dpv[m] + dmv[m] * dmv[m]) -
           0.5 * mod2 * mod2;
  }
  return g;
}

// worst over m of |dt+(G) + dx+(F)|
double divergence_max(const std::vector<double>& F, const std::vector<double>& G_n,
                      const std::vector<double>& G_np1, double dt, double dx) {
  const std::size_t n = F.size();
  double worst = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const double div =
        (G_np1[m] - G_n[m]) / dt + (F[(m + 1) % n] - F[m]) / dx;
    worst = std::max(worst, std::fabs(div));
  }
  return worst;
}

}  // namespace

ChargeFluxDensity charge_flux_density(const StepPair& pair, double alpha) {
  pair.validate();
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::domain_error("charge density weight must be positive");
  const std::size_t n = pair.zn.size();
  ChargeFluxDensity out;
  out.G1_n = charge_density(pair.zn, alpha);
  out.G1_np1 = charge_density(pair.znp1, alpha);
  out.F1.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t mm = (m + n - 1) % n;
    const double ub = 0.5 * (pair.zn.u[m] + pair.znp1.u[m]);
    const double ubm = 0.5 * (pair.zn.u[mm] + pair.znp1.u[mm]);
    const double vb = 0.5 * (pair.zn.v[m] + pair.znp1.v[m]);
    const double vbm = 0.5 * (pair.zn.v[mm] + pair.znp1.v[mm]);
    out.F1[m] = 2.0 * (0.5 * (ub + ubm)) * ((vb - vbm) / pair.dx) -
                2.0 * ((ub - ubm) / pair.dx) * (0.5 * (vb + vbm));
  }
  return out;
}

EnergyFluxDensity energy_flux_density(const StepPair& pair) {
  pair.validate();
  const std::size_t n = pair.zn.size();
  EnergyFluxDensity out;
  out.G2_n = energy_density(pair.zn, pair.dx);
  out.G2_np1 = energy_density(pair.znp1, pair.dx);
  out.F2.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t mm = (m + n - 1) % n;
    const double ub = 0.5 * (pair.zn.u[m] + pair.znp1.u[m]);
    const double ubm = 0.5 * (pair.zn.u[mm] + pair.znp1.u[mm]);
    const double vb = 0.5 * (pair.zn.v[m] + pair.znp1.v[m]);
    const double vbm = 0.5 * (pair.zn.v[mm] + pair.znp1.v[mm]);
    const double du = (pair.znp1.u[m] - pair.zn.u[m]) / pair.dt;
    const double dum = (pair.znp1.u[mm] - pair.zn.u[mm]) / pair.dt;
    const double dv = (pair.znp1.v[m] - pair.zn.v[m]) / pair.dt;
    const double dvm = (pair.znp1.v[mm] - pair.zn.v[mm]) / pair.dt;
    out.F2[m] = -2.0 * ((ub - ubm) / pair.dx) * (0.5 * (du + dum)) -
                2.0 * ((vb - vbm) / pair.dx) * (0.5 * (dv + dvm));
  }
  return out;
}

double global_charge(const ComplexField& z, double dx) {
  z.validate();
  double sum = 0.0;
  for (std::size_t m = 0; m < z.size(); ++m) sum += z.u[m] * z.u[m] + z.v[m] * z.v[m];
  return dx * sum;
}

double global_energy(const ComplexField& z, double dx) {
  z.validate();
  const std::vector<double> g = energy_density(z, dx);
  double sum = 0.0;
  for (double x : g) sum += x;
  return dx * sum;
}

ConservationAccumulator::ConservationAccumulator(const GridSpec& grid,
                                                 const SchemeKind& scheme) {
  grid.validate();
  dx_ = grid.dx();
  dt_ = grid.dt();
  charge_alpha_ =
      scheme.variant == SchemeVariant::EfDvd ? scheme_alpha(scheme, dt_) : 1.0;
}

void ConservationAccumulator::start(const ComplexField& level0) {
  level0.validate();
  prev_ = level0;
  charge0_ = global_charge(level0, dx_);
  energy0_ = global_energy(level0, dx_);
  local_ = {};
  global_ = {};
  levels_ = 1;
}

void ConservationAccumulator::push(const ComplexField& next) {
  if (levels_ == 0) throw std::logic_error("push before start");
  next.validate();
  const StepPair pair{prev_, next, dt_, dx_};
  const ChargeFluxDensity c = charge_flux_density(pair, charge_alpha_);
  const EnergyFluxDensity e = energy_flux_density(pair);
  local_.err1 = std::max(local_.err1, divergence_max(c.F1, c.G1_n, c.G1_np1, dt_, dx_));
  local_.err2 = std::max(local_.err2, divergence_max(e.F2, e.G2_n, e.G2_np1, dt_, dx_));
  global_.errM = std::max(global_.errM, std::fabs(global_charge(next, dx_) - charge0_));
  global_.errH = std::max(global_.errH, std::fabs(global_energy(next, dx_) - energy0_));
  prev_ = next;
  ++levels_;
}

LocalCLReport local_cl_residuals(std::span<const ComplexField> levels, const GridSpec& grid,
                                 const SchemeKind& scheme) {
  if (levels.empty()) throw std::domain_error("empty trajectory");
  ConservationAccumulator acc(grid, scheme);
  acc.start(levels[0]);
  for (std::size_t i = 1; i < levels.size(); ++i) acc.push(levels[i]);
  return acc.local();
}

GlobalInvariantReport global_invariants(std::span<const ComplexField> levels,
                                        const GridSpec& grid) {
  if (levels.empty()) throw std::domain_error("empty trajectory");
  ConservationAccumulator acc(grid, SchemeKind{});
  acc.start(levels[0]);
  for (std::size_t i = 1; i < levels.size(); ++i) acc.push(levels[i]);
  return acc.global();
}

}  // namespace efdvd
