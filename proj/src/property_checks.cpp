#include "efdvd/property_checks.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

#include "efdvd/breather.hpp"
#include "efdvd/conservation.hpp"
#include "efdvd/dvd_generic.hpp"
#include "efdvd/ef_weights.hpp"
#include "efdvd/grid.hpp"
#include "efdvd/newton_solver.hpp"
#include "efdvd/nls_schemes.hpp"

namespace efdvd {

namespace {

// deterministic across platforms: raw engine bits, not distribution objects
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  double sym() {  // uniform on [-1, 1]
    return 2.0 * (static_cast<double>(eng() >> 11) * 0x1p-53) - 1.0;
  }

  Cplx cplx() { return {sym(), sym()}; }
};

ComplexField random_field(Rng& rng, int len) {
  ComplexField z;
  z.u.resize(len);
  z.v.resize(len);
  for (int m = 0; m < len; ++m) {
    z.u[m] = rng.sym();
    z.v[m] = rng.sym();
  }
  return z;
}

// max_m |(G_np1 - G_n)/dt + (F_{m+1} - F_m)/dx - rhs_m|
double divergence_mismatch(const std::vector<double>& f, const std::vector<double>& g_n,
                           const std::vector<double>& g_np1, double dt, double dx,
                           const std::vector<double>& rhs) {
  const int len = static_cast<int>(f.size());
  double worst = 0.0;
  for (int m = 0; m < len; ++m) {
    const double lhs = (g_np1[m] - g_n[m]) / dt + (f[(m + 1) % len] - f[m]) / dx;
    worst = std::max(worst, std::fabs(lhs - rhs[m]));
  }
  return worst;
}

CheckResult charge_identity(Rng& rng) {
  const int len = 15;  // M = 16 nodes
  const double dx = 2.0 * std::numbers::pi / len;
  const double dt = 0.1;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexField zn = random_field(rng, len);
    const ComplexField znp1 = random_field(rng, len);
    const StepPair pair{zn, znp1, dt, dx};
    for (double alpha : {1.0, 0.7}) {
      const ResidualRows rows = residual_dvd(pair, alpha);
      const ChargeFluxDensity d = charge_flux_density(pair, alpha);
      std::vector<double> rhs(len);
      for (int m = 0; m < len; ++m) {
        const double ub = 0.5 * (zn.u[m] + znp1.u[m]);
        const double vb = 0.5 * (zn.v[m] + znp1.v[m]);
        rhs[m] = 2.0 * ub * rows.row1[m] - 2.0 * vb * rows.row2[m];
      }
      worst = std::max(worst, divergence_mismatch(d.F1, d.G1_n, d.G1_np1, dt, dx, rhs));
    }
  }
  return {"charge-identity", worst <= 1e-12, worst, 1e-12};
}

CheckResult energy_identity(Rng& rng) {
  const int len = 15;
  const double dx = 2.0 * std::numbers::pi / len;
  const double dt = 0.1;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexField zn = random_field(rng, len);
    const ComplexField znp1 = random_field(rng, len);
    const StepPair pair{zn, znp1, dt, dx};
    const EnergyFluxDensity d = energy_flux_density(pair);
    for (bool avf : {false, true}) {
      for (double alpha : {1.0, 0.7}) {
        const ResidualRows rows =
            avf ? residual_avf(pair, alpha) : residual_dvd(pair, alpha);
        std::vector<double> rhs(len);
        for (int m = 0; m < len; ++m) {
          const double du = (znp1.u[m] - zn.u[m]) / dt;
          const double dv = (znp1.v[m] - zn.v[m]) / dt;
          rhs[m] = -2.0 * dv * rows.row1[m] - 2.0 * du * rows.row2[m];
        }
        worst = std::max(worst, divergence_mismatch(d.F2, d.G2_n, d.G2_np1, dt, dx, rhs));
      }
    }
  }
  return {"energy-identity", worst <= 1e-11, worst, 1e-11};
}

CheckResult cross_checks(Rng& rng, bool avf) {
  const int len = 15;
  const double dx = 2.0 * std::numbers::pi / len;
  const double dt = 0.1;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexField zn = random_field(rng, len);
    const ComplexField znp1 = random_field(rng, len);
    const StepPair pair{zn, znp1, dt, dx};
    worst = std::max(worst, avf ? avf_gradient_check(pair) : dvd_cross_check(pair));
  }
  if (avf) return {"avf-gradient-check", worst <= 1e-12, worst, 1e-12};
  return {"dvd-cross-check", worst <= 1e-11, worst, 1e-11};
}

CheckResult rho_property(Rng& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Cplx s1 = rng.cplx();
    const Cplx s2 = rng.cplx();
    for (int k = 2; k <= 6; ++k) {
      const Cplx r = rho(k, s1, s2);
      const Cplx lhs = r * (s1 - s2) + std::conj(r) * (std::conj(s1) - std::conj(s2));
      const double rhs =
          std::pow(std::abs(s1), k) - std::pow(std::abs(s2), k);
      const double scale =
          std::max(1.0, std::pow(std::abs(s1), k) + std::pow(std::abs(s2), k));
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
  }
  return {"rho-discrete-gradient", worst <= 1e-12, worst, 1e-12};
}

CheckResult fitting_exactness() {
  const double dt = 0.1;
  double worst = 0.0;
  for (double theta : {0.01, 0.1, 0.25, 1.0, 3.0}) {
    const FitParams params(theta / dt, dt);
    for (int i = 0; i <= 10; ++i)
      worst = std::max(worst, check_fitting_exactness(params, 0.1 * i));
  }
  return {"fitting-exactness", worst <= 1e-13, worst, 1e-13};
}

CheckResult alpha_zero_limit() {
  const double worst = std::fabs(alpha(FitParams(1e-8, 1.0)) - 1.0);
  return {"alpha-zero-limit", worst <= 1e-15, worst, 1e-15};
}

CheckResult jacobian_check(Rng& rng) {
  const int len = 7;  // M = 8 nodes
  const double dx = 2.0 * std::numbers::pi / len;
  const double dt = 0.1;
  const SchemeKind kinds[] = {{SchemeVariant::Dvd, 0.0},
                              {SchemeVariant::EfDvd, 5.0},
                              {SchemeVariant::Avf, 0.0},
                              {SchemeVariant::EfAvf, 5.0}};
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexField zn = random_field(rng, len);
    const ComplexField znp1 = random_field(rng, len);
    const StepPair pair{zn, znp1, dt, dx};
    for (const SchemeKind& kind : kinds)
      worst = std::max(worst, jacobian_fd_check(kind, pair));
  }
  return {"jacobian-fd", worst <= 1e-6, worst, 1e-6};
}

CheckResult ef_degeneration() {
  const double dt = 0.01 / 32.0;
  GridSpec grid;
  grid.a = -std::numbers::pi / 7.0;
  grid.b = std::numbers::pi / 7.0;
  grid.num_nodes = 1001;
  grid.num_steps = 10;
  grid.t_final = grid.num_steps * dt;
  const BreatherParams breather{1.4, 25.0};
  const double omega = 1e-6 / dt;  // omega*dt = 1e-6
  const SolverConfig cfg;

  double worst = 0.0;
  for (bool avf : {false, true}) {
    const SchemeKind classic{avf ? SchemeVariant::Avf : SchemeVariant::Dvd, omega};
    const SchemeKind fitted{avf ? SchemeVariant::EfAvf : SchemeVariant::EfDvd, omega};
    ComplexField zc = breather_field(breather, grid, 0.0);
    ComplexField zf = zc;
    for (int n = 0; n < grid.num_steps; ++n) {
      const StepResult rc = step(classic, zc, grid, cfg);
      const StepResult rf = step(fitted, zf, grid, cfg);
      if (!rc.ok() || !rf.ok())
        return {"ef-degeneration", false, std::numeric_limits<double>::infinity(), 1e-8};
      zc = rc.znp1;
      zf = rf.znp1;
      for (std::size_t m = 0; m < zc.size(); ++m) {
        worst = std::max(worst, std::fabs(zc.u[m] - zf.u[m]));
        worst = std::max(worst, std::fabs(zc.v[m] - zf.v[m]));
      }
    }
  }
  return {"ef-degeneration", worst <= 1e-8, worst, 1e-8};
}

}  // namespace

std::vector<CheckResult> run_property_checks(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CheckResult> results;
  results.push_back(charge_identity(rng));
  results.push_back(energy_identity(rng));
  results.push_back(cross_checks(rng, false));
  results.push_back(cross_checks(rng, true));
  results.push_back(rho_property(rng));
  results.push_back(fitting_exactness());
  results.push_back(alpha_zero_limit());
  results.push_back(jacobian_check(rng));
  results.push_back(ef_degeneration());
  return results;
}

}  // namespace efdvd
