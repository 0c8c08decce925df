#include "efdvd/nls_schemes.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "efdvd/dvd_generic.hpp"
#include "efdvd/ef_weights.hpp"

namespace efdvd {

namespace {

struct Levels {
  std::size_t n;
  const std::vector<double>&u, &v, &U, &V;
  std::vector<double> d2u_n, d2v_n, d2u_np1, d2v_np1;

  explicit Levels(const StepPair& pair)
      : n(pair.zn.size()),
        u(pair.zn.u),
        v(pair.zn.v),
        U(pair.znp1.u),
        V(pair.znp1.v),
        d2u_n(delta_2(pair.zn.u, pair.dx)),
        d2v_n(delta_2(pair.zn.v, pair.dx)),
        d2u_np1(delta_2(pair.znp1.u, pair.dx)),
        d2v_np1(delta_2(pair.znp1.v, pair.dx)) {}
};

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::domain_error("time-derivative weight must be positive and finite");
}

}  // namespace

std::string scheme_name(const SchemeKind& kind) {
  switch (kind.variant) {
    case SchemeVariant::Dvd: return "dvd";
    case SchemeVariant::EfDvd: return "ef-dvd";
    case SchemeVariant::Avf: return "avf";
    case SchemeVariant::EfAvf: return "ef-avf";
  }
  throw std::invalid_argument("unknown scheme variant");
}

double scheme_alpha(const SchemeKind& kind, double dt) {
  if (!kind.fitted()) return 1.0;
  return alpha(FitParams(kind.omega, dt));
}

void StepPair::validate() const {
  zn.validate();
  znp1.validate();
  if (zn.size() != znp1.size()) throw std::invalid_argument("time levels differ in length");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::domain_error("dt must be positive");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw std::domain_error("dx must be positive");
}

double ResidualRows::max_norm() const {
  double worst = 0.0;
  for (double x : row1) worst = std::max(worst, std::fabs(x));
  for (double x : row2) worst = std::max(worst, std::fabs(x));
  return worst;
}

ResidualRows residual_dvd(const StepPair& pair, double alpha) {
  pair.validate();
  require_alpha(alpha);
  const Levels lv(pair);
  ResidualRows out{std::vector<double>(lv.n), std::vector<double>(lv.n)};
  for (std::size_t m = 0; m < lv.n; ++m) {
    const double u = lv.u[m], v = lv.v[m], U = lv.U[m], V = lv.V[m];
    const double w = 0.5 * ((u * u + v * v) + (U * U + V * V));
    const double ub = 0.5 * (u + U);
    const double vb = 0.5 * (v + V);
    out.row1[m] =
        alpha * ((U - u) / pair.dt) + 0.5 * (lv.d2v_n[m] + lv.d2v_np1[m]) + w * vb;
    out.row2[m] =
        -alpha * ((V - v) / pair.dt) + 0.5 * (lv.d2u_n[m] + lv.d2u_np1[m]) + w * ub;
  }
  return out;
}

ResidualRows residual_avf(const StepPair& pair, double alpha) {
  pair.validate();
  require_alpha(alpha);
  const Levels lv(pair);
  ResidualRows out{std::vector<double>(lv.n), std::vector<double>(lv.n)};
  for (std::size_t m = 0; m < lv.n; ++m) {
    const double u = lv.u[m], v = lv.v[m], U = lv.U[m], V = lv.V[m];
    const double ub = 0.5 * (u + U);
    const double vb = 0.5 * (v + V);
    const double nl1 = (0.5 * (v * v + V * V) + (2.0 / 3.0) * ub * ub) * vb +
                       (u * u * v + U * U * V) / 6.0;
    const double nl2 = (0.5 * (u * u + U * U) + (2.0 / 3.0) * vb * vb) * ub +
                       (v * v * u + V * V * U) / 6.0;
    out.row1[m] = alpha * ((U - u) / pair.dt) + 0.5 * (lv.d2v_n[m] + lv.d2v_np1[m]) + nl1;
    out.row2[m] = -alpha * ((V - v) / pair.dt) + 0.5 * (lv.d2u_n[m] + lv.d2u_np1[m]) + nl2;
  }
  return out;
}

ResidualRows scheme_residual(const SchemeKind& kind, const StepPair& pair) {
  const double a = scheme_alpha(kind, pair.dt);
  return kind.avf_family() ? residual_avf(pair, a) : residual_dvd(pair, a);
}

double avf_gradient_check(const StepPair& pair) {
  pair.validate();
  // Gauss-Legendre nodes on [0,1]; the integrand is cubic in xi, so the
  // two-point rule integrates it exactly.
  const double xi1 = 0.5 - 0.5 / std::sqrt(3.0);
  const double xi2 = 0.5 + 0.5 / std::sqrt(3.0);
  const std::size_t n = pair.zn.size();
  double worst = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const double u = pair.zn.u[m], v = pair.zn.v[m];
    const double U = pair.znp1.u[m], V = pair.znp1.v[m];
    const double ub = 0.5 * (u + U);
    const double vb = 0.5 * (v + V);
    const double nl1 = (0.5 * (v * v + V * V) + (2.0 / 3.0) * ub * ub) * vb +
                       (u * u * v + U * U * V) / 6.0;
    const double nl2 = (0.5 * (u * u + U * U) + (2.0 / 3.0) * vb * vb) * ub +
                       (v * v * u + V * V * U) / 6.0;
    double q1 = 0.0, q2 = 0.0;
    for (double xi : {xi1, xi2}) {
      const double uxi = (1.0 - xi) * u + xi * U;
      const double vxi = (1.0 - xi) * v + xi * V;
      const double mod2 = uxi * uxi + vxi * vxi;
      q1 += 0.5 * mod2 * vxi;
      q2 += 0.5 * mod2 * uxi;
    }
    worst = std::max(worst, std::fabs(nl1 - q1));
    worst = std::max(worst, std::fabs(nl2 - q2));
  }
  return worst;
}

double dvd_cross_check(const StepPair& pair) {
  pair.validate();
  const ResidualRows closed = residual_dvd(pair, 1.0);
  const std::vector<Cplx> dvd =
      discrete_variational_derivative(HamiltonianSpec::nls(), pair.zn, pair.znp1, pair.dx);
  const std::size_t n = pair.zn.size();
  double worst = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const Cplx dz = (pair.znp1.at(m) - pair.zn.at(m)) / pair.dt;
    const Cplx c = Cplx{0.0, 1.0} * dz - dvd[m];
    worst = std::max(worst, std::fabs(c.imag() - closed.row1[m]));
    worst = std::max(worst, std::fabs(c.real() - closed.row2[m]));
  }
  return worst;
}

}  // namespace efdvd
