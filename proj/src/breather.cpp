#include "efdvd/breather.hpp"

#include <cmath>
#include <stdexcept>

namespace efdvd {

void BreatherParams::validate() const {
  if (!std::isfinite(beta) || !(beta > 0.0) || !(beta * beta < 2.0))
    throw std::invalid_argument("breather modulation must satisfy 0 < beta < sqrt(2)");
  if (!std::isfinite(omega) || !(omega > 0.0))
    throw std::invalid_argument("breather frequency must be positive");
}

Cplx breather(const BreatherParams& p, double x, double t) {
  p.validate();
  const double s = std::sqrt(2.0 - p.beta * p.beta);
  const double th = p.omega * p.beta * s * t;
  const double ch = std::cosh(th);
  const double den = 2.0 * ch -
                     std::sqrt(4.0 - 2.0 * p.beta * p.beta) *
                         std::cos(std::sqrt(p.omega) * p.beta * x);
  if (std::fabs(den) < 1e-12) throw std::domain_error("breather singularity");
  const Cplx num{2.0 * p.beta * p.beta * ch, 2.0 * p.beta * s * std::sinh(th)};
  const double root_w = std::sqrt(p.omega);
  const Cplx phase{std::cos(p.omega * t), std::sin(p.omega * t)};
  return (num / den - 1.0) * root_w * phase;
}

ComplexField breather_field(const BreatherParams& p, const GridSpec& grid, double t) {
  p.validate();
  grid.validate();
  const std::size_t n = static_cast<std::size_t>(grid.unknowns());
  ComplexField z(n);
  for (std::size_t m = 0; m < n; ++m) {
    const Cplx value = breather(p, grid.a + static_cast<double>(m) * grid.dx(), t);
    z.u[m] = value.real();
    z.v[m] = value.imag();
  }
  return z;
}

double sol_err(const ComplexField& numeric, const ComplexField& exact) {
  numeric.validate();
  exact.validate();
  if (numeric.size() != exact.size()) throw std::invalid_argument("field length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t m = 0; m < numeric.size(); ++m) {
    const double eu = numeric.u[m] - exact.u[m];
    const double ev = numeric.v[m] - exact.v[m];
    num += eu * eu + ev * ev;
    den += exact.u[m] * exact.u[m] + exact.v[m] * exact.v[m];
  }
  if (den == 0.0) throw std::domain_error("relative error against a zero field");
  return std::sqrt(num / den);
}

std::vector<OrderEntry> order_estimate(std::span<const double> errs) {
  if (errs.size() < 2) throw std::invalid_argument("order estimate needs at least 2 errors");
  double floor = errs[0];
  for (double e : errs) {
    if (!(e > 0.0) || !std::isfinite(e))
      throw std::domain_error("order estimate needs positive errors");
    floor = std::min(floor, e);
  }
  std::vector<OrderEntry> out(errs.size() - 1);
  for (std::size_t k = 1; k < errs.size(); ++k) {
    const double order = std::log2(errs[k - 1] / errs[k]);
    out[k - 1] = {order, order < 1.0 && errs[k] <= 4.0 * floor};
  }
  return out;
}

}  // namespace efdvd
