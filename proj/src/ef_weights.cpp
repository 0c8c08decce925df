#include "efdvd/ef_weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace efdvd {

FitParams::FitParams(double omega_, double dt_) : omega(omega_), dt(dt_) {
  if (!std::isfinite(omega) || omega < 0.0)
    throw std::domain_error("fitting frequency must be finite and nonnegative");
  if (!std::isfinite(dt) || !(dt > 0.0))
    throw std::domain_error("fitting step must be finite and positive");
  if (theta() >= std::numbers::pi)
    throw std::domain_error("fitting weight has a pole: omega*dt must stay below pi");
}

double alpha_from_theta(double theta) {
  const double t = std::fabs(theta);
  if (!std::isfinite(t)) throw std::domain_error("non-finite fitting angle");
  if (t >= std::numbers::pi)
    throw std::domain_error("fitting weight has a pole: omega*dt must stay below pi");
  if (t < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 12.0 - t2 * t2 / 720.0;
  }
  return t * (1.0 + std::cos(t)) / (2.0 * std::sin(t));
}

double alpha(const FitParams& p) { return alpha_from_theta(p.theta()); }

double check_fitting_exactness(const FitParams& p, double t) {
  const double a = alpha(p);
  const double dt = p.dt;
  const double w = p.omega;
  // u = 1: both sides vanish identically
  double worst = 0.0;
  {
    // u = cos(w s), u' = -w sin(w s)
    const double lhs = a * (std::cos(w * (t + dt)) - std::cos(w * t));
    const double rhs = 0.5 * dt * (-w * std::sin(w * (t + dt)) - w * std::sin(w * t));
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  {
    // u = sin(w s), u' = w cos(w s)
    const double lhs = a * (std::sin(w * (t + dt)) - std::sin(w * t));
    const double rhs = 0.5 * dt * (w * std::cos(w * (t + dt)) + w * std::cos(w * t));
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

}  // namespace efdvd
