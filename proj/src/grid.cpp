#include "efdvd/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace efdvd {

namespace {

void require_operand(std::span<const double> f) {
  if (f.size() < 2) throw std::invalid_argument("periodic operator needs at least 2 entries");
  for (double x : f)
    if (!std::isfinite(x)) throw std::domain_error("non-finite entry in periodic operator input");
}

void require_step(double dx) {
  if (!(dx > 0.0) || !std::isfinite(dx)) throw std::domain_error("step must be positive and finite");
}

}  // namespace

void GridSpec::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw std::invalid_argument("grid endpoints must be finite with a < b");
  if (num_nodes < 3) throw std::invalid_argument("grid needs at least 3 nodes");
  if (!std::isfinite(t_final) || t_final < 0.0)
    throw std::invalid_argument("final time must be finite and nonnegative");
  if (num_steps < 0) throw std::invalid_argument("step count must be nonnegative");
  if (t_final == 0.0) {
    if (num_steps != 0) throw std::invalid_argument("T = 0 requires N = 0");
  } else {
    if (num_steps < 1) throw std::invalid_argument("T > 0 requires at least one step");
  }
}

bool ComplexField::finite() const {
  for (double x : u)
    if (!std::isfinite(x)) return false;
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

void ComplexField::validate() const {
  if (u.size() != v.size()) throw std::invalid_argument("field component length mismatch");
  if (u.size() < 2) throw std::invalid_argument("field needs at least 2 nodes");
  if (!finite()) throw std::domain_error("non-finite field entry");
}

std::vector<double> delta_plus(std::span<const double> f, double dx) {
  require_operand(f);
  require_step(dx);
  const std::size_t n = f.size();
  std::vector<double> r(n);
  for (std::size_t m = 0; m < n; ++m) r[m] = (f[(m + 1) % n] - f[m]) / dx;
  return r;
}

std::vector<double> delta_minus(std::span<const double> f, double dx) {
  require_operand(f);
  require_step(dx);
  const std::size_t n = f.size();
  std::vector<double> r(n);
  for (std::size_t m = 0; m < n; ++m) r[m] = (f[m] - f[(m + n - 1) % n]) / dx;
  return r;
}

std::vector<double> delta_2(std::span<const double> f, double dx) {
  require_operand(f);
  require_step(dx);
  const std::size_t n = f.size();
  const double dx2 = dx * dx;
  std::vector<double> r(n);
  for (std::size_t m = 0; m < n; ++m) {
    // grouped as a difference of one-sided differences; this keeps the
    // cancellation between nearly equal neighbours exact
    const double fwd = f[(m + 1) % n] - f[m];
    const double bwd = f[m] - f[(m + n - 1) % n];
    r[m] = (fwd - bwd) / dx2;
  }
  return r;
}

std::vector<double> mu_space(std::span<const double> f) {
  require_operand(f);
  const std::size_t n = f.size();
  std::vector<double> r(n);
  for (std::size_t m = 0; m < n; ++m) r[m] = 0.5 * (f[(m + 1) % n] + f[m]);
  return r;
}

ComplexField mu_time(const ComplexField& level_n, const ComplexField& level_np1) {
  level_n.validate();
  level_np1.validate();
  if (level_n.size() != level_np1.size())
    throw std::invalid_argument("time levels have different lengths");
  const std::size_t n = level_n.size();
  ComplexField r(n);
  for (std::size_t m = 0; m < n; ++m) {
    r.u[m] = 0.5 * (level_n.u[m] + level_np1.u[m]);
    r.v[m] = 0.5 * (level_n.v[m] + level_np1.v[m]);
  }
  return r;
}

}  // namespace efdvd
