#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace efdvd {

using Cplx = std::complex<double>;

/** Uniform space-time grid with a periodic spatial wrap.
 *
 * The interval [a,b] carries M nodes x_m = a + m*dx, m = 0..M-1, with
 * dx = (b-a)/(M-1).  The last node coincides with the first one under
 * periodicity, so only the M-1 values at m = 0..M-2 are stored; every
 * spatial index below is taken cyclically modulo M-1.  Time levels are
 * t_n = n*dt with dt = T/N.
 */
struct GridSpec {
  double a = 0.0;
  double b = 1.0;
  int num_nodes = 3;      // M, counting both endpoints
  double t_final = 0.0;   // T
  int num_steps = 0;      // N

  double dx() const { return (b - a) / (num_nodes - 1); }
  double dt() const { return num_steps == 0 ? 0.0 : t_final / num_steps; }
  int unknowns() const { return num_nodes - 1; }

  // Throws std::invalid_argument on inconsistent input.  A degenerate
  // zero-length time axis (T = 0, N = 0) is allowed and means "no stepping".
  void validate() const;
};

/// One time level of the discrete solution z = u + i v, length M-1.
struct ComplexField {
  std::vector<double> u, v;

  ComplexField() = default;
  explicit ComplexField(std::size_t n) : u(n, 0.0), v(n, 0.0) {}

  std::size_t size() const { return u.size(); }
  Cplx at(std::size_t m) const { return {u[m], v[m]}; }
  bool finite() const;
  void validate() const;  // equal lengths, finite entries
};

// Periodic forward/backward/second difference and forward average.  All of
// them wrap cyclically: the neighbour after the last entry is the first one.
// Inputs must have at least 2 entries and be finite.
std::vector<double> delta_plus(std::span<const double> f, double dx);
std::vector<double> delta_minus(std::span<const double> f, double dx);
std::vector<double> delta_2(std::span<const double> f, double dx);
std::vector<double> mu_space(std::span<const double> f);

/// Pointwise average of two consecutive time levels.
ComplexField mu_time(const ComplexField& level_n, const ComplexField& level_np1);

}  // namespace efdvd
