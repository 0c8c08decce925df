#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "efdvd/grid.hpp"

namespace efdvd {

/// Analytic scalar function together with its derivative.
struct ScalarFn {
  std::function<Cplx(Cplx)> value;
  std::function<Cplx(Cplx)> deriv;
};

/** One product term of a lattice Hamiltonian density.
 *
 * The term contributes
 *
 *   coeff * |f(z_m)|^p * |g+(d+ z_m)|^{q+} * |g-(d- z_m)|^{q-}
 *
 * to the density at node m, where d+/d- are the periodic one-sided
 * differences.  Any of the three factors may be absent (an absent factor is
 * the constant 1 and is skipped by the variational machinery); powers are
 * required to be >= 2 so that the two-point gradient rho below stays finite.
 */
struct DensityTerm {
  double coeff = 1.0;
  std::optional<ScalarFn> f;
  int p = 2;
  std::optional<ScalarFn> g_plus;
  int q_plus = 2;
  std::optional<ScalarFn> g_minus;
  int q_minus = 2;

  void validate() const;
};

struct HamiltonianSpec {
  std::vector<DensityTerm> terms;

  void validate() const;  // throws std::invalid_argument when empty/ill-formed

  /// Density |d+ z|^2/2 + |d- z|^2/2 - |z|^4/2 of the cubic Schroedinger flow.
  static HamiltonianSpec nls();
};

/** Two-point discrete gradient of s -> |s|^k.
 *
 * rho(k; s1, s2) is symmetric in (s1, s2), reduces to (k/2)|s|^{k-2} s* at
 * equal arguments, and satisfies the exact pairing
 *
 *   rho*(s1 - s2) + conj(rho)*(s1* - s2*) = |s1|^k - |s2|^k,
 *
 * which is what makes energy differences telescope.  For even k = 2j the
 * factored form is a plain polynomial,
 *
 *   rho = ((s1* + s2*)/2) * sum_{i=0}^{j-1} |s1|^{2(j-1-i)} |s2|^{2i};
 *
 * for odd k the analogous quotient is used,
 *
 *   rho = ((s1* + s2*)/2) * (sum_{j=0}^{k-1} |s1|^{k-1-j} |s2|^j) / (|s1| + |s2|),
 *
 * with the uniform descending exponent sequence (the unique choice for which
 * the numerator equals (|s1|^k - |s2|^k)/(|s1| - |s2|) after telescoping) and
 * the value 0 when |s1| + |s2| = 0.  Throws std::domain_error for k < 2.
 */
Cplx rho(int k, Cplx s1, Cplx s2);

/// Density values H(z)_m, length M-1.
std::vector<double> local_density(const HamiltonianSpec& spec, const ComplexField& z,
                                  double dx);

/// dx * sum_m H(z)_m.
double semidiscrete_energy(const HamiltonianSpec& spec, const ComplexField& z, double dx);

/* Two-level partial derivatives of the density with respect to z_m, d+ z_m
 * and d- z_m.  Each is a sum over terms of the remaining factors averaged
 * across the two levels, times the divided difference of the differentiated
 * factor's function, times rho of its power.  Divided differences fall back
 * to the exact derivative when the two arguments are bitwise equal.  At a = b
 * they reduce to the classical partial derivatives of the density. */
Cplx partial_H(const HamiltonianSpec& spec, const ComplexField& a, const ComplexField& b,
               double dx, std::size_t m);
Cplx partial_H_dplus(const HamiltonianSpec& spec, const ComplexField& a,
                     const ComplexField& b, double dx, std::size_t m);
Cplx partial_H_dminus(const HamiltonianSpec& spec, const ComplexField& a,
                      const ComplexField& b, double dx, std::size_t m);

/** Two-level discrete variational derivative with respect to the conjugate
 * field, entrywise
 *
 *   dvd_m = conj( partial_H_m - d-( partial_H_dplus )_m - d+( partial_H_dminus )_m ).
 *
 * Satisfies the exact difference identity
 *
 *   sum_m [H(a)_m - H(b)_m] = sum_m 2 Re[ dvd_m * conj(a_m - b_m) ]
 *
 * and reduces at a = b to the gradient of the semidiscrete energy (for the
 * nls() spec: -d2 z_m - |z_m|^2 z_m).
 */
std::vector<Cplx> discrete_variational_derivative(const HamiltonianSpec& spec,
                                                  const ComplexField& a,
                                                  const ComplexField& b, double dx);

}  // namespace efdvd
