#include "efdvd/dvd_generic.hpp"

#include <cmath>
#include <stdexcept>

namespace efdvd {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// |s|^k without a square root when k is even.
double abs_pow(Cplx s, int k) {
  if (k % 2 == 0) return ipow(std::norm(s), k / 2);
  return std::abs(s) * ipow(std::norm(s), (k - 1) / 2);
}

bool bitwise_equal(Cplx a, Cplx b) { return a.real() == b.real() && a.imag() == b.imag(); }

Cplx divided_difference(const ScalarFn& fn, Cplx s1, Cplx s2) {
  if (bitwise_equal(s1, s2)) return fn.deriv(s1);
  return (fn.value(s1) - fn.value(s2)) / (s1 - s2);
}

void require_fn(const std::optional<ScalarFn>& fn, int power, const char* what) {
  if (!fn) return;
  if (!fn->value || !fn->deriv)
    throw std::invalid_argument(std::string(what) + " factor needs value and derivative");
  if (power < 2) throw std::invalid_argument(std::string(what) + " power must be >= 2");
}

struct FieldView {
  const ComplexField& z;
  double dx;

  std::size_t size() const { return z.size(); }
  Cplx at(std::size_t m) const { return z.at(m % size()); }
  Cplx dplus(std::size_t m) const {
    const std::size_t n = size();
    return (z.at((m + 1) % n) - z.at(m % n)) / dx;
  }
  Cplx dminus(std::size_t m) const {
    const std::size_t n = size();
    return (z.at(m % n) - z.at((m + n - 1) % n)) / dx;
  }
};

double factor_p(const DensityTerm& t, Cplx zm) {
  return t.f ? abs_pow(t.f->value(zm), t.p) : 1.0;
}
double factor_qplus(const DensityTerm& t, Cplx dp) {
  return t.g_plus ? abs_pow(t.g_plus->value(dp), t.q_plus) : 1.0;
}
double factor_qminus(const DensityTerm& t, Cplx dm) {
  return t.g_minus ? abs_pow(t.g_minus->value(dm), t.q_minus) : 1.0;
}

Cplx partial_direct(const HamiltonianSpec& spec, const FieldView& a, const FieldView& b,
                    std::size_t m) {
  Cplx sum{0.0, 0.0};
  for (const DensityTerm& t : spec.terms) {
    if (!t.f) continue;
    const double qq_a = factor_qplus(t, a.dplus(m)) * factor_qminus(t, a.dminus(m));
    const double qq_b = factor_qplus(t, b.dplus(m)) * factor_qminus(t, b.dminus(m));
    const Cplx dd = divided_difference(*t.f, a.at(m), b.at(m));
    const Cplx r = rho(t.p, t.f->value(a.at(m)), t.f->value(b.at(m)));
    sum += t.coeff * (0.5 * (qq_a + qq_b)) * dd * r;
  }
  return sum;
}

Cplx partial_plus(const HamiltonianSpec& spec, const FieldView& a, const FieldView& b,
                  std::size_t m) {
  Cplx sum{0.0, 0.0};
  for (const DensityTerm& t : spec.terms) {
    if (!t.g_plus) continue;
    const double avg_p = 0.5 * (factor_p(t, a.at(m)) + factor_p(t, b.at(m)));
    const double avg_qm = 0.5 * (factor_qminus(t, a.dminus(m)) + factor_qminus(t, b.dminus(m)));
    const Cplx dd = divided_difference(*t.g_plus, a.dplus(m), b.dplus(m));
    const Cplx r = rho(t.q_plus, t.g_plus->value(a.dplus(m)), t.g_plus->value(b.dplus(m)));
    sum += t.coeff * avg_p * avg_qm * dd * r;
  }
  return sum;
}

Cplx partial_minus(const HamiltonianSpec& spec, const FieldView& a, const FieldView& b,
                   std::size_t m) {
  Cplx sum{0.0, 0.0};
  for (const DensityTerm& t : spec.terms) {
    if (!t.g_minus) continue;
    const double avg_p = 0.5 * (factor_p(t, a.at(m)) + factor_p(t, b.at(m)));
    const double avg_qp = 0.5 * (factor_qplus(t, a.dplus(m)) + factor_qplus(t, b.dplus(m)));
    const Cplx dd = divided_difference(*t.g_minus, a.dminus(m), b.dminus(m));
    const Cplx r = rho(t.q_minus, t.g_minus->value(a.dminus(m)), t.g_minus->value(b.dminus(m)));
    sum += t.coeff * avg_p * avg_qp * dd * r;
  }
  return sum;
}

void require_pair(const HamiltonianSpec& spec, const ComplexField& a, const ComplexField& b,
                  double dx) {
  spec.validate();
  a.validate();
  b.validate();
  if (a.size() != b.size()) throw std::invalid_argument("field length mismatch");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw std::domain_error("dx must be positive");
}

}  // namespace

void DensityTerm::validate() const {
  if (!std::isfinite(coeff)) throw std::invalid_argument("term coefficient must be finite");
  require_fn(f, p, "direct");
  require_fn(g_plus, q_plus, "forward-difference");
  require_fn(g_minus, q_minus, "backward-difference");
}

void HamiltonianSpec::validate() const {
  if (terms.empty()) throw std::invalid_argument("density needs at least one term");
  for (const DensityTerm& t : terms) t.validate();
}

HamiltonianSpec HamiltonianSpec::nls() {
  const ScalarFn identity{[](Cplx w) { return w; }, [](Cplx) { return Cplx{1.0, 0.0}; }};
  HamiltonianSpec spec;
  DensityTerm grad_fwd;
  grad_fwd.coeff = 0.5;
  grad_fwd.g_plus = identity;
  grad_fwd.q_plus = 2;
  DensityTerm grad_bwd;
  grad_bwd.coeff = 0.5;
  grad_bwd.g_minus = identity;
  grad_bwd.q_minus = 2;
  DensityTerm quartic;
  quartic.coeff = -0.5;
  quartic.f = identity;
  quartic.p = 4;
  spec.terms = {grad_fwd, grad_bwd, quartic};
  return spec;
}

Cplx rho(int k, Cplx s1, Cplx s2) {
  if (k < 2) throw std::domain_error("rho needs power >= 2");
  const Cplx half_conj = 0.5 * (std::conj(s1) + std::conj(s2));
  if (k % 2 == 0) {
    const int j = k / 2;
    const double n1 = std::norm(s1);
    const double n2 = std::norm(s2);
    double sigma = 0.0;
    for (int i = 0; i < j; ++i) sigma += ipow(n1, j - 1 - i) * ipow(n2, i);
    return half_conj * sigma;
  }
  const double x = std::abs(s1);
  const double y = std::abs(s2);
  if (x + y == 0.0) return {0.0, 0.0};
  double num = 0.0;
  for (int i = 0; i < k; ++i) num += ipow(x, k - 1 - i) * ipow(y, i);
  return half_conj * (num / (x + y));
}

std::vector<double> local_density(const HamiltonianSpec& spec, const ComplexField& z,
                                  double dx) {
  spec.validate();
  z.validate();
  if (!(dx > 0.0) || !std::isfinite(dx)) throw std::domain_error("dx must be positive");
  const FieldView view{z, dx};
  const std::size_t n = z.size();
  std::vector<double> h(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    double sum = 0.0;
    for (const DensityTerm& t : spec.terms) {
      sum += t.coeff * factor_p(t, view.at(m)) * factor_qplus(t, view.dplus(m)) *
             factor_qminus(t, view.dminus(m));
    }
    h[m] = sum;
  }
  return h;
}

double semidiscrete_energy(const HamiltonianSpec& spec, const ComplexField& z, double dx) {
  const std::vector<double> h = local_density(spec, z, dx);
  double sum = 0.0;
  for (double x : h) sum += x;
  return dx * sum;
}

Cplx partial_H(const HamiltonianSpec& spec, const ComplexField& a, const ComplexField& b,
               double dx, std::size_t m) {
  require_pair(spec, a, b, dx);
  return partial_direct(spec, FieldView{a, dx}, FieldView{b, dx}, m);
}

Cplx partial_H_dplus(const HamiltonianSpec& spec, const ComplexField& a,
                     const ComplexField& b, double dx, std::size_t m) {
  require_pair(spec, a, b, dx);
  return partial_plus(spec, FieldView{a, dx}, FieldView{b, dx}, m);
}

Cplx partial_H_dminus(const HamiltonianSpec& spec, const ComplexField& a,
                      const ComplexField& b, double dx, std::size_t m) {
  require_pair(spec, a, b, dx);
  return partial_minus(spec, FieldView{a, dx}, FieldView{b, dx}, m);
}

std::vector<Cplx> discrete_variational_derivative(const HamiltonianSpec& spec,
                                                  const ComplexField& a,
                                                  const ComplexField& b, double dx) {
  require_pair(spec, a, b, dx);
  const FieldView va{a, dx};
  const FieldView vb{b, dx};
  const std::size_t n = a.size();
  std::vector<Cplx> w1(n), w2(n), w3(n);
  for (std::size_t m = 0; m < n; ++m) {
    w1[m] = std::conj(partial_direct(spec, va, vb, m));
    w2[m] = std::conj(partial_plus(spec, va, vb, m));
    w3[m] = std::conj(partial_minus(spec, va, vb, m));
  }
  std::vector<Cplx> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    const Cplx dminus_w2 = (w2[m] - w2[(m + n - 1) % n]) / dx;
    const Cplx dplus_w3 = (w3[(m + 1) % n] - w3[m]) / dx;
    out[m] = w1[m] - dminus_w2 - dplus_w3;
  }
  return out;
}

}  // namespace efdvd
