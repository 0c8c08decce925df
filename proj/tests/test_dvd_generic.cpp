#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "efdvd/dvd_generic.hpp"
#include "efdvd/grid.hpp"

using namespace efdvd;

namespace {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double sym() { return 2.0 * (static_cast<double>(eng() >> 11) * 0x1p-53) - 1.0; }
  Cplx cplx() { return {sym(), sym()}; }
};

ComplexField random_field(Rng& rng, int len) {
  ComplexField z(len);
  for (int m = 0; m < len; ++m) {
    z.u[m] = rng.sym();
    z.v[m] = rng.sym();
  }
  return z;
}

// density with a nonlinear f, a nonlinear g+, a plain g- and a mixed term
HamiltonianSpec fancy_spec() {
  ScalarFn square{[](Cplx z) { return z * z; }, [](Cplx z) { return 2.0 * z; }};
  ScalarFn bent{[](Cplx w) { return w + 0.3 * w * w; },
                [](Cplx w) { return Cplx{1.0, 0.0} + 0.6 * w; }};
  ScalarFn id{[](Cplx w) { return w; }, [](Cplx) { return Cplx{1.0, 0.0}; }};

  HamiltonianSpec spec;
  DensityTerm t1;
  t1.coeff = 0.7;
  t1.f = square;
  t1.p = 3;
  t1.g_plus = bent;
  t1.q_plus = 3;
  spec.terms.push_back(t1);

  DensityTerm t2;
  t2.coeff = -0.4;
  t2.g_minus = id;
  t2.q_minus = 4;
  spec.terms.push_back(t2);

  DensityTerm t3;
  t3.coeff = 1.1;
  t3.f = id;
  t3.p = 2;
  t3.g_minus = id;
  t3.q_minus = 2;
  spec.terms.push_back(t3);
  return spec;
}

// d/dz of a real-valued function via central differences in Re and Im
Cplx wirtinger_fd(const std::function<double(Cplx)>& fn, Cplx w) {
  const double h = 1e-6;
  const double du = (fn(w + Cplx{h, 0.0}) - fn(w - Cplx{h, 0.0})) / (2.0 * h);
  const double dv = (fn(w + Cplx{0.0, h}) - fn(w - Cplx{0.0, h})) / (2.0 * h);
  return 0.5 * Cplx{du, -dv};
}

double density_term_value(const HamiltonianSpec& spec, Cplx z, Cplx dp, Cplx dm) {
  double total = 0.0;
  for (const DensityTerm& t : spec.terms) {
    double factor = t.coeff;
    if (t.f) factor *= std::pow(std::abs(t.f->value(z)), t.p);
    if (t.g_plus) factor *= std::pow(std::abs(t.g_plus->value(dp)), t.q_plus);
    if (t.g_minus) factor *= std::pow(std::abs(t.g_minus->value(dm)), t.q_minus);
    total += factor;
  }
  return total;
}

}  // namespace

TEST_SUITE("dvd_generic") {

TEST_CASE("rho anchors") {
  const Cplx s1{0.4, -0.9}, s2{-1.2, 0.3};
  CHECK(rho(2, s1, s2) == 0.5 * (std::conj(s1) + std::conj(s2)));

  const Cplx s{0.8, 0.6};
  const Cplx r4 = rho(4, s, s);
  const Cplx want = 2.0 * std::conj(s) * std::norm(s);
  CHECK(std::abs(r4 - want) <= 1e-15 * std::abs(want));

  CHECK(rho(3, Cplx{1.0, 0.0}, Cplx{0.0, 0.0}) == Cplx{0.5, 0.0});
  CHECK(rho(3, Cplx{0.0, 0.0}, Cplx{0.0, 0.0}) == Cplx{0.0, 0.0});
  CHECK_THROWS_AS(rho(1, s1, s2), std::domain_error);
  CHECK_THROWS_AS(rho(0, s1, s2), std::domain_error);
}

TEST_CASE("rho symmetry and discrete-gradient pairing") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const Cplx s1 = rng.cplx(), s2 = rng.cplx();
    for (int k = 2; k <= 6; ++k) {
      const Cplx r = rho(k, s1, s2);
      const Cplx rs = rho(k, s2, s1);
      CHECK(std::abs(r - rs) <= 1e-14 * std::max(1.0, std::abs(r)));

      const Cplx lhs = r * (s1 - s2) + std::conj(r) * (std::conj(s1) - std::conj(s2));
      const double rhs = std::pow(std::abs(s1), k) - std::pow(std::abs(s2), k);
      const double scale =
          std::max(1.0, std::pow(std::abs(s1), k) + std::pow(std::abs(s2), k));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("single-factor partials collapse to plain averages") {
  const int len = 8;
  const double dx = 0.3;
  Rng rng(17);
  const ComplexField a = random_field(rng, len);
  const ComplexField b = random_field(rng, len);

  HamiltonianSpec mod2;
  DensityTerm direct;
  direct.f = ScalarFn{[](Cplx z) { return z; }, [](Cplx) { return Cplx{1.0, 0.0}; }};
  direct.p = 2;
  mod2.terms.push_back(direct);

  HamiltonianSpec grad2;
  DensityTerm fwd;
  fwd.g_plus = ScalarFn{[](Cplx w) { return w; }, [](Cplx) { return Cplx{1.0, 0.0}; }};
  fwd.q_plus = 2;
  grad2.terms.push_back(fwd);

  for (int m = 0; m < len; ++m) {
    const Cplx direct_want = 0.5 * (std::conj(a.at(m)) + std::conj(b.at(m)));
    CHECK(std::abs(partial_H(mod2, a, b, dx, m) - direct_want) <= 1e-14);

    const Cplx da = (a.at((m + 1) % len) - a.at(m)) / dx;
    const Cplx db = (b.at((m + 1) % len) - b.at(m)) / dx;
    const Cplx fwd_want = 0.5 * (std::conj(da) + std::conj(db));
    CHECK(std::abs(partial_H_dplus(grad2, a, b, dx, m) - fwd_want) <=
          1e-13 * std::max(1.0, std::abs(fwd_want)));
    CHECK(std::abs(partial_H_dminus(grad2, a, b, dx, m)) == 0.0);
    CHECK(std::abs(partial_H(grad2, a, b, dx, m)) == 0.0);
  }
}

TEST_CASE("equal-level partials match Wirtinger finite differences") {
  const int len = 9;
  const double dx = 0.4;
  Rng rng(29);
  const ComplexField z = random_field(rng, len);
  const HamiltonianSpec spec = fancy_spec();

  for (int m = 0; m < len; ++m) {
    const Cplx zm = z.at(m);
    const Cplx dp = (z.at((m + 1) % len) - z.at(m)) / dx;
    const Cplx dm = (z.at(m) - z.at((m + len - 1) % len)) / dx;

    const Cplx got_direct = partial_H(spec, z, z, dx, m);
    const Cplx fd_direct =
        wirtinger_fd([&](Cplx w) { return density_term_value(spec, w, dp, dm); }, zm);
    CHECK(std::abs(got_direct - fd_direct) <= 1e-6 * std::max(1.0, std::abs(fd_direct)));

    const Cplx got_plus = partial_H_dplus(spec, z, z, dx, m);
    const Cplx fd_plus =
        wirtinger_fd([&](Cplx s) { return density_term_value(spec, zm, s, dm); }, dp);
    CHECK(std::abs(got_plus - fd_plus) <= 1e-6 * std::max(1.0, std::abs(fd_plus)));

    const Cplx got_minus = partial_H_dminus(spec, z, z, dx, m);
    const Cplx fd_minus =
        wirtinger_fd([&](Cplx s) { return density_term_value(spec, zm, dp, s); }, dm);
    CHECK(std::abs(got_minus - fd_minus) <= 1e-6 * std::max(1.0, std::abs(fd_minus)));
  }
}

TEST_CASE("two-level chain rule telescopes the energy difference") {
  const int len = 11;
  const double dx = 0.35;
  Rng rng(53);
  for (const HamiltonianSpec& spec : {fancy_spec(), HamiltonianSpec::nls()}) {
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexField a = random_field(rng, len);
      const ComplexField b = random_field(rng, len);
      const std::vector<Cplx> dvd = discrete_variational_derivative(spec, a, b, dx);

      const std::vector<double> ha = local_density(spec, a, dx);
      const std::vector<double> hb = local_density(spec, b, dx);
      double lhs = 0.0, rhs = 0.0, scale = 1.0;
      for (int m = 0; m < len; ++m) {
        lhs += ha[m] - hb[m];
        rhs += 2.0 * std::real(dvd[m] * std::conj(a.at(m) - b.at(m)));
        scale += std::fabs(ha[m]) + std::fabs(hb[m]);
      }
      CHECK(std::fabs(lhs - rhs) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("equal-level variational derivative of the cubic density") {
  const int len = 16;
  const double dx = 0.2;
  Rng rng(67);
  const ComplexField z = random_field(rng, len);
  const std::vector<Cplx> dvd =
      discrete_variational_derivative(HamiltonianSpec::nls(), z, z, dx);

  const std::vector<double> d2u = delta_2(z.u, dx);
  const std::vector<double> d2v = delta_2(z.v, dx);
  for (int m = 0; m < len; ++m) {
    const double mod2 = z.u[m] * z.u[m] + z.v[m] * z.v[m];
    const Cplx want = -Cplx{d2u[m], d2v[m]} - mod2 * z.at(m);
    CHECK(std::abs(dvd[m] - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }

  const ComplexField zero(len);
  for (const Cplx& w : discrete_variational_derivative(HamiltonianSpec::nls(), zero,
                                                       zero, dx))
    CHECK(std::abs(w) == 0.0);
}

TEST_CASE("semidiscrete energy") {
  const int len = 12;
  const double dx = 0.15;
  const HamiltonianSpec nls = HamiltonianSpec::nls();

  CHECK(semidiscrete_energy(nls, ComplexField(len), dx) == 0.0);

  ComplexField c(len);
  for (int m = 0; m < len; ++m) {
    c.u[m] = 0.7;
    c.v[m] = -0.4;
  }
  const double mod2 = 0.7 * 0.7 + 0.4 * 0.4;
  CHECK(semidiscrete_energy(nls, c, dx) ==
        doctest::Approx(dx * len * (-0.5 * mod2 * mod2)).epsilon(1e-13));

  Rng rng(71);
  const ComplexField z = random_field(rng, len);
  const std::vector<double> dpu = delta_plus(z.u, dx), dmu = delta_minus(z.u, dx);
  const std::vector<double> dpv = delta_plus(z.v, dx), dmv = delta_minus(z.v, dx);
  double manual = 0.0;
  for (int m = 0; m < len; ++m) {
    const double q = z.u[m] * z.u[m] + z.v[m] * z.v[m];
    manual += 0.5 * (dpu[m] * dpu[m] + dmu[m] * dmu[m] + dpv[m] * dpv[m] +
                     dmv[m] * dmv[m]) -
              0.5 * q * q;
  }
  manual *= dx;
  CHECK(semidiscrete_energy(nls, z, dx) ==
        doctest::Approx(manual).epsilon(1e-13).scale(std::fabs(manual) + 1.0));
}

TEST_CASE("spec validation") {
  HamiltonianSpec empty;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);

  HamiltonianSpec low_power;
  DensityTerm t;
  t.f = ScalarFn{[](Cplx z) { return z; }, [](Cplx) { return Cplx{1.0, 0.0}; }};
  t.p = 1;
  low_power.terms.push_back(t);
  CHECK_THROWS_AS(low_power.validate(), std::invalid_argument);
}

}  // TEST_SUITE
