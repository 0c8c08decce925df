#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "efdvd/breather.hpp"
#include "efdvd/cyclic_block_solver.hpp"
#include "efdvd/grid.hpp"
#include "efdvd/newton_solver.hpp"
#include "efdvd/nls_schemes.hpp"

using namespace efdvd;

namespace {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double sym() { return 2.0 * (static_cast<double>(eng() >> 11) * 0x1p-53) - 1.0; }
};

ComplexField random_field(Rng& rng, int len) {
  ComplexField z(len);
  for (int m = 0; m < len; ++m) {
    z.u[m] = rng.sym();
    z.v[m] = rng.sym();
  }
  return z;
}

// dense LU with partial pivoting, used as an oracle for the cyclic solver
std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r * n + c]) > std::fabs(a[pivot * n + c])) pivot = r;
    REQUIRE(std::fabs(a[pivot * n + c]) > 1e-200);
    if (pivot != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[pivot * n + k], a[c * n + k]);
      std::swap(b[pivot], b[c]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    for (std::size_t k = r + 1; k < n; ++k) b[r] -= a[r * n + k] * b[k];
    b[r] /= a[r * n + r];
  }
  return b;
}

// neighbour blocks accumulate, so n = 2 doubles the coupling
std::vector<double> dense_from_blocks(const std::vector<Block2>& diag, const Block2& off) {
  const std::size_t n = diag.size();
  std::vector<double> a(4 * n * n, 0.0);
  auto add = [&](std::size_t br, std::size_t bc, const Block2& blk) {
    a[(2 * br) * 2 * n + 2 * bc] += blk.a11;
    a[(2 * br) * 2 * n + 2 * bc + 1] += blk.a12;
    a[(2 * br + 1) * 2 * n + 2 * bc] += blk.a21;
    a[(2 * br + 1) * 2 * n + 2 * bc + 1] += blk.a22;
  };
  for (std::size_t m = 0; m < n; ++m) {
    add(m, m, diag[m]);
    add(m, (m + 1) % n, off);
    add(m, (m + n - 1) % n, off);
  }
  return a;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("cyclic block solve matches a dense factorization") {
  Rng rng(101);
  for (std::size_t n : {std::size_t{2}, std::size_t{3}, std::size_t{5}, std::size_t{16}}) {
    std::vector<Block2> diag(n);
    for (Block2& d : diag)
      d = {5.0 + rng.sym(), rng.sym(), rng.sym(), 5.0 + rng.sym()};
    const Block2 off{0.4 + 0.2 * rng.sym(), rng.sym(), rng.sym(), -0.5 + 0.2 * rng.sym()};

    std::vector<double> b(2 * n);
    double bnorm = 0.0;
    for (double& x : b) {
      x = rng.sym();
      bnorm = std::max(bnorm, std::fabs(x));
    }

    const CyclicBlockSolver solver(diag, off);
    const std::vector<double> x = solver.solve(b);
    const std::vector<double> want = dense_solve(dense_from_blocks(diag, off), b);

    double xnorm = 0.0;
    for (double w : want) xnorm = std::max(xnorm, std::fabs(w));
    for (std::size_t i = 0; i < 2 * n; ++i)
      CHECK(std::fabs(x[i] - want[i]) <= 1e-9 * std::max(1.0, xnorm));

    const std::vector<double> ax = solver.apply(x);
    for (std::size_t i = 0; i < 2 * n; ++i)
      CHECK(std::fabs(ax[i] - b[i]) <= 1e-11 * std::max(1.0, bnorm));
  }
}

TEST_CASE("degenerate block systems are rejected") {
  CHECK_THROWS_AS(CyclicBlockSolver(std::vector<Block2>(3), Block2{}), std::runtime_error);
  CHECK_THROWS_AS(CyclicBlockSolver(std::vector<Block2>(2), Block2{}), std::runtime_error);
  CHECK_THROWS_AS(CyclicBlockSolver(std::vector<Block2>(1), Block2{}), std::invalid_argument);
  const CyclicBlockSolver ok(std::vector<Block2>(3, Block2{4.0, 0.0, 0.0, 4.0}),
                             Block2{0.0, 1.0, 1.0, 0.0});
  CHECK_THROWS_AS(ok.solve(std::vector<double>(5)), std::invalid_argument);
}

TEST_CASE("a zero field stays zero in one residual evaluation") {
  const GridSpec grid{0.0, 1.0, 11, 0.02, 1};
  const ComplexField zero(grid.unknowns());
  const StepResult res = step({SchemeVariant::Dvd, 0.0}, zero, grid, SolverConfig{});
  REQUIRE(res.ok());
  CHECK(res.stats.converged);
  CHECK(res.stats.iterations == 1);
  CHECK(res.stats.final_residual_norm == 0.0);
  for (int m = 0; m < grid.unknowns(); ++m) {
    CHECK(res.znp1.u[m] == 0.0);
    CHECK(res.znp1.v[m] == 0.0);
  }
}

TEST_CASE("constant data reproduces the rational step factor") {
  const GridSpec grid{0.0, 1.0, 11, 0.02, 1};
  const double dt = grid.dt();
  const Cplx c{0.8, -0.35};
  ComplexField zn(grid.unknowns());
  for (int m = 0; m < grid.unknowns(); ++m) {
    zn.u[m] = c.real();
    zn.v[m] = c.imag();
  }

  for (const SchemeKind kind :
       {SchemeKind{SchemeVariant::Dvd, 0.0}, SchemeKind{SchemeVariant::EfDvd, 25.0}}) {
    const double alpha = scheme_alpha(kind, dt);
    const double w = std::norm(c);
    const Cplx factor =
        (alpha / dt + Cplx{0.0, 0.5 * w}) / (alpha / dt - Cplx{0.0, 0.5 * w});
    const Cplx want = factor * c;

    const StepResult res = step(kind, zn, grid, SolverConfig{});
    REQUIRE(res.ok());
    CHECK(res.stats.converged);
    for (int m = 0; m < grid.unknowns(); ++m)
      CHECK(std::abs(res.znp1.at(m) - want) <= 1e-12);
  }
}

TEST_CASE("one implicit step on smooth data converges fast") {
  const double pi = std::acos(-1.0);
  const double dt = 0.01 / 32.0;
  const GridSpec grid{-pi / 7.0, pi / 7.0, 1001, dt, 1};
  const ComplexField z0 = breather_field(BreatherParams{}, grid, 0.0);

  // the residual of any representable iterate is bounded below by roughly
  // |J| ulp(z) ~ (2/dx^2) eps |z| ~ 1e-9 here, so the step is accepted at
  // the evaluation floor rather than at the nominal tolerance
  const StepResult res = step({SchemeVariant::Dvd, 0.0}, z0, grid, SolverConfig{});
  REQUIRE(res.ok());
  CHECK((res.stats.converged || res.stats.floor_limited));
  CHECK(res.stats.final_residual_norm <= 1e-8);
  CHECK(res.stats.iterations <= 8);

  // on a coarse grid the same tolerance is genuinely reachable
  const GridSpec coarse{-pi / 7.0, pi / 7.0, 21, 0.01, 1};
  const ComplexField c0 = breather_field(BreatherParams{}, coarse, 0.0);
  const StepResult cres = step({SchemeVariant::Dvd, 0.0}, c0, coarse, SolverConfig{});
  REQUIRE(cres.ok());
  CHECK(cres.stats.converged);
  CHECK(cres.stats.final_residual_norm <= 1e-12);
}

TEST_CASE("analytic Jacobians agree with finite differences") {
  Rng rng(113);
  const double dt = 0.1, dx = 0.5;
  const SchemeKind kinds[] = {{SchemeVariant::Dvd, 0.0},
                              {SchemeVariant::EfDvd, 5.0},
                              {SchemeVariant::Avf, 0.0},
                              {SchemeVariant::EfAvf, 5.0}};
  for (const SchemeKind& kind : kinds) {
    const ComplexField zn = random_field(rng, 8);
    const ComplexField znp1 = random_field(rng, 8);
    CHECK(jacobian_fd_check(kind, StepPair{zn, znp1, dt, dx}) <= 1e-6);
  }
}

TEST_CASE("fitted Jacobian degenerates to the classic one") {
  Rng rng(127);
  const double dt = 0.01, dx = 0.4;
  const ComplexField zn = random_field(rng, 6);
  const ComplexField znp1 = random_field(rng, 6);
  const StepPair pair{zn, znp1, dt, dx};

  const std::vector<double> classic = dense_jacobian({SchemeVariant::Dvd, 0.0}, pair);
  const std::vector<double> fitted = dense_jacobian({SchemeVariant::EfDvd, 1e-4}, pair);
  REQUIRE(classic.size() == fitted.size());
  for (std::size_t i = 0; i < classic.size(); ++i)
    CHECK(std::fabs(fitted[i] - classic[i]) <= 1e-9);
}

TEST_CASE("iteration budget is enforced") {
  const double pi = std::acos(-1.0);
  const GridSpec grid{-pi / 7.0, pi / 7.0, 33, 0.01, 1};
  const ComplexField z0 = breather_field(BreatherParams{}, grid, 0.0);

  SolverConfig cfg;
  cfg.tol_residual = 1e-30;
  cfg.max_iters = 1;
  const StepResult res = step({SchemeVariant::Dvd, 0.0}, z0, grid, cfg);
  CHECK(!res.ok());
  CHECK(res.error == StepError::MaxIterations);
  CHECK(!res.stats.converged);
}

TEST_CASE("configuration and argument validation") {
  SolverConfig cfg;
  cfg.tol_residual = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.tol_residual = 1e-12;
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  const GridSpec grid{0.0, 1.0, 11, 0.02, 1};
  CHECK_THROWS_AS(step({SchemeVariant::Dvd, 0.0}, ComplexField(7), grid, SolverConfig{}),
                  std::invalid_argument);
  const GridSpec frozen{0.0, 1.0, 11, 0.0, 0};
  CHECK_THROWS_AS(step({SchemeVariant::Dvd, 0.0}, ComplexField(10), frozen, SolverConfig{}),
                  std::invalid_argument);
}

}  // TEST_SUITE
