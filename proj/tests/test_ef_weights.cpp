#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "efdvd/ef_weights.hpp"

using namespace efdvd;

TEST_SUITE("ef_weights") {

TEST_CASE("classic limit and closed-form anchors") {
  CHECK(alpha(FitParams(0.0, 0.5)) == 1.0);
  CHECK(alpha(FitParams(std::numbers::pi / 2.0, 1.0)) ==
        doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-14));
  CHECK(alpha(FitParams(25.0, 0.01)) == doctest::Approx(0.994786).epsilon(1e-6));
  CHECK(std::fabs(alpha(FitParams(1e-8, 1.0)) - 1.0) <= 1e-15);
}

TEST_CASE("series and closed form agree at the crossover") {
  const double theta0 = 1e-4;
  const double below = alpha_from_theta(theta0 * (1.0 - 1e-10));
  const double above = alpha_from_theta(theta0 * (1.0 + 1e-10));
  CHECK(std::fabs(below - above) <= 1e-14);

  const double inside = 0.9e-4;  // series branch
  const double closed = inside * (1.0 + std::cos(inside)) / (2.0 * std::sin(inside));
  CHECK(alpha_from_theta(inside) == doctest::Approx(closed).epsilon(1e-13));
}

TEST_CASE("even in the frequency") {
  CHECK(alpha_from_theta(-0.3) == alpha_from_theta(0.3));
  CHECK(alpha_from_theta(-1e-6) == alpha_from_theta(1e-6));
}

TEST_CASE("strictly decreasing on (0, pi)") {
  double prev = alpha_from_theta(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double theta = i * (std::numbers::pi - 1e-9) / 1000.0;
    const double a = alpha_from_theta(theta);
    CHECK(a < prev);
    prev = a;
  }
}

TEST_CASE("pole and sign rejection") {
  CHECK_THROWS_AS(FitParams(std::numbers::pi, 1.0), std::domain_error);
  CHECK_THROWS_AS(FitParams(4.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(FitParams(-1.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(FitParams(1.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(FitParams(1.0, 0.0), std::domain_error);
  CHECK_NOTHROW(FitParams(std::numbers::pi - 1e-9, 1.0));
}

TEST_CASE("fitting exactness on the trigonometric space") {
  const FitParams paper(25.0, 0.01);
  CHECK(check_fitting_exactness(paper, 0.3) <= 1e-13);
  for (int i = 0; i <= 10; ++i) CHECK(check_fitting_exactness(paper, 0.1 * i) <= 1e-13);

  const FitParams tiny(1e-9, 0.01);
  CHECK(check_fitting_exactness(tiny, 0.7) <= 1e-13);
}

}  // TEST_SUITE
