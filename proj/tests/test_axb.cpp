#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "palmcalc/axb.hpp"

using namespace palmcalc::axb;

TEST_CASE("group law and inverses of the affine line") {
  const AxBElement g{2.0, 3.0};
  const AxBElement h{0.5, -1.0};
  const AxBElement gh = compose(g, h);
  CHECK(gh.a == doctest::Approx(1.0));
  CHECK(gh.b == doctest::Approx(1.0));  // 2*(-1) + 3
  const AxBElement e = compose(g, inverse(g));
  CHECK(e.a == doctest::Approx(1.0));
  CHECK(e.b == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(gh.act(2.0) == doctest::Approx(g.act(h.act(2.0))));
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  double c0 = 0, c2 = 0, c14 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    c0 += w[i];
    c2 += w[i] * x[i] * x[i];
    c14 += w[i] * std::pow(x[i], 14);
  }
  CHECK(c0 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(c2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(c14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));  // degree 14 <= 2*8-1
}

TEST_CASE("mollifier bumps are positive inside and zero outside their box") {
  const TestFunction f = bump({2.0, 0.0}, 1.0, 1.0);
  CHECK(f({2.0, 0.0}) > 0.0);
  CHECK(f({3.001, 0.0}) == 0.0);
  CHECK(f({2.0, 1.001}) == 0.0);
  CHECK(f.support.a_lo == doctest::Approx(1.0));
  CHECK(f.support.a_hi == doctest::Approx(3.0));
}

TEST_CASE("Haar integral basics") {
  const QuadratureGrid grid;
  const TestFunction f = bump({2.0, 0.0}, 0.8, 0.8);
  const double val = haar_integrate(f, grid);
  CHECK(val > 0.0);
  CHECK(haar_integrate_serial(f, grid) == doctest::Approx(val).epsilon(1e-12));

  TestFunction zero = f;
  zero.f = [](AxBElement) { return 0.0; };
  CHECK(haar_integrate(zero, grid) == 0.0);
}

TEST_CASE("supports escaping the quadrature window are rejected") {
  const QuadratureGrid grid;
  CHECK_THROWS_AS(haar_integrate(bump({7.8, 0.0}, 1.0, 1.0), grid), std::domain_error);
  CHECK_THROWS_AS(haar_integrate(bump({2.0, 7.8}, 0.5, 1.0), grid), std::domain_error);
}

TEST_CASE("left invariance of the Haar functional") {
  const QuadratureGrid grid;
  CHECK(check_left_invariance(grid, 1e-8).passed());
}

TEST_CASE("modular calibration selects a^-1 and rejects the wrong sign") {
  const QuadratureGrid grid;
  const ModularCalibration cal = calibrate_modular(grid);
  CHECK(cal.winner == ModularSign::AInverse);
  CHECK(cal.winner_residual <= 1e-8);
  CHECK(cal.loser_residual >= 1e-2);
  CHECK(cal.inverse_identity_residual <= 1e-8);
  CHECK(check_modular_calibration(grid, 1e-8).passed());
}

TEST_CASE("exchange identity holds with the calibrated density, fails with 1") {
  const QuadratureGrid grid;
  const TestFunction f = bump({2.0, 0.5}, 0.9, 1.1);
  CHECK(check_exchange_group(f, grid, 1e-8).passed());
  CHECK(check_exchange_group(f, grid, 1e-8, true).passed());  // passes iff residual large
}

TEST_CASE("skew factorization agrees along both routes") {
  const QuadratureGrid grid;
  const TestFunction u = bump({1.0, 0.0}, 0.7, 0.7);
  const TestFunction v = bump({2.0, -0.5}, 1.0, 1.0);
  CHECK(check_skew_factorization(u, v, grid, 1e-8).passed());
}

TEST_CASE("projection measures scale by the modular value") {
  CHECK(check_projection_scaling(QuadratureGrid{}, 1e-8).passed());
}

TEST_CASE("Dirac transport kernel algebra and modular homomorphism") {
  CHECK(check_dirac_kernel_properties(1000, 7).passed());
  CHECK(check_modular_homomorphism(1000, 7, 1e-10).passed());
}

TEST_CASE("the full quadrature suite passes at the default grid") {
  const auto reports = run_axb_suite(QuadratureGrid{}, 1e-8);
  CHECK(reports.size() >= 8);
  for (const auto& r : reports) {
    INFO(r.check_name, ": ", r.residual);
    CHECK(r.passed());
  }
}
