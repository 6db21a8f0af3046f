#include <cmath>
#include <numbers>

#include "doctest.h"
#include "landscape/complexity.hpp"
#include "landscape/errors.hpp"
#include "oracles.hpp"

using namespace landscape;

namespace {

// Semicircle on [-sqrt2, sqrt2] after t = sqrt2 sin(theta).
double log_potential_oracle(double x) {
  const double r = std::numbers::sqrt2;
  return oracle::simpson(
      [&](double th) {
        const double t = r * std::sin(th);
        const double c = std::cos(th);
        return std::log(std::abs(x - t)) * (2.0 / std::numbers::pi) * c * c;
      },
      -std::numbers::pi / 2, std::numbers::pi / 2, 4000);
}

}  // namespace

TEST_CASE("semicircle log-potential") {
  for (double x : {-3.0, -1.6, 1.5, 2.0, 7.0})
    CHECK(psi_star_semicircle(x) == doctest::Approx(log_potential_oracle(x)).epsilon(1e-9));
  // Inside the support: x^2/R^2 - 1/2 + log(R/2).
  CHECK(psi_star_semicircle(0.3) == doctest::Approx(0.045 - 0.5 + std::log(std::numbers::sqrt2 / 2)));
  // Continuous at the edge.
  CHECK(psi_star_semicircle(std::numbers::sqrt2 + 1e-12) ==
        doctest::Approx(psi_star_semicircle(std::numbers::sqrt2)).epsilon(1e-9));
}

TEST_CASE("F maximizer against a direct search") {
  for (double m : {-3.0, -1.0, -0.8, -0.5, -0.1}) {
    const auto o = oracle::nelder_mead_max<1>([&](const std::array<double, 1>& x) { return big_f(x[0], m); },
                                              {2.0 * m}, 0.5);
    const FMaximizer f = big_f_maximizer(m);
    CHECK(f.f_max == doctest::Approx(o.value).epsilon(1e-10));
    CHECK(f.x_max == doctest::Approx(o.x[0]).epsilon(1e-6));
  }
  CHECK_THROWS_AS(big_f_maximizer(0.2), std::invalid_argument);
}

TEST_CASE("frozen predictions for the default models") {
  const PredictionReport s = predictions(default_src(), 3.0);
  CHECK(s.supercritical);
  CHECK(s.threshold == doctest::Approx(2.0));
  CHECK(s.center == doctest::Approx(13.0 / 3.0));
  CHECK(s.radius == doctest::Approx(4.0));
  CHECK(s.lambda_edge == doctest::Approx(1.0 / 3.0));
  CHECK(*s.rho_star == doctest::Approx(std::numbers::sqrt2 / 3.0));
  CHECK(*s.u_star == doctest::Approx(-1.0 / 3.0));
  CHECK(*s.y_star == doctest::Approx(-13.0 / 6.0 / std::numbers::sqrt2));
  CHECK(s.m == doctest::Approx(-3.0 / std::sqrt(8.0)));
  CHECK_FALSE(s.exponent_subcritical.has_value());

  const PredictionReport l = predictions(default_lrc(), 2.0);
  CHECK(l.lrc);
  CHECK(l.center == doctest::Approx(3.0));
  CHECK(l.radius == doctest::Approx(2.0 * std::numbers::sqrt2));
  CHECK(l.lambda_edge == doctest::Approx(3.0 - 2.0 * std::numbers::sqrt2));
  CHECK(*l.rho_star == doctest::Approx(0.612372).epsilon(1e-6));
  CHECK(*l.u_star == doctest::Approx(-0.375).epsilon(1e-12));
  CHECK(*l.y_star == doctest::Approx(-1.5).epsilon(1e-12));

  CHECK(*predictions(default_src(), 1.0).exponent_subcritical == doctest::Approx(0.318147).epsilon(1e-6));
  CHECK(*predictions(default_lrc(), 1.0).exponent_subcritical == doctest::Approx(0.096574).epsilon(1e-5));
  CHECK_FALSE(predictions(default_src(), 1.0).rho_star.has_value());
  CHECK_THROWS_AS(predictions(SrcCorrelator{1.0, {}}, 3.0), std::invalid_argument);
}

TEST_CASE("closed-form maximizers agree with numerical maximization") {
  SUBCASE("LRC") {
    const LrcStructure d = default_lrc();
    const double mu = 2.0;
    const MaximizerResult r = psi_lrc_maximizer(d, mu);
    const auto o = oracle::nelder_mead_max<3>(
        [&](const std::array<double, 3>& p) {
          if (p[0] <= 0.0) return -1e300;
          return psi_lrc({p[0], p[1], p[2]}, d, mu);
        },
        {0.5, -0.3, -1.3}, 0.1);
    CHECK(r.value == doctest::Approx(o.value).epsilon(1e-9));
    CHECK(r.point.rho == doctest::Approx(o.x[0]).epsilon(1e-6));
    CHECK(r.point.u == doctest::Approx(o.x[1]).epsilon(1e-6));
    CHECK(r.point.y == doctest::Approx(o.x[2]).epsilon(1e-6));
  }
  SUBCASE("SRC with two atoms") {
    const SrcCorrelator b{0.5, {{1.0, 1.0}, {0.5, 2.0}}};
    const double mu = 8.0;
    const MaximizerResult r = psi_src_maximizer(b, mu);
    const auto o = oracle::nelder_mead_max<3>(
        [&](const std::array<double, 3>& p) {
          if (p[0] <= 0.0) return -1e300;
          return psi_src({p[0], p[1], p[2]}, b, mu);
        },
        {0.3, -0.2, -2.0}, 0.1);
    CHECK(r.value == doctest::Approx(o.value).epsilon(1e-9));
    CHECK(r.point.rho == doctest::Approx(o.x[0]).epsilon(1e-6));
    CHECK(r.point.u == doctest::Approx(o.x[1]).epsilon(1e-6));
    CHECK(r.point.y == doctest::Approx(o.x[2]).epsilon(1e-6));
  }
  CHECK_THROWS_AS(psi_src_maximizer(default_src(), 1.5), UnsupportedRegime);
}

TEST_CASE("complexity is bounded by its maximum on a grid") {
  const LrcStructure d = default_lrc();
  const double best = psi_lrc_maximizer(d, 2.0).value;
  for (double rho = 0.1; rho < 2.0; rho += 0.17)
    for (double u = -2.0; u < 1.0; u += 0.23)
      for (double y = -3.0; y < 1.0; y += 0.31) CHECK(psi_lrc({rho, u, y}, d, 2.0) <= best + 1e-12);
}

TEST_CASE("expected count by Monte Carlo") {
  const Model m = default_src();
  const LogMeanEstimate a = expected_crt_mc(m, 3.0, 10, 2000, 1);
  const LogMeanEstimate b = expected_crt_mc(m, 3.0, 40, 2000, 2);
  CHECK(a.se > 0.0);
  CHECK(std::isfinite(a.log_mean));
  CHECK(b.log_mean < a.log_mean);
  CHECK(expected_crt_mc(m, 3.0, 10, 2000, 1).log_mean == a.log_mean);
  CHECK_THROWS_AS(expected_crt_mc(m, 3.0, 10, 50, 1), std::invalid_argument);
}

TEST_CASE("quadrature count matches Monte Carlo") {
  const Model m = default_src();
  const std::size_t n = 12;
  const QuadratureResult q = expected_crt_quadrature(m, 1.5, n, goe_density_exact(n + 1, uniform_grid(-8, 8, 0.002)));
  const LogMeanEstimate mc = expected_crt_mc(m, 1.5, n, 8000, 4);
  CHECK(std::abs(q.log_value - mc.log_mean) < 4.0 * mc.se + 0.02);
  CHECK(q.log_boundary_ratio < -10.0);
  CHECK_THROWS_AS(expected_crt_quadrature(m, 1.5, n, goe_density_exact(n + 1, uniform_grid(-3, 3, 0.01))),
                  GridCoverageError);
}

TEST_CASE("Richardson extrapolation") {
  CHECK(richardson(1.0 + 2.0 / 50, 50, 1.0 + 2.0 / 100, 100) == doctest::Approx(1.0));
  CHECK_THROWS_AS(richardson(1, 10, 2, 10), std::invalid_argument);
}

TEST_CASE("replica equations") {
  for (auto [b, mu] : {std::pair{default_src(), 3.0}, std::pair{SrcCorrelator{0.5, {{1.0, 1.0}, {0.5, 2.0}}}, 8.0}}) {
    const ReplicaReport r = replica_solve(b, mu);
    CHECK(std::abs(r.symmetric.residual_1) < 1e-10);
    CHECK(std::abs(r.symmetric.residual_2) < 1e-10);
    CHECK(r.symmetric.edge == doctest::Approx(predictions(b, mu).lambda_edge).epsilon(1e-12));
    for (const ReplicaSolution& s : r.interior) {
      CHECK(std::abs(s.residual_1) < 1e-10);
      CHECK(std::abs(s.residual_2) < 1e-10);
    }
  }
}
