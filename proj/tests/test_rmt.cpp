#include <cmath>
#include <numbers>

#include "doctest.h"
#include "landscape/numerics.hpp"
#include "landscape/rmt.hpp"
#include "oracles.hpp"

using namespace landscape;

TEST_CASE("special functions") {
  for (double x : {-3.0, -0.5, 0.0, 0.7, 4.0, 20.0})
    CHECK(erfcx(x) == doctest::Approx(std::exp(x * x) * std::erfc(x)).epsilon(1e-12));
  // Asymptotic series 1/(x sqrt(pi)) (1 - 1/(2x^2) + 3/(4x^4)).
  const double x = 1e3;
  CHECK(erfcx(x) == doctest::Approx((1.0 - 0.5 / (x * x) + 0.75 / std::pow(x, 4)) / (x * std::sqrt(std::numbers::pi)))
                        .epsilon(1e-14));
  for (double z : {-30.0, -5.0, 0.0, 2.0})
    CHECK(log_normal_cdf(z) == doctest::Approx(std::log(0.5 * std::erfc(-z / std::numbers::sqrt2))).epsilon(1e-12));
  CHECK(log_sum_exp({std::log(2.0), std::log(3.0)}) == doctest::Approx(std::log(5.0)));
  CHECK(log_mean_exp({1000.0, 1000.0}) == doctest::Approx(1000.0));
  CHECK(std::isinf(log_sum_exp({})));
}

TEST_CASE("jackknife and KS helpers") {
  const LogMeanEstimate c = log_mean_exp_jackknife(std::vector<double>(50, 2.5));
  CHECK(c.log_mean == doctest::Approx(2.5));
  CHECK(c.se == doctest::Approx(0.0));
  // Two-sample critical value at 1% for n = m = 500: sqrt(-ln(0.005)/2) sqrt(2/500).
  CHECK(ks_critical(500, 500, 0.01) == doctest::Approx(1.62762 * std::sqrt(2.0 / 500.0)).epsilon(1e-5));
  CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_statistic({0, 0, 0}, {1, 1, 1}) == 1.0);
  const Extremum e = golden_max([](double t) { return -(t - 1.25) * (t - 1.25); }, -3.0, 4.0);
  CHECK(e.x == doctest::Approx(1.25).epsilon(1e-9));
}

TEST_CASE("seeding is reproducible and streams differ") {
  Rng a = make_rng(7), b = make_rng(7), c = make_rng(7, 1);
  CHECK(a() == b());
  CHECK(make_rng(7)() != c());
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
}

TEST_CASE("GOE entry variances") {
  Rng rng = make_rng(11);
  const int n = 6, draws = 20000;
  double diag = 0.0, off = 0.0;
  for (int t = 0; t < draws; ++t) {
    const Eigen::MatrixXd m = sample_goe_matrix(n, rng);
    CHECK(m == m.transpose());
    diag += m(2, 2) * m(2, 2);
    off += m(1, 4) * m(1, 4);
  }
  // (1 + delta_ij) / (2N): 1/6 and 1/12.
  CHECK(diag / draws == doctest::Approx(1.0 / 6.0).epsilon(0.04));
  CHECK(off / draws == doctest::Approx(1.0 / 12.0).epsilon(0.04));
}

TEST_CASE("semicircle law") {
  const SemicircleLaw s{1.0, 2.0};
  CHECK(oracle::simpson([&](double x) { return s.density(x); }, -1.0, 3.0, 20000) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(s.cdf(1.0) == doctest::Approx(0.5));
  CHECK(s.cdf(-5.0) == 0.0);
  CHECK(s.cdf(5.0) == 1.0);
  CHECK(s.lower_edge() == -1.0);
}

TEST_CASE("exact one-point density") {
  // GOE_1 is N(0, 1).
  for (double x : {-2.0, 0.0, 0.5, 3.0})
    CHECK(goe_log_density(1, x) == doctest::Approx(-x * x / 2 - 0.5 * std::log(2 * std::numbers::pi)).epsilon(1e-12));
  for (std::size_t n : {2u, 5u, 20u, 51u}) {
    const DensityEstimate d = goe_density_exact(n, uniform_grid(-6.0, 6.0, 0.002));
    CHECK(d.trapezoid_mass() == doctest::Approx(1.0).epsilon(1e-8));
    // Symmetric in x.
    CHECK(goe_log_density(n, 1.3) == doctest::Approx(goe_log_density(n, -1.3)).epsilon(1e-12));
  }
  // Second moment of the mean spectral measure is (N+1)/(2N).
  const std::size_t n = 7;
  const double m2 =
      oracle::simpson([&](double x) { return x * x * std::exp(goe_log_density(n, x)); }, -8.0, 8.0, 20000);
  CHECK(m2 == doctest::Approx((n + 1.0) / (2.0 * n)).epsilon(1e-8));
  // Far tail is finite on the log scale.
  CHECK(std::isfinite(goe_log_density(50, 6.0)));
  CHECK(goe_log_density(50, 6.0) < -40.0);
}

TEST_CASE("histogram estimate tracks the exact density") {
  const auto edges = uniform_edges(-2.5, 2.5, 0.1);
  const DensityEstimate h = rho_n_estimate(8, 5000, edges, 3);
  CHECK(h.grid.size() == 50);
  CHECK(h.trapezoid_mass() == doctest::Approx(1.0).epsilon(0.02));
  double l1 = 0.0;
  for (std::size_t i = 0; i < h.grid.size(); ++i) l1 += std::abs(h.values[i] - std::exp(goe_log_density(8, h.grid[i]))) * 0.1;
  CHECK(l1 < 0.05);
  CHECK_THROWS_AS(h.log_at(10.0), std::out_of_range);
  CHECK_THROWS_AS(rho_n_estimate(8, 10, edges, 3), std::invalid_argument);
}

TEST_CASE("dense and tridiagonal spectra share a law") {
  Rng r1 = make_rng(5), r2 = make_rng(6);
  std::vector<double> a, b;
  for (int t = 0; t < 400; ++t) {
    a.push_back(goe_eigenvalues(60, r1, GoeMethod::Dense).front());
    b.push_back(goe_eigenvalues(60, r2, GoeMethod::Tridiagonal).front());
  }
  CHECK(ks_statistic(a, b) < ks_critical(a.size(), b.size(), 0.01));
  const SpectrumSample s = sample_goe(30, 1);
  CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
  CHECK(s.lambda_star() == doctest::Approx(std::max(-s.lambda_min(), s.lambda_max())));
}

TEST_CASE("shifted determinant identity on a small case") {
  // N = 1: E|g + x| for g ~ N(0, 1) has the closed form x(1 - 2 Phi(-x)) + 2 phi(x).
  const double x = 0.8;
  const double exact = x * std::erf(x / std::numbers::sqrt2) + 2.0 * std::exp(-x * x / 2) / std::sqrt(2 * std::numbers::pi);
  const DensityEstimate rho2 = goe_density_exact(2, uniform_grid(-6.0, 6.0, 0.001));
  CHECK(expected_abs_det_shifted_formula(1, x, rho2) == doctest::Approx(std::log(exact)).epsilon(1e-6));
  const LogMeanEstimate mc = expected_abs_det_shifted_mc(1, x, 200000, 9);
  CHECK(std::abs(mc.log_mean - std::log(exact)) < 4 * mc.se + 1e-3);
}

TEST_CASE("bounded-Lipschitz distance") {
  auto pt = [](double a) { return DiscreteMeasure{{a}, {1.0}}; };
  CHECK(bl_distance(pt(0.0), pt(0.4)) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(bl_distance(pt(0.0), pt(5.0)) == doctest::Approx(2.0).epsilon(1e-12));
  // f(0) = 1, f(+-1) = 0 is optimal: distance 1.
  CHECK(bl_distance(pt(0.0), DiscreteMeasure{{-1.0, 1.0}, {0.5, 0.5}}) == doctest::Approx(1.0).epsilon(1e-12));
  // Half the mass moved by 3: 0.5 * min(3, 2).
  CHECK(bl_distance(pt(0.0), DiscreteMeasure{{0.0, 3.0}, {0.5, 0.5}}) == doctest::Approx(1.0).epsilon(1e-12));
  const SemicircleLaw s{0.0, std::numbers::sqrt2};
  CHECK(bl_distance(s, s) < 1e-12);
  const double shifted = bl_distance(s, SemicircleLaw{0.1, std::numbers::sqrt2});
  CHECK(shifted <= 0.1 + 1e-3);
  CHECK(shifted > 0.07);
  // Large-N GOE spectra approach the semicircle.
  CHECK(bl_distance(empirical_measure(sample_goe(800, 2)), s) < 0.05);
}
