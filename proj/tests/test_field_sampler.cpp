#include <cmath>

#include "doctest.h"
#include "landscape/field_sampler.hpp"

using namespace landscape;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

}  // namespace

TEST_CASE("LRC realizations vanish at the origin") {
  const FieldRealization f = sample_field(default_lrc(), 7, 300, 3);
  CHECK(std::abs(eval_field(f, Eigen::VectorXd::Zero(7))) < 1e-12);
  CHECK(std::abs(eval_hamiltonian(f, 2.0, Eigen::VectorXd::Zero(7)).value) < 1e-12);
}

TEST_CASE("gradient and Hessian match finite differences") {
  for (const Model& m : {Model{default_src()}, Model{LrcStructure{0.3, {{1.0, 1.2}, {0.5, 0.4}}}}}) {
    const std::size_t n = 5;
    const FieldRealization f = sample_field(m, n, 64, 17);
    const double mu = 2.5;
    const Eigen::VectorXd x = vec({0.3, -0.7, 1.1, 0.2, -0.4});
    const HamiltonianEval e = eval_hamiltonian(f, mu, x);
    Eigen::VectorXd g;
    CHECK(eval_value_gradient(f, mu, x, g) == doctest::Approx(e.value).epsilon(1e-14));
    CHECK((g - e.gradient).norm() < 1e-12);
    const double h = 1e-5;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      const HamiltonianEval ep = eval_hamiltonian(f, mu, xp), em = eval_hamiltonian(f, mu, xm);
      CHECK((ep.value - em.value) / (2 * h) == doctest::Approx(e.gradient(i)).epsilon(1e-7));
      const Eigen::VectorXd col = (ep.gradient - em.gradient) / (2 * h);
      CHECK((col - e.hessian.col(i)).norm() < 1e-6 * (1.0 + e.hessian.norm()));
    }
    CHECK((e.hessian - e.hessian.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e.hessian);
    CHECK(es.eigenvalues().cwiseAbs().maxCoeff() <= hessian_spectral_bound(f, mu));
  }
}

TEST_CASE("random-feature covariance matches the model") {
  const std::size_t n = 3, reps = 3000;
  const Eigen::VectorXd x = vec({0.5, 0.0, -0.5}), y = vec({-0.2, 0.8, 0.1});
  SUBCASE("SRC") {
    const SrcCorrelator b = default_src();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t t = 0; t < reps; ++t) {
      const FieldRealization f = sample_field(b, n, 128, 1000 + t);
      const double a = eval_field(f, x), c = eval_field(f, y);
      sxy += a * c;
      sxx += a * a;
    }
    const double cxy = n * eval_src(b, (x - y).squaredNorm() / n);
    // Var of a product estimate is about N^2 (B(0)^2 + cov^2).
    const double se = n * std::sqrt(2.0 / reps);
    CHECK(std::abs(sxy / reps - cxy) < 4 * se);
    CHECK(std::abs(sxx / reps - n * eval_src(b, 0.0)) < 4 * se);
  }
  SUBCASE("LRC increments") {
    const LrcStructure d = default_lrc();
    double s = 0.0, s2 = 0.0;
    for (std::size_t t = 0; t < reps; ++t) {
      const FieldRealization f = sample_field(d, n, 128, 5000 + t);
      const double inc = eval_field(f, x) - eval_field(f, y);
      s += inc * inc;
      s2 += inc * inc * inc * inc;
    }
    const double v = s / reps;
    const double se = std::sqrt((s2 / reps - v * v) / reps);
    CHECK(std::abs(v - n * eval_lrc(d, (x - y).squaredNorm() / n)) < 4 * se);
  }
}

TEST_CASE("closed-form covariance on points") {
  const std::size_t n = 4;
  const std::vector<Eigen::VectorXd> pts{vec({1, 0, 0, 0}), vec({0, 1, 1, 0}), vec({0.5, -0.5, 0, 2})};
  const LrcStructure d = default_lrc();
  const Eigen::MatrixXd c = point_covariance(d, pts);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double expect = 0.5 * n *
                            (eval_lrc(d, pts[i].squaredNorm() / n) + eval_lrc(d, pts[j].squaredNorm() / n) -
                             eval_lrc(d, (pts[i] - pts[j]).squaredNorm() / n));
      CHECK(c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == doctest::Approx(expect).epsilon(1e-13));
    }
  const Eigen::MatrixXd s = exact_sample_on_points(d, pts, 20000, 8);
  const Eigen::MatrixXd centered = s.rowwise() - s.colwise().mean();
  const Eigen::MatrixXd emp = centered.transpose() * centered / double(s.rows() - 1);
  CHECK((emp - c).cwiseAbs().maxCoeff() < 0.1 * c.cwiseAbs().maxCoeff());
  CHECK_THROWS_AS(exact_sample_on_points(d, {pts[0], pts[0]}, 10, 1), std::invalid_argument);
}

TEST_CASE("sampler arguments and determinism") {
  CHECK_THROWS_AS(sample_field(default_src(), 0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_field(default_src(), 3, 0, 1), std::invalid_argument);
  const FieldRealization a = sample_field(default_src(), 4, 32, 9), b = sample_field(default_src(), 4, 32, 9);
  CHECK(a.frequencies == b.frequencies);
  CHECK(a.phases == b.phases);
  CHECK_THROWS_AS(eval_field(a, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}
