#include "landscape/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "landscape/complexity.hpp"
#include "landscape/config.hpp"
#include "landscape/errors.hpp"
#include "landscape/experiments.hpp"
#include "landscape/field_sampler.hpp"
#include "landscape/lrc_hessian.hpp"
#include "landscape/numerics.hpp"
#include "landscape/rmt.hpp"

namespace landscape {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

CheckOutcome outcome(bool pass, const std::string& detail) { return {pass, detail}; }

// Sample covariance of the rows of s (mean known to be zero) against c, per-entry z-scores.
double worst_cov_z(const Eigen::MatrixXd& s, const Eigen::MatrixXd& c) {
  const double n = static_cast<double>(s.rows());
  const Eigen::MatrixXd emp = s.transpose() * s / n;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double se = std::sqrt((c(i, i) * c(j, j) + c(i, j) * c(i, j)) / n);
      worst = std::max(worst, std::abs(emp(i, j) - c(i, j)) / se);
    }
  return worst;
}

std::vector<Eigen::VectorXd> three_points() {
  Eigen::VectorXd a(3), b(3), c(3);
  a << 0.4, -0.2, 0.1;
  b << 1.0, 0.5, 0.0;
  c << -0.5, 1.0, 1.0;
  return {a, b, c};
}

// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
Eigen::MatrixXd random_orthogonal(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ();
}

double lu_log_abs_det(const Eigen::MatrixXd& m) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::MatrixXd& u = lu.matrixLU();
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) s += std::log(std::abs(u(i, i)));
  return s;
}

struct LrcSetup {
  LrcStructure d = default_lrc();
  double mu = 2.0;
  PredictionReport p = predictions(Model{default_lrc()}, 2.0);
};

// --- structure_functions ---------------------------------------------------

CheckOutcome derivatives_fd(std::uint64_t) {
  const std::vector<SrcCorrelator> src{default_src(), {0.5, {{1.0, 1.0}, {0.5, 2.0}}}};
  const std::vector<LrcStructure> lrc{default_lrc(), {0.3, {{1.0, 1.0}, {2.0, 0.5}}}};
  const double h = 1e-5;
  double worst = 0.0;
  for (double r : {0.05, 0.7, 2.0})
    for (int k = 1; k <= 4; ++k) {
      for (const auto& b : src) {
        const double fd = (eval_src(b, r + h, k - 1) - eval_src(b, r - h, k - 1)) / (2 * h);
        const double ex = eval_src(b, r, k);
        worst = std::max(worst, std::abs(fd - ex) / (1.0 + std::abs(ex)));
      }
      for (const auto& d : lrc) {
        const double fd = (eval_lrc(d, r + h, k - 1) - eval_lrc(d, r - h, k - 1)) / (2 * h);
        const double ex = eval_lrc(d, r, k);
        worst = std::max(worst, std::abs(fd - ex) / (1.0 + std::abs(ex)));
      }
    }
  return outcome(worst <= 1e-6, "max relative error " + num(worst));
}

CheckOutcome assumption3_default(std::uint64_t) {
  const Assumption3Report r = check_assumption3(default_lrc(), 5.0, 400);
  return outcome(r.pass, "worst margin " + num(r.worst_margin) + " at rho " + num(r.worst_rho));
}

CheckOutcome thresholds(std::uint64_t) {
  const double s = trivialization_threshold(default_src());
  const double l = trivialization_threshold(default_lrc());
  return outcome(std::abs(s - 2.0) <= 1e-15 && std::abs(l - std::numbers::sqrt2) <= 1e-15,
                 "src " + num(s) + ", lrc " + num(l));
}

// --- field_sampler ---------------------------------------------------------

CheckOutcome random_feature_covariance(std::uint64_t seed) {
  const auto pts = three_points();
  double worst = 0.0;
  for (const Model& m : {Model{default_src()}, Model{default_lrc()}}) {
    const std::size_t n = 4000;
    Eigen::MatrixXd s(n, 3);
    for (std::size_t t = 0; t < n; ++t) {
      const FieldRealization f = sample_field(m, 3, 256, mix_seed(seed, t));
      for (Eigen::Index j = 0; j < 3; ++j) s(static_cast<Eigen::Index>(t), j) = eval_field(f, pts[j]);
    }
    worst = std::max(worst, worst_cov_z(s, point_covariance(m, pts)));
  }
  return outcome(worst <= 4.0, "worst |z| over covariance entries " + num(worst));
}

CheckOutcome field_derivatives(std::uint64_t seed) {
  double worst_g = 0.0, worst_h = 0.0;
  bool symmetric = true;
  for (const Model& m : {Model{default_src()}, Model{default_lrc()}}) {
    const FieldRealization f = sample_field(m, 5, 64, seed);
    Rng rng = make_rng(seed, 7);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd x(5);
    for (int i = 0; i < 5; ++i) x(i) = g(rng);
    const double mu = 1.3;
    const HamiltonianEval e = eval_hamiltonian(f, mu, x);
    symmetric = symmetric && e.hessian == e.hessian.transpose();
    const double h = 1e-6;
    for (int i = 0; i < 5; ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      Eigen::VectorXd gp, gm;
      const double vp = eval_value_gradient(f, mu, xp, gp);
      const double vm = eval_value_gradient(f, mu, xm, gm);
      worst_g = std::max(worst_g, std::abs((vp - vm) / (2 * h) - e.gradient(i)) / (1.0 + std::abs(e.gradient(i))));
      const Eigen::VectorXd col = (gp - gm) / (2 * h);
      worst_h = std::max(worst_h, (col - e.hessian.col(i)).cwiseAbs().maxCoeff() / (1.0 + e.hessian.norm()));
    }
  }
  return outcome(worst_g <= 1e-6 && worst_h <= 1e-6 && symmetric,
                 "gradient " + num(worst_g) + ", Hessian " + num(worst_h) + (symmetric ? "" : ", asymmetric"));
}

CheckOutcome exact_sampler_covariance(std::uint64_t seed) {
  const auto pts = three_points();
  double worst = 0.0;
  for (const Model& m : {Model{default_src()}, Model{default_lrc()}}) {
    const Eigen::MatrixXd s = exact_sample_on_points(m, pts, 20000, seed);
    worst = std::max(worst, worst_cov_z(s, point_covariance(m, pts)));
  }
  return outcome(worst <= 4.0, "worst |z| over covariance entries " + num(worst));
}

CheckOutcome pinned_origin(std::uint64_t seed) {
  auto pts = three_points();
  pts.push_back(Eigen::VectorXd::Zero(3));
  const Eigen::MatrixXd s = exact_sample_on_points(Model{default_lrc()}, pts, 1000, seed);
  const double m = s.col(3).cwiseAbs().maxCoeff();
  return outcome(m <= 1e-6, "max |X(0)| " + num(m));
}

// --- rmt -------------------------------------------------------------------

CheckOutcome dense_vs_tridiagonal(std::uint64_t seed) {
  std::vector<double> a, b;
  Rng r1 = make_rng(seed, 1), r2 = make_rng(seed, 2);
  for (int t = 0; t < 500; ++t) {
    a.push_back(goe_eigenvalues(200, r1, GoeMethod::Dense).back());
    b.push_back(goe_eigenvalues(200, r2, GoeMethod::Tridiagonal).back());
  }
  const double diff = mean(a) - mean(b);
  const double se = std::hypot(standard_error(a), standard_error(b));
  return outcome(std::abs(diff) <= 3.0 * se, "difference " + num(diff) + ", combined SE " + num(se));
}

CheckOutcome exact_density_mass(std::uint64_t) {
  double worst = 0.0;
  for (std::size_t n : {20u, 21u}) {
    const DensityEstimate d = goe_density_exact(n, uniform_grid(-5.0, 5.0, 0.002));
    worst = std::max(worst, std::abs(d.trapezoid_mass() - 1.0));
  }
  return outcome(worst <= 1e-6, "max |mass - 1| " + num(worst));
}

CheckOutcome histogram_vs_exact(std::uint64_t seed) {
  const auto edges = uniform_edges(-3.0, 3.0, 0.1);
  const DensityEstimate h = rho_n_estimate(10, 4000, edges, seed);
  double l1 = 0.0;
  for (std::size_t i = 0; i < h.grid.size(); ++i)
    l1 += std::abs(h.values[i] - std::exp(goe_log_density(10, h.grid[i]))) * 0.1;
  return outcome(l1 <= 0.05, "L1 distance " + num(l1));
}

CheckOutcome semicircle_consistency(std::uint64_t) {
  const SemicircleLaw s{13.0 / 3.0, 4.0};
  bool ok = std::abs(s.cdf(s.center - s.radius)) <= 1e-15 && std::abs(s.cdf(s.center + s.radius) - 1.0) <= 1e-15 &&
            std::abs(s.cdf(s.center) - 0.5) <= 1e-15;
  double worst = 0.0;
  for (double x : {1.0, 3.0, 5.5, 8.0}) {
    const double h = 1e-6;
    worst = std::max(worst, std::abs((s.cdf(x + h) - s.cdf(x - h)) / (2 * h) - s.density(x)));
  }
  return outcome(ok && worst <= 1e-7, "cdf' vs density " + num(worst));
}

CheckOutcome bl_properties(std::uint64_t seed) {
  double worst = 0.0;
  for (double a : {0.3, 1.0, 2.5}) {
    const double d = bl_distance(DiscreteMeasure{{0.0}, {1.0}}, DiscreteMeasure{{a}, {1.0}});
    worst = std::max(worst, std::abs(d - std::min(a, 2.0)));
  }
  Rng rng = make_rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto draw = [&](double shift) {
    std::vector<double> v(40);
    for (double& x : v) x = g(rng) + shift;
    return empirical_measure(v);
  };
  const Measure p = draw(0.0), q = draw(0.4), r = draw(-0.3);
  const double pq = bl_distance(p, q), qp = bl_distance(q, p), pr = bl_distance(p, r), rq = bl_distance(r, q);
  const double self = bl_distance(p, p);
  const bool ok = worst <= 1e-9 && std::abs(pq - qp) <= 1e-9 && pq <= pr + rq + 1e-9 && self <= 1e-12;
  return outcome(ok, "point-mass error " + num(worst) + ", d(p,q) " + num(pq) + ", d(q,p) " + num(qp));
}

CheckOutcome determinant_identity(std::uint64_t seed) {
  const DensityEstimate rho = goe_density_exact(21, uniform_grid(-6.0, 6.0, 0.001));
  const LogMeanEstimate mc = expected_abs_det_shifted_mc(20, 3.0, 20000, seed);
  const double f = expected_abs_det_shifted_formula(20, 3.0, rho);
  return outcome(std::abs(mc.log_mean - f) <= std::max(0.05, 3.0 * mc.se),
                 "MC " + num(mc.log_mean) + " +- " + num(mc.se) + ", formula " + num(f));
}

// --- complexity ------------------------------------------------------------

CheckOutcome psi_bounded_by_max(std::uint64_t seed) {
  const SrcCorrelator b{0.5, {{1.0, 1.0}, {0.5, 2.0}}};
  const double mu_s = 8.0;
  const MaximizerResult ms = psi_src_maximizer(b, mu_s);
  const LrcStructure d = default_lrc();
  const MaximizerResult ml = psi_lrc_maximizer(d, 2.0);
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> ur(0.01, 3.0), uu(-3.0, 3.0), uy(-4.0, 4.0), loc(-0.05, 0.05);
  double excess = -1e300;
  for (int i = 0; i < 2000; ++i) {
    const ComplexityPoint p{ur(rng), uu(rng), uy(rng)};
    excess = std::max(excess, psi_src(p, b, mu_s) - ms.value);
    excess = std::max(excess, psi_lrc(p, d, 2.0) - ml.value);
    const ComplexityPoint qs{ms.point.rho + loc(rng), ms.point.u + loc(rng), ms.point.y + loc(rng)};
    const ComplexityPoint ql{ml.point.rho + loc(rng), ml.point.u + loc(rng), ml.point.y + loc(rng)};
    excess = std::max(excess, psi_src(qs, b, mu_s) - ms.value);
    excess = std::max(excess, psi_lrc(ql, d, 2.0) - ml.value);
  }
  const double at_s = std::abs(psi_src(ms.point, b, mu_s) - ms.value);
  const double at_l = std::abs(psi_lrc(ml.point, d, 2.0) - ml.value);
  return outcome(excess <= 1e-12 && at_s <= 1e-12 && at_l <= 1e-12,
                 "max psi - psi* " + num(excess) + ", |psi(x*) - psi*| " + num(std::max(at_s, at_l)));
}

CheckOutcome big_f_closed_form(std::uint64_t) {
  double worst = 0.0;
  for (double m : {-0.3, -0.6, -1.0, -2.0}) {
    auto f = [m](double x) { return big_f(x, m); };
    double best = -10.0, bv = f(best);
    for (double x = -10.0; x <= 0.0; x += 1e-3)
      if (f(x) > bv) {
        bv = f(x);
        best = x;
      }
    const Extremum e = golden_max(f, best - 2e-3, best + 2e-3, 1e-13);
    const FMaximizer c = big_f_maximizer(m);
    worst = std::max({worst, std::abs(e.x - c.x_max) * 1e-2, std::abs(e.value - c.f_max)});
  }
  return outcome(worst <= 1e-8, "max error " + num(worst));
}

CheckOutcome count_decreasing(std::uint64_t seed) {
  const Model m{default_src()};
  const LogMeanEstimate a = expected_crt_mc(m, 3.0, 25, 4000, mix_seed(seed, 25));
  const LogMeanEstimate b = expected_crt_mc(m, 3.0, 50, 4000, mix_seed(seed, 50));
  const double ea = std::exp(a.log_mean), eb = std::exp(b.log_mean);
  const bool ok = ea > eb - 3.0 * std::hypot(a.se, b.se) && eb >= 0.9 && eb <= 1.4;
  return outcome(ok, "E Crt(25) " + num(ea) + ", E Crt(50) " + num(eb));
}

CheckOutcome quadrature_vs_mc(std::uint64_t seed) {
  const Model m{default_src()};
  const DensityEstimate rho = goe_density_exact(21, uniform_grid(-9.0, 9.0, 0.002));
  const QuadratureResult q = expected_crt_quadrature(m, 3.0, 20, rho);
  const LogMeanEstimate mc = expected_crt_mc(m, 3.0, 20, 4000, seed);
  return outcome(std::abs(q.log_value - mc.log_mean) <= std::max(0.02, 3.0 * mc.se),
                 "quadrature " + num(q.log_value) + ", MC " + num(mc.log_mean) + " +- " + num(mc.se));
}

CheckOutcome subcritical_exponents(std::uint64_t) {
  const double s = *predictions(Model{default_src()}, 1.0).exponent_subcritical;
  const double l = *predictions(Model{default_lrc()}, 1.0).exponent_subcritical;
  const double ln2 = std::numbers::ln2;
  return outcome(std::abs(s - (ln2 - 0.375)) <= 1e-12 && std::abs(l - (0.5 * ln2 - 0.25)) <= 1e-12,
                 "src " + num(s) + ", lrc " + num(l));
}

CheckOutcome richardson_exact(std::uint64_t) {
  auto f = [](double n) { return 0.3 + 2.0 / n; };
  const double r = richardson(f(50), 50, f(100), 100);
  return outcome(std::abs(r - 0.3) <= 1e-14, "extrapolated " + num(r));
}

// --- replica ---------------------------------------------------------------

CheckOutcome replica_symmetric_branch(std::uint64_t) {
  const std::vector<std::pair<SrcCorrelator, double>> cases{
      {default_src(), 3.0}, {{0.5, {{1.0, 1.0}, {0.5, 2.0}}}, 8.0}, {{0.0, {{2.0, 0.5}}}, 1.5}};
  double worst_res = 0.0, worst_edge = 0.0;
  for (const auto& [b, mu] : cases) {
    const ReplicaReport r = replica_solve(b, mu);
    worst_res = std::max({worst_res, std::abs(r.symmetric.residual_1), std::abs(r.symmetric.residual_2)});
    worst_edge = std::max(worst_edge, std::abs(r.symmetric.edge - predictions(Model{b}, mu).lambda_edge));
  }
  return outcome(worst_res <= 1e-10 && worst_edge <= 1e-12,
                 "residual " + num(worst_res) + ", edge mismatch " + num(worst_edge));
}

// --- lrc_hessian -----------------------------------------------------------

CheckOutcome constants_at_maximizer(std::uint64_t) {
  const LrcSetup s;
  const double rho = *s.p.rho_star, u = *s.p.u_star, y = *s.p.y_star;
  const LrcConditionalConstants c = constants(s.d, s.mu, rho, u);
  const double r = rho * rho;
  const double my = s.mu * r / 2.0 - s.mu * (0.5 + std::exp(-r)) * r / 1.5;
  const CornerConditional cc = corner_conditional(s.d, s.mu, rho, u, y);
  const bool ok = std::abs(c.mY - my) <= 1e-14 && c.sigma1_sq_times_N > 0.0 && c.sigma2_sq_times_N > 0.0 &&
                  std::abs(cc.a_bar - 3.0) <= 1e-12 && cc.b_sq > 0.0;
  return outcome(ok, "mY " + num(c.mY) + ", a_bar " + num(cc.a_bar) + ", b^2 " + num(cc.b_sq));
}

CheckOutcome interlacing(std::uint64_t seed) {
  const LrcSetup s;
  std::size_t bad_secular = 0, bad_dense = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::optional<double> y = t % 2 ? s.p.y_star : std::nullopt;
    const BorderedHessianSample a =
        sample_g(s.d, s.mu, *s.p.rho_star, *s.p.u_star, 50, mix_seed(seed, t), y, ArrowheadMethod::Secular);
    const BorderedHessianSample b =
        sample_g(s.d, s.mu, *s.p.rho_star, *s.p.u_star, 50, mix_seed(seed, t), y, ArrowheadMethod::Dense);
    if (!interlaces(a, 0.0)) ++bad_secular;
    if (!interlaces(b, 1e-10)) ++bad_dense;
  }
  return outcome(bad_secular == 0 && bad_dense == 0,
                 "violations: secular " + std::to_string(bad_secular) + ", dense " + std::to_string(bad_dense));
}

CheckOutcome secular_vs_dense(std::uint64_t seed) {
  const LrcSetup s;
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const BorderedHessianSample a = sample_g(s.d, s.mu, *s.p.rho_star, *s.p.u_star, 100, mix_seed(seed, t),
                                             s.p.y_star, ArrowheadMethod::Dense);
    const std::vector<double> b = arrowhead_eigenvalues(a.z1, a.xi, a.bulk, ArrowheadMethod::Secular);
    for (std::size_t i = 0; i < b.size(); ++i) worst = std::max(worst, std::abs(a.eigenvalues[i] - b[i]));
  }
  return outcome(worst <= 1e-9, "max eigenvalue difference " + num(worst));
}

CheckOutcome schur_vs_dense(std::uint64_t seed) {
  const LrcSetup s;
  double worst = 0.0;
  int sign_mismatch = 0;
  for (std::size_t n : {8u, 32u, 64u})
    for (std::uint64_t t = 0; t < 100; ++t) {
      const BorderedHessianSample g = sample_g(s.d, s.mu, 0.8, -0.2, n, mix_seed(seed, 1000 * n + t));
      const SchurDeterminant sd = schur_det(g);
      Rng rng = make_rng(seed, 1000 * n + t);
      const auto m = static_cast<Eigen::Index>(n);
      Eigen::MatrixXd q = Eigen::MatrixXd::Identity(m, m);
      q.bottomRightCorner(m - 1, m - 1) = random_orthogonal(m - 1, rng);
      const Eigen::MatrixXd full = q * dense_matrix(g) * q.transpose();
      worst = std::max(worst, std::abs(sd.log_abs - lu_log_abs_det(full)));
      const double det_sign = full.determinant() < 0.0 ? -1 : 1;
      if (n == 8 && det_sign != sd.sign) ++sign_mismatch;
    }
  return outcome(worst <= 1e-8 && sign_mismatch == 0,
                 "max |log det difference| " + num(worst) + ", sign mismatches " + std::to_string(sign_mismatch));
}

CheckOutcome xi_variance(std::uint64_t seed) {
  const LrcSetup s;
  const std::size_t n = 10, draws = 10000;
  std::vector<std::vector<double>> sq(n - 1);
  for (std::uint64_t t = 0; t < draws; ++t) {
    const BorderedHessianSample g = sample_g(s.d, s.mu, *s.p.rho_star, *s.p.u_star, n, mix_seed(seed, t));
    for (std::size_t j = 0; j + 1 < n; ++j) sq[j].push_back(g.xi(static_cast<Eigen::Index>(j)) * g.xi(static_cast<Eigen::Index>(j)));
  }
  const double target = 2.0 / static_cast<double>(n);
  double worst = 0.0;
  for (const auto& v : sq) worst = std::max(worst, std::abs(mean(v) - target) / standard_error(v));
  return outcome(worst <= 3.0, "worst |z| over coordinates " + num(worst));
}

CheckOutcome conditional_corner_law(std::uint64_t seed) {
  const LrcSetup s;
  const double rho = *s.p.rho_star, u = *s.p.u_star;
  const std::size_t n = 4;
  std::vector<std::pair<double, double>> draws;
  for (std::uint64_t t = 0; t < 100000; ++t) {
    const BorderedHessianSample g = sample_g(s.d, s.mu, rho, u, n, mix_seed(seed, t));
    draws.emplace_back(g.z3, g.z1);
  }
  Rng rng = make_rng(seed, 99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::ostringstream detail;
  bool ok = true;
  for (double y : {*s.p.y_star - 0.1, *s.p.y_star, *s.p.y_star + 0.1}) {
    std::vector<double> bin;
    for (const auto& [z3, z1] : draws)
      if (std::abs(z3 - y) <= 0.005) bin.push_back(z1);
    const CornerConditional cc = corner_conditional(s.d, s.mu, rho, u, y);
    std::vector<double> ref(bin.size());
    for (double& r : ref) r = cc.a_bar + std::sqrt(cc.b_sq / static_cast<double>(n)) * gauss(rng);
    const double z = bin.size() > 1 ? (mean(bin) - cc.a_bar) / standard_error(bin) : 1e9;
    const double ks = ks_statistic(bin, ref);
    const double crit = ks_critical(bin.size(), ref.size(), 0.01);
    ok = ok && std::abs(z) <= 3.0 && ks < crit;
    detail << "y=" << num(y) << ": n=" << bin.size() << " z=" << num(z) << " ks=" << num(ks) << "/" << num(crit)
           << "; ";
  }
  return outcome(ok, detail.str());
}

CheckOutcome w_reconstruction(std::uint64_t seed) {
  const LrcSetup s;
  const double rho = *s.p.rho_star, u = *s.p.u_star, y = *s.p.y_star;
  const std::size_t n = 200;
  std::vector<double> a, b;
  for (std::uint64_t t = 0; t < 500; ++t) {
    a.push_back(sample_g(s.d, s.mu, rho, u, n, mix_seed(seed, t), y).lambda_min());
    b.push_back(lambda_min_from_w(s.d, tridiag_w_lambda_max(s.d, s.mu, rho, u, y, n, mix_seed(seed, 10000 + t)), y, n));
  }
  const double ks = ks_statistic(a, b);
  const double crit = ks_critical(a.size(), b.size(), 0.01);
  return outcome(ks < crit, "KS " + num(ks) + " vs critical " + num(crit) + "; means " + num(mean(a)) + ", " +
                                num(mean(b)));
}

CheckOutcome w_structure(std::uint64_t seed) {
  const LrcSetup s;
  const TridiagonalW w = sample_tridiag_w(s.d, s.mu, *s.p.rho_star, *s.p.u_star, *s.p.y_star, 50, seed);
  const bool ok = w.diag.size() == 50 && w.off.size() == 49 && w.diag.allFinite() && w.off.allFinite() &&
                  (w.off.array() >= 0.0).all();
  return outcome(ok, "diag " + std::to_string(w.diag.size()) + ", off " + std::to_string(w.off.size()));
}

CheckOutcome w_lambda_max_bound(std::uint64_t seed) {
  const LrcSetup s;
  const std::size_t n = 1000;
  int within = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const double l = tridiag_w_lambda_max(s.d, s.mu, *s.p.rho_star, *s.p.u_star, *s.p.y_star, n, mix_seed(seed, t));
    if (l / std::sqrt(static_cast<double>(n)) <= 2.25) ++within;
  }
  return outcome(within >= 95, std::to_string(within) + "/100 draws with lambda_max/sqrt(N) <= 2.25");
}

CheckOutcome edge_tail_inversion(std::uint64_t seed) {
  const EdgeTailResult r = edge_tail(default_lrc(), 2.0, 50, 50, -10.0, seed);
  return outcome(r.probability == 1.0, "fraction " + num(r.probability));
}

CheckOutcome edge_tail_trend(std::uint64_t seed) {
  std::vector<EdgeTailResult> r;
  for (std::size_t n : {100u, 200u, 400u}) r.push_back(edge_tail(default_lrc(), 2.0, n, 200, 0.1, mix_seed(seed, n)));
  bool ok = true;
  std::ostringstream os;
  auto se = [](const EdgeTailResult& e) {
    const double p = e.probability;
    return std::sqrt(std::max(p * (1 - p), 1.0 / static_cast<double>(e.trials)) / static_cast<double>(e.trials));
  };
  for (std::size_t i = 0; i < r.size(); ++i) {
    os << num(r[i].probability) << (i + 1 < r.size() ? ", " : "");
    if (i > 0) ok = ok && r[i].probability <= r[i - 1].probability + 3.0 * std::hypot(se(r[i]), se(r[i - 1]));
  }
  return outcome(ok, "fractions at N=100,200,400 (epsilon 0.1): " + os.str());
}

CheckOutcome edge_spectrum_bl(std::uint64_t seed) {
  const LrcSetup s;
  const SemicircleLaw target{3.0, 2.0 * std::numbers::sqrt2};
  int close = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const BorderedHessianSample g = sample_g(s.d, s.mu, *s.p.rho_star, *s.p.u_star, 400, mix_seed(seed, t), s.p.y_star);
    if (bl_distance(empirical_measure(g.eigenvalues), target) <= 0.1) ++close;
  }
  return outcome(close >= 90, std::to_string(close) + "/100 draws within BL distance 0.1");
}

CheckOutcome second_moment(std::uint64_t seed) {
  const RatioEstimate a = second_moment_ratio(50, 2.0, 4000, mix_seed(seed, 1));
  const RatioEstimate b = second_moment_ratio(50, 10.0, 4000, mix_seed(seed, 2));
  std::vector<RatioEstimate> tr;
  for (std::size_t n : {25u, 50u, 100u}) tr.push_back(second_moment_ratio(n, 2.5, 4000, mix_seed(seed, 100 + n)));
  bool mono = true;
  for (std::size_t i = 1; i < tr.size(); ++i) mono = mono && tr[i].value <= tr[i - 1].value + 3.0 * std::hypot(tr[i].se, tr[i - 1].se);
  return outcome(a.value <= 0.1 && b.value <= 0.01 && mono,
                 "x=2: " + num(a.value) + ", x=10: " + num(b.value) + ", x=2.5 trend " + num(tr[0].value) + " " +
                     num(tr[1].value) + " " + num(tr[2].value));
}

// --- experiments -----------------------------------------------------------

CheckOutcome zero_field(std::uint64_t seed) {
  const Model m{SrcCorrelator{0.0, {}}};
  const FieldRealization f = sample_field(m, 5, 0, seed);
  const MinimizeResult r = minimize(m, f, 3.0, 3, seed);
  const auto c = census(m, f, 3.0, 20, 1e-5, seed);
  const bool ok = r.point.x.norm() == 0.0 && r.point.value_per_n == 0.0 && std::abs(r.point.lambda_min - 3.0) <= 1e-15 &&
                  r.point.index == 0 && c.size() == 1 && c.front().x.norm() == 0.0;
  return outcome(ok, "|x*| " + num(r.point.x.norm()) + ", census size " + std::to_string(c.size()));
}

CheckOutcome census_monotone(std::uint64_t seed) {
  const Model m{default_src()};
  bool ok = true;
  std::ostringstream os;
  for (std::uint64_t t = 0; t < 5; ++t) {
    const FieldRealization f = sample_field(m, 4, 256, mix_seed(seed, t));
    std::size_t prev = 0;
    for (std::size_t starts : {10u, 20u, 40u, 80u}) {
      const std::size_t n = census(m, f, 1.0, starts, 1e-5, mix_seed(seed, 100 + t)).size();
      ok = ok && n >= prev;
      prev = n;
      os << n << (starts == 80 ? "; " : " ");
    }
  }
  return outcome(ok, "sizes for 10/20/40/80 starts: " + os.str());
}

CheckOutcome census_points_verified(std::uint64_t seed) {
  const Model m{default_src()};
  double worst = 0.0;
  std::size_t total = 0;
  for (std::uint64_t t = 0; t < 5; ++t) {
    const FieldRealization f = sample_field(m, 6, 512, mix_seed(seed, t));
    for (const CriticalPointRecord& c : census(m, f, 1.0, 100, 1e-5, mix_seed(seed, 50 + t))) {
      Eigen::VectorXd g;
      eval_value_gradient(f, 1.0, c.x, g);
      worst = std::max(worst, g.norm() / std::sqrt(6.0));
      ++total;
    }
  }
  return outcome(total > 0 && worst <= 1e-9, std::to_string(total) + " points, max |grad|/sqrt(N) " + num(worst));
}

CheckOutcome supercritical_unique_minimum(std::uint64_t seed) {
  const Model m{default_src()};
  int single = 0, single_min = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const FieldRealization f = sample_field(m, 6, 1024, mix_seed(seed, t));
    const auto c = census(m, f, 3.0, 200, 1e-5, mix_seed(seed, 100 + t));
    if (c.size() == 1) {
      ++single;
      if (c.front().index == 0) ++single_min;
    }
  }
  return outcome(single > 0 && single == single_min,
                 std::to_string(single) + " single-point trials, " + std::to_string(single_min) + " of them minima");
}

CheckOutcome trials_deterministic(std::uint64_t seed) {
  TrialConfig c;
  c.N = 12;
  c.K = 300;
  c.trials = 4;
  c.starts = 2;
  c.census_starts = 10;
  c.seed = seed;
  c.threads = 1;
  std::ostringstream a, b, d;
  write_trials_csv(a, run_trials(c), false);
  write_trials_csv(b, run_trials(c), false);
  c.threads = 3;
  write_trials_csv(d, run_trials(c), false);
  return outcome(a.str() == b.str() && a.str() == d.str(), a.str() == b.str() ? "identical" : "differs");
}

CheckOutcome drift_toward_predictions(std::uint64_t seed) {
  const PredictionReport p = predictions(Model{default_src()}, 3.0);
  struct Row {
    double dev[3];
    double se[3];
  };
  std::vector<Row> rows;
  std::ostringstream os;
  for (std::size_t n : {50u, 100u, 200u}) {
    TrialConfig c;
    c.N = n;
    c.K = 40 * n;
    c.trials = 20;
    c.starts = 2;
    c.seed = mix_seed(seed, n);
    const auto recs = run_trials(c);
    std::vector<double> e, r, l;
    for (const auto& t : recs)
      if (t.status == "ok") {
        e.push_back(t.energy_per_n);
        r.push_back(t.radius_per_sqrt_n);
        l.push_back(t.lambda_min);
      }
    Row row{{std::abs(mean(e) - *p.u_star), std::abs(mean(r) - *p.rho_star), std::abs(mean(l) - p.lambda_edge)},
            {standard_error(e), standard_error(r), standard_error(l)}};
    rows.push_back(row);
    os << "N=" << n << " dev " << num(row.dev[0]) << "/" << num(row.dev[1]) << "/" << num(row.dev[2]) << "; ";
  }
  bool ok = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    for (int k = 0; k < 3; ++k)
      ok = ok && rows[i].dev[k] <= rows[i - 1].dev[k] + 2.0 * std::hypot(rows[i].se[k], rows[i - 1].se[k]);
  return outcome(ok, os.str());
}

// --- config ----------------------------------------------------------------

CheckOutcome config_round_trip(std::uint64_t) {
  RunConfig a;
  RunConfig b;
  b.model = LrcStructure{0.25, {{1.5, 0.7}, {0.1, 3.0}}};
  b.mu = 1.0 / 3.0;
  b.count.n_grid = {7, 9};
  b.output.wall_time = false;
  b.seed = 18446744073709551615ull;
  const bool ok = parse_config(emit_config(a)) == a && parse_config(emit_config(b)) == b;
  return outcome(ok, ok ? "parse(emit(c)) == c" : "round trip differs");
}

CheckOutcome config_errors(std::uint64_t) {
  std::string m1, m2;
  try {
    parse_config("model:\n  kind: src\n  atoms:\n    - {weight: -1, frequency: 1}\n");
  } catch (const ConfigError& e) {
    m1 = e.what();
  }
  try {
    parse_config("mu: 2\nbogus: 1\n");
  } catch (const ConfigError& e) {
    m2 = e.what();
  }
  const bool ok = m1.find("model.atoms[0].weight") != std::string::npos && m1.find(":4:") != std::string::npos &&
                  m2.find("bogus") != std::string::npos && m2.find(":2:") != std::string::npos;
  return outcome(ok, m1 + " | " + m2);
}

}  // namespace

const std::vector<InvariantCheck>& invariant_checks() {
  static const std::vector<InvariantCheck> checks{
      {"structure_functions", "derivatives_match_finite_differences", derivatives_fd},
      {"structure_functions", "assumption3_default_lrc", assumption3_default},
      {"structure_functions", "thresholds", thresholds},
      {"field_sampler", "random_feature_covariance", random_feature_covariance},
      {"field_sampler", "gradient_and_hessian", field_derivatives},
      {"field_sampler", "exact_sampler_covariance", exact_sampler_covariance},
      {"field_sampler", "lrc_pinned_at_origin", pinned_origin},
      {"rmt", "dense_vs_tridiagonal_lambda_max", dense_vs_tridiagonal},
      {"rmt", "exact_density_mass", exact_density_mass},
      {"rmt", "histogram_vs_exact_density", histogram_vs_exact},
      {"rmt", "semicircle_consistency", semicircle_consistency},
      {"rmt", "bl_distance_properties", bl_properties},
      {"rmt", "shifted_determinant_identity", determinant_identity},
      {"complexity", "psi_bounded_by_maximum", psi_bounded_by_max},
      {"complexity", "big_f_closed_form", big_f_closed_form},
      {"complexity", "expected_count_decreasing", count_decreasing},
      {"complexity", "quadrature_matches_mc", quadrature_vs_mc},
      {"complexity", "subcritical_exponents", subcritical_exponents},
      {"complexity", "richardson_exact", richardson_exact},
      {"replica", "symmetric_branch", replica_symmetric_branch},
      {"lrc_hessian", "constants_at_maximizer", constants_at_maximizer},
      {"lrc_hessian", "interlacing", interlacing},
      {"lrc_hessian", "secular_matches_dense", secular_vs_dense},
      {"lrc_hessian", "schur_matches_dense", schur_vs_dense},
      {"lrc_hessian", "xi_variance", xi_variance},
      {"lrc_hessian", "conditional_corner_law", conditional_corner_law},
      {"lrc_hessian", "w_reconstruction", w_reconstruction},
      {"lrc_hessian", "w_structure", w_structure},
      {"lrc_hessian", "w_lambda_max_bound", w_lambda_max_bound},
      {"lrc_hessian", "edge_tail_inversion", edge_tail_inversion},
      {"lrc_hessian", "edge_tail_trend", edge_tail_trend},
      {"lrc_hessian", "spectrum_bl_at_maximizer", edge_spectrum_bl},
      {"lrc_hessian", "second_moment_ratio", second_moment},
      {"experiments", "zero_field", zero_field},
      {"experiments", "census_monotone_in_starts", census_monotone},
      {"experiments", "census_points_verified", census_points_verified},
      {"experiments", "supercritical_unique_minimum", supercritical_unique_minimum},
      {"experiments", "trials_deterministic", trials_deterministic},
      {"experiments", "drift_toward_predictions", drift_toward_predictions},
      {"config", "round_trip", config_round_trip},
      {"config", "error_messages", config_errors},
  };
  return checks;
}

std::vector<CheckResult> run_verify(std::uint64_t seed, const std::string& filter, std::ostream* progress) {
  std::vector<CheckResult> out;
  for (const InvariantCheck& c : invariant_checks()) {
    if (!filter.empty() && c.suite != filter) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r{c.suite, c.name, false, "", 0.0};
    try {
      const CheckOutcome o = c.run(seed);
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (progress)
      *progress << (r.pass ? "PASS " : "FAIL ") << r.suite << "/" << r.name << " (" << num(r.seconds) << " s) "
                << r.detail << std::endl;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace landscape
