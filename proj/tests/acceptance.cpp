// Desk-scale acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion ...]   (default: all twelve)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "landscape/complexity.hpp"
#include "landscape/experiments.hpp"
#include "landscape/lrc_hessian.hpp"
#include "landscape/verify.hpp"
#include "oracles.hpp"

using namespace landscape;

namespace {

constexpr std::uint64_t kSeed = 20240607;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string num(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

Verdict within_runtime(Verdict v, double seconds, double limit) {
  if (seconds > limit) {
    v.pass = false;
    v.detail += "; runtime " + num(seconds, 4) + " s exceeds " + num(limit, 4) + " s";
  }
  return v;
}

// 1. Expected count near one above the threshold, decreasing in N.
Verdict trivialization_count() {
  const Model m{default_src()};
  std::vector<double> vals;
  std::ostringstream os;
  for (std::size_t n : {25u, 50u, 100u}) {
    const LogMeanEstimate e = expected_crt_mc(m, 3.0, n, 10000, mix_seed(kSeed, n));
    vals.push_back(std::exp(e.log_mean));
    os << "E(" << n << ")=" << num(vals.back()) << " ";
  }
  const bool ok = vals[1] >= 0.9 && vals[1] <= 1.4 && vals[0] > vals[1] && vals[1] > vals[2];
  return {ok, os.str()};
}

// 2. Richardson-extrapolated growth rate below the threshold.
Verdict subcritical_exponent() {
  const std::vector<double> grid = uniform_grid(-8.0, 8.0, 0.001);
  std::ostringstream os;
  bool ok = true;
  for (const Model& m : {Model{default_src()}, Model{default_lrc()}}) {
    const double target = *predictions(m, 1.0).exponent_subcritical;
    double f[2];
    const std::size_t ns[2] = {50, 100};
    for (int i = 0; i < 2; ++i)
      f[i] = expected_crt_quadrature(m, 1.0, ns[i], goe_density_exact(ns[i] + 1, grid)).log_value /
             static_cast<double>(ns[i]);
    const double ext = richardson(f[0], ns[0], f[1], ns[1]);
    ok = ok && std::abs(ext - target) <= 0.05;
    os << model_id(m) << ": f50=" << num(f[0]) << " f100=" << num(f[1]) << " extrapolated=" << num(ext)
       << " target=" << num(target) << "; ";
  }
  return {ok, os.str()};
}

// 3. Shifted determinant: Monte Carlo against the one-point density formula.
Verdict determinant_identity() {
  std::ostringstream os;
  bool ok = true;
  const std::vector<double> grid = uniform_grid(-8.0, 8.0, 0.0005);
  for (auto [n, x] : {std::pair<std::size_t, double>{20, 3.0}, {50, 2.0}, {20, -3.0}}) {
    const LogMeanEstimate mc = expected_abs_det_shifted_mc(n, x, 20000, mix_seed(kSeed, n * 10 + (x > 0)));
    const double rhs = expected_abs_det_shifted_formula(n, x, goe_density_exact(n + 1, grid));
    const double tol = std::max(0.05, 3.0 * mc.se);
    ok = ok && std::abs(mc.log_mean - rhs) <= tol;
    os << "(" << n << "," << x << "): mc=" << num(mc.log_mean) << "+-" << num(mc.se, 2) << " formula=" << num(rhs)
       << "; ";
  }
  return {ok, os.str()};
}

// 4. Minimizer observables over independent fields.
Verdict trial_observables() {
  TrialConfig cfg;
  cfg.model = default_src();
  cfg.mu = 3.0;
  cfg.N = 200;
  cfg.K = 8192;
  cfg.trials = 50;
  cfg.starts = 3;
  cfg.seed = kSeed;
  cfg.threads = 0;
  const auto recs = run_trials(cfg);
  const TrialSummary s = aggregate(recs, predictions(cfg.model, cfg.mu));
  bool ok = s.trials_failed == 0;
  std::ostringstream os;
  os << s.trials_ok << " ok, " << s.trials_failed << " failed; ";
  for (const ObservableSummary& o : s.observables) {
    ok = ok && o.pass.value_or(false);
    os << o.name << "=" << num(o.mean) << "+-" << num(o.se, 2);
    if (o.prediction) os << " (pred " << num(*o.prediction) << ")";
    os << "; ";
  }
  return {ok, os.str()};
}

// 5. Edge of the conditional LRC Hessian at the maximizer.
Verdict conditional_edge() {
  const LrcStructure d = default_lrc();
  const double mu = 2.0;
  const PredictionReport p = predictions(d, mu);
  const std::size_t n = 400, draws = 200;
  const SemicircleLaw law{p.center, p.radius};
  std::vector<double> lmin;
  std::size_t bl_ok = 0;
  for (std::uint64_t t = 0; t < draws; ++t) {
    const BorderedHessianSample g = sample_g(d, mu, *p.rho_star, *p.u_star, n, mix_seed(kSeed, t), *p.y_star);
    lmin.push_back(g.lambda_min());
    if (bl_distance(empirical_measure(g.eigenvalues), law) <= 0.1) ++bl_ok;
  }
  const EdgeTailResult tail = edge_tail(d, mu, n, draws, 0.2, mix_seed(kSeed, 7777));
  const double m = mean(lmin);
  const bool ok = std::abs(m - p.lambda_edge) <= 0.1 && tail.exceedances == 0 && bl_ok * 10 >= draws * 9;
  return {ok, "mean lambda_min=" + num(m) + "+-" + num(standard_error(lmin), 2) + " (edge " + num(p.lambda_edge) +
                  "); exceedances " + std::to_string(tail.exceedances) + "/" + std::to_string(tail.trials) +
                  "; BL<=0.1 in " + std::to_string(bl_ok) + "/" + std::to_string(draws)};
}

// 6. Closed-form maximizers against direct numerical maximization.
Verdict maximizer_closed_forms() {
  std::ostringstream os;
  bool ok = true;
  {
    // B = e^{-r} has B(0)B''(0) = B'(0)^2, so y is fixed by (rho, u).
    const SrcCorrelator b = default_src();
    const double mu = 3.0;
    auto y_of = [&](double rho, double u) {
      const double w = u - mu * rho * rho / 2.0;
      return -(mu + 2.0 * eval_src(b, 0, 1) / eval_src(b, 0) * w) / std::sqrt(8.0 * eval_src(b, 0, 2));
    };
    const auto o = oracle::nelder_mead_max<2>(
        [&](const std::array<double, 2>& q) {
          return q[0] > 0.0 ? psi_src({q[0], q[1], y_of(q[0], q[1])}, b, mu) : -1e300;
        },
        {0.8, 0.2}, 0.2);
    const MaximizerResult r = psi_src_maximizer(b, mu);
    const double expect = -std::numbers::ln2 - 0.5;
    const double err = std::max({std::abs(o.x[0] - r.point.rho), std::abs(o.x[1] - r.point.u),
                                 std::abs(y_of(o.x[0], o.x[1]) - r.point.y)});
    ok = ok && err <= 1e-6 && std::abs(o.value - expect) <= 1e-8 && std::abs(r.value - expect) <= 1e-8;
    os << "SRC argmax err " << num(err, 3) << ", value " << num(o.value, 12) << "; ";
  }
  {
    const LrcStructure d = default_lrc();
    const double mu = 2.0;
    const auto o = oracle::nelder_mead_max<3>(
        [&](const std::array<double, 3>& q) { return q[0] > 0.0 ? psi_lrc({q[0], q[1], q[2]}, d, mu) : -1e300; },
        {1.0, 0.0, -1.0}, 0.2);
    const MaximizerResult r = psi_lrc_maximizer(d, mu);
    const double expect = -std::numbers::ln2 - 0.5 + 0.5 * std::log(1.5);
    const double err = std::max(
        {std::abs(o.x[0] - r.point.rho), std::abs(o.x[1] - r.point.u), std::abs(o.x[2] - r.point.y)});
    ok = ok && err <= 1e-6 && std::abs(o.value - expect) <= 1e-8 && std::abs(r.value - expect) <= 1e-8;
    os << "LRC argmax err " << num(err, 3) << ", value " << num(o.value, 12);
  }
  return {ok, os.str()};
}

// 7. Census sizes above and below the threshold.
Verdict census_triviality() {
  const Model m{default_src()};
  const std::size_t n = 6, trials = 100, starts = 500, k = 1024;
  std::size_t single = 0;
  double total_sub = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const FieldRealization f = sample_field(m, n, k, mix_seed(kSeed, t));
    if (census(m, f, 3.0, starts, 1e-5, mix_seed(kSeed, 1000 + t)).size() == 1) ++single;
    total_sub += static_cast<double>(census(m, f, 1.0, starts, 1e-5, mix_seed(kSeed, 2000 + t)).size());
  }
  const double mean_sub = total_sub / trials;
  const double expected = std::exp(expected_crt_mc(m, 1.0, n, 100000, mix_seed(kSeed, 3)).log_mean);
  const bool ok = single * 10 >= trials * 9 && std::abs(mean_sub - expected) <= 0.3 * expected;
  return {ok, "size 1 at mu=3 in " + std::to_string(single) + "/" + std::to_string(trials) +
                  "; mean size at mu=1 " + num(mean_sub) + " vs E Crt " + num(expected)};
}

// 8. Conditional corner law.
Verdict corner_law() {
  const LrcStructure d = default_lrc();
  const double mu = 2.0;
  const PredictionReport p = predictions(d, mu);
  const double rho = *p.rho_star, u = *p.u_star, y = *p.y_star;
  const double a = corner_conditional(d, mu, rho, u, y).a_bar;
  const double target = -std::sqrt(-4.0 * eval_lrc(d, 0.0, 2)) * y;
  bool ok = std::abs(a - target) <= 1e-12;
  std::ostringstream os;
  os << "a_bar=" << num(a, 15) << " target=" << num(target, 15) << "; ";
  const std::size_t n = 4;
  std::vector<std::pair<double, double>> draws;
  for (std::uint64_t t = 0; t < 200000; ++t) {
    const BorderedHessianSample g = sample_g(d, mu, rho, u, n, mix_seed(kSeed, t));
    draws.emplace_back(g.z3, g.z1);
  }
  for (double c : {y - 0.2, y, y + 0.2}) {
    std::vector<double> z1;
    for (const auto& [z3, v] : draws)
      if (std::abs(z3 - c) <= 0.01) z1.push_back(v);
    // Bin-average of the conditional mean over the empirical z3 values.
    double pred = 0.0;
    for (const auto& [z3, v] : draws)
      if (std::abs(z3 - c) <= 0.01) pred += corner_conditional(d, mu, rho, u, z3).a_bar;
    pred /= static_cast<double>(z1.size());
    const double z = (mean(z1) - pred) / standard_error(z1);
    ok = ok && z1.size() > 30 && std::abs(z) <= 3.0;
    os << "bin " << num(c, 4) << ": n=" << z1.size() << " z=" << num(z, 3) << "; ";
  }
  return {ok, os.str()};
}

// 9. Replica-symmetric branch.
Verdict replica_consistency() {
  const std::vector<std::pair<SrcCorrelator, double>> cases{
      {default_src(), 3.0}, {{0.5, {{1.0, 1.0}, {0.5, 2.0}}}, 8.0}, {{0.0, {{2.0, 0.5}}}, 1.5}};
  double res = 0.0, edge = 0.0;
  for (const auto& [b, mu] : cases) {
    const ReplicaReport r = replica_solve(b, mu, 4.0);
    res = std::max({res, std::abs(r.symmetric.residual_1), std::abs(r.symmetric.residual_2)});
    edge = std::max(edge, std::abs(r.symmetric.edge - predictions(Model{b}, mu).lambda_edge));
  }
  return {res <= 1e-10 && edge <= 1e-12, "max residual " + num(res, 3) + ", max edge mismatch " + num(edge, 3)};
}

// 10. Schur determinant against a dense LU determinant of a rotated copy.
Verdict schur_oracle() {
  const LrcStructure d = default_lrc();
  const PredictionReport p = predictions(d, 2.0);
  double worst = 0.0;
  std::size_t sign_errors = 0;
  for (std::size_t n : {8u, 32u, 64u})
    for (std::uint64_t t = 0; t < 100; ++t) {
      const BorderedHessianSample s = sample_g(d, 2.0, *p.rho_star, *p.u_star, n, mix_seed(kSeed, n * 1000 + t));
      Rng rng = make_rng(kSeed, n * 1000 + t);
      std::normal_distribution<double> g(0.0, 1.0);
      Eigen::MatrixXd a(n, n);
      for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
      const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
      const Eigen::MatrixXd rotated = q * dense_matrix(s) * q.transpose();
      const double det = rotated.partialPivLu().determinant();
      const SchurDeterminant sd = schur_det(s);
      worst = std::max(worst, std::abs(sd.log_abs - std::log(std::abs(det))));
      if (sd.sign != (det > 0.0 ? 1 : -1)) ++sign_errors;
    }
  return {worst <= 1e-8 && sign_errors == 0,
          "max log difference " + num(worst, 3) + ", sign mismatches " + std::to_string(sign_errors)};
}

// 11. Second-moment exponent.
Verdict second_moment() {
  std::vector<RatioEstimate> r;
  std::ostringstream os;
  const std::vector<std::size_t> ns{25, 50, 100};
  for (std::size_t n : ns) {
    r.push_back(second_moment_ratio(n, 2.0, 20000, mix_seed(kSeed, n)));
    os << "N=" << n << ": " << num(r.back().value, 4) << "+-" << num(r.back().se, 2) << " ";
  }
  bool ok = r[1].value <= 0.1;
  // Monte Carlo estimates: a rise counts only beyond two combined standard errors.
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    ok = ok && r[i + 1].value <= r[i].value + 2.0 * std::hypot(r[i].se, r[i + 1].se);
  return {ok, os.str()};
}

// 12. Invariant suite.
Verdict verify_suite() {
  const auto results = run_verify(kSeed, "", &std::cerr);
  std::size_t failed = 0;
  std::string names;
  for (const CheckResult& c : results)
    if (!c.pass) {
      ++failed;
      names += " " + c.suite + "/" + c.name;
    }
  return {failed == 0, std::to_string(results.size() - failed) + "/" + std::to_string(results.size()) + " passed" +
                           (failed ? ";" + names : "")};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "trivialization count", 120, trivialization_count},
      {2, "subcritical exponent", 300, subcritical_exponent},
      {3, "shifted determinant identity", 180, determinant_identity},
      {4, "minimizer observables", 1200, trial_observables},
      {5, "conditional Hessian edge", 600, conditional_edge},
      {6, "maximizer closed forms", 1e9, maximizer_closed_forms},
      {7, "census triviality", 1e9, census_triviality},
      {8, "conditional corner law", 1e9, corner_law},
      {9, "replica consistency", 1e9, replica_consistency},
      {10, "determinant oracle", 1e9, schur_oracle},
      {11, "second-moment bound", 1e9, second_moment},
      {12, "invariant suite", 1800, verify_suite},
  };
  std::set<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const Criterion& c : all) {
    if (!chosen.empty() && !chosen.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v = within_runtime(v, s, c.limit_seconds);
    if (!v.pass) ++failures;
    std::printf("criterion %2d %s: %s (%.1f s) %s\n", c.id, c.name, v.pass ? "PASS" : "FAIL", s, v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
