#include "landscape/lrc_hessian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "landscape/complexity.hpp"
#include "landscape/errors.hpp"
#include "landscape/rmt.hpp"

namespace landscape {

namespace {

constexpr std::size_t kSecularSwitch = 512;

void require_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be positive and finite");
}

double neg_d2(const LrcStructure& d) { return -eval_lrc(d, 0.0, 2); }

// u - mu rho^2/2 + mu D'(rho^2) rho^2 / D'(0)
double shifted_energy(const LrcStructure& d, double mu, double rho, double u) {
  const double r = rho * rho;
  return u - mu * r / 2.0 + mu * eval_lrc(d, r, 1) * r / eval_lrc(d, 0.0, 1);
}

// Root of z - t - sum xi_j^2 / (d_j - t) in (lo, hi), on which it is decreasing.
double bisect_secular(double z, const std::vector<double>& w2, const std::vector<double>& poles, double lo,
                      double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double h = z - mid;
    for (std::size_t j = 0; j < poles.size(); ++j) h -= w2[j] / (poles[j] - mid);
    if (h > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> secular_eigenvalues(double z, const Eigen::VectorXd& xi, const std::vector<double>& bulk) {
  std::vector<double> out;
  out.reserve(bulk.size() + 1);
  // Deflation: zero border entries and repeated poles leave d_j as an eigenvalue.
  std::vector<double> poles;
  std::vector<double> w2;
  for (std::size_t j = 0; j < bulk.size(); ++j) {
    const double w = xi(static_cast<Eigen::Index>(j)) * xi(static_cast<Eigen::Index>(j));
    if (!poles.empty() && bulk[j] == poles.back()) {
      w2.back() += w;
      out.push_back(bulk[j]);
    } else if (w == 0.0) {
      out.push_back(bulk[j]);
    } else {
      poles.push_back(bulk[j]);
      w2.push_back(w);
    }
  }
  double spread = 1.0;
  for (double w : w2) spread += std::sqrt(w);
  if (poles.empty()) {
    out.push_back(z);
  } else {
    const double lo = std::min(z, poles.front()) - spread;
    const double hi = std::max(z, poles.back()) + spread;
    out.push_back(bisect_secular(z, w2, poles, lo, poles.front()));
    for (std::size_t j = 0; j + 1 < poles.size(); ++j) out.push_back(bisect_secular(z, w2, poles, poles[j], poles[j + 1]));
    out.push_back(bisect_secular(z, w2, poles, poles.back(), hi));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

LrcConditionalConstants constants(const LrcStructure& d, double mu, double rho, double u) {
  require_rho(rho);
  validate(d);
  const AlphaBeta ab = alpha_beta(d, rho);
  const double r = rho * rho;
  const double w = shifted_energy(d, mu, rho, u);
  const double sd = std::sqrt(ab.delta);
  const double k = neg_d2(d);
  LrcConditionalConstants c;
  c.alpha = ab.alpha;
  c.beta = ab.beta;
  c.m1 = mu + w * (ab.alpha * r + ab.beta) / sd;
  c.m2 = mu + w * ab.beta / sd;
  c.sigma1_sq_times_N = 4.0 * k - (ab.alpha * r + ab.beta) * ab.alpha * r;
  c.sigma2_sq_times_N = 2.0 * k - (ab.alpha * r + ab.beta) * ab.beta;
  c.mY = mu * r / 2.0 - mu * eval_lrc(d, r, 1) * r / eval_lrc(d, 0.0, 1);
  c.sigmaY_sq_times_N = ab.delta;
  return c;
}

CornerConditional corner_conditional(const LrcStructure& d, double mu, double rho, double u, double y) {
  require_rho(rho);
  validate(d);
  const AlphaBeta ab = alpha_beta(d, rho);
  const double r = rho * rho;
  const double k2 = 2.0 * neg_d2(d);
  const double kk = k2 - ab.beta * ab.beta;
  if (!(kk > 0.0)) throw DegenerateConditioning("corner_conditional: -2D''(0) - beta^2 must be positive");
  const double w = shifted_energy(d, mu, rho, u);
  CornerConditional c;
  c.a_bar = k2 * ab.alpha * r * w / (kk * std::sqrt(ab.delta)) + ab.alpha * ab.beta * r * mu / kk -
            (kk - ab.alpha * ab.beta * r) * std::sqrt(2.0 * k2) * y / kk;
  c.b_sq = 2.0 * k2 - k2 * ab.alpha * ab.alpha * r * r / kk;
  if (!(c.b_sq > 0.0)) throw DegenerateConditioning("corner_conditional: conditional variance is not positive");
  return c;
}

std::vector<double> arrowhead_eigenvalues(double z, const Eigen::VectorXd& xi, const std::vector<double>& bulk,
                                          ArrowheadMethod method) {
  if (static_cast<std::size_t>(xi.size()) != bulk.size())
    throw std::invalid_argument("arrowhead_eigenvalues: border and bulk sizes differ");
  if (!std::is_sorted(bulk.begin(), bulk.end())) throw std::invalid_argument("arrowhead_eigenvalues: bulk must be sorted");
  const std::size_t n = bulk.size() + 1;
  if (method == ArrowheadMethod::Automatic) method = n < kSecularSwitch ? ArrowheadMethod::Dense : ArrowheadMethod::Secular;
  if (method == ArrowheadMethod::Secular) return secular_eigenvalues(z, xi, bulk);

  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
  g(0, 0) = z;
  for (Eigen::Index j = 1; j < m; ++j) {
    g(j, j) = bulk[static_cast<std::size_t>(j - 1)];
    g(0, j) = xi(j - 1);
    g(j, 0) = xi(j - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

BorderedHessianSample sample_g(const LrcStructure& d, double mu, double rho, double u, std::size_t N,
                               std::uint64_t seed, std::optional<double> y, ArrowheadMethod method) {
  if (N < 3) throw std::invalid_argument("sample_g: N must be at least 3");
  const LrcConditionalConstants c = constants(d, mu, rho, u);
  const double nd = static_cast<double>(N);
  const double k = neg_d2(d);
  const double s4 = std::sqrt(4.0 * k);

  Rng rng = make_rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  BorderedHessianSample s;
  s.N = N;
  if (y) {
    const CornerConditional cc = corner_conditional(d, mu, rho, u, *y);
    s.z3 = *y;
    s.z1 = cc.a_bar + std::sqrt(cc.b_sq / nd) * g(rng);
  } else {
    if (!(c.sigma1_sq_times_N >= 0.0) || !(c.sigma2_sq_times_N >= 0.0))
      throw DegenerateConditioning("sample_g: negative conditional variance");
    const double ab = c.alpha * c.beta;
    if (ab < 0.0) throw DegenerateConditioning("sample_g: alpha * beta must be nonnegative");
    const double z1 = g(rng);
    const double z2 = g(rng);
    const double z3 = g(rng);
    const double s1 = std::sqrt(c.sigma1_sq_times_N / nd);
    const double s2 = std::sqrt(c.sigma2_sq_times_N / nd);
    s.z1 = s1 * z1 - s2 * z2 + c.m1;
    s.z3 = (s2 * z2 + std::sqrt(ab) * rho * z3 / std::sqrt(nd) - c.m2) / s4;
  }
  // xi is isotropic and independent of the GOE block, so its coordinates in
  // the eigenbasis of G** are again i.i.d. N(0, -2D''(0)/N).
  const double sx = std::sqrt(2.0 * k / nd);
  s.xi.resize(static_cast<Eigen::Index>(N - 1));
  for (Eigen::Index j = 0; j < s.xi.size(); ++j) s.xi(j) = sx * g(rng);
  s.goe = goe_eigenvalues(N - 1, rng);
  const double scale = std::sqrt((nd - 1.0) / nd);
  s.bulk.resize(N - 1);
  for (std::size_t j = 0; j + 1 < N; ++j) s.bulk[j] = s4 * (scale * s.goe[j] - s.z3);
  s.eigenvalues = arrowhead_eigenvalues(s.z1, s.xi, s.bulk, method);
  return s;
}

bool interlaces(const BorderedHessianSample& s, double tol) {
  if (s.eigenvalues.size() != s.bulk.size() + 1) return false;
  for (std::size_t j = 0; j < s.bulk.size(); ++j)
    if (s.eigenvalues[j] > s.bulk[j] + tol || s.bulk[j] > s.eigenvalues[j + 1] + tol) return false;
  return true;
}

Eigen::MatrixXd dense_matrix(const BorderedHessianSample& s) {
  const auto m = static_cast<Eigen::Index>(s.bulk.size() + 1);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
  g(0, 0) = s.z1;
  for (Eigen::Index j = 1; j < m; ++j) {
    g(j, j) = s.bulk[static_cast<std::size_t>(j - 1)];
    g(0, j) = s.xi(j - 1);
    g(j, 0) = s.xi(j - 1);
  }
  return g;
}

SchurDeterminant schur_det(const BorderedHessianSample& s) {
  if (static_cast<std::size_t>(s.xi.size()) != s.bulk.size())
    throw std::invalid_argument("schur_det: border and bulk sizes differ");
  SchurDeterminant r;
  double quad = 0.0;
  for (std::size_t j = 0; j < s.bulk.size(); ++j) {
    const double dj = s.bulk[j];
    if (std::abs(dj) <= 1e-12) r.near_singular = true;
    r.log_abs += std::log(std::abs(dj));
    if (dj < 0.0) r.sign = -r.sign;
    const double x = s.xi(static_cast<Eigen::Index>(j));
    quad += x * x / dj;
  }
  const double tail = s.z1 - quad;
  r.log_abs += std::log(std::abs(tail));
  if (tail < 0.0) r.sign = -r.sign;
  if (tail == 0.0) r.sign = 0;
  return r;
}

TridiagonalW sample_tridiag_w(const LrcStructure& d, double mu, double rho, double u, double y, std::size_t N,
                              std::uint64_t seed) {
  if (N < 3) throw std::invalid_argument("tridiag_w: N must be at least 3");
  const CornerConditional cc = corner_conditional(d, mu, rho, u, y);
  const double nd = static_cast<double>(N);
  const double k2 = 2.0 * neg_d2(d);
  Rng rng = make_rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  const double z1t = (cc.a_bar + std::sqrt(cc.b_sq / nd) * g(rng)) / std::sqrt(k2);
  TridiagonalW w;
  const auto n = static_cast<Eigen::Index>(N);
  w.diag.resize(n);
  w.off.resize(n - 1);
  w.diag(0) = -std::sqrt(nd) * (z1t + std::numbers::sqrt2 * y);
  for (Eigen::Index i = 1; i < n; ++i) w.diag(i) = std::numbers::sqrt2 * g(rng);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    std::chi_squared_distribution<double> chi2(static_cast<double>(n - 1 - i));
    w.off(i) = std::sqrt(chi2(rng));
  }
  return w;
}

double tridiag_w_lambda_max(const LrcStructure& d, double mu, double rho, double u, double y, std::size_t N,
                            std::uint64_t seed) {
  const TridiagonalW w = sample_tridiag_w(d, mu, rho, u, y, N, seed);
  return tridiagonal_lambda_max(w.diag, w.off);
}

double lambda_min_from_w(const LrcStructure& d, double lambda_max_w, double y, std::size_t N) {
  const double k = neg_d2(d);
  return -std::sqrt(2.0 * k / static_cast<double>(N)) * lambda_max_w - std::sqrt(4.0 * k) * y;
}

EdgeTailResult edge_tail(const LrcStructure& d, double mu, std::size_t N, std::size_t trials, double epsilon,
                         std::uint64_t seed) {
  if (trials < 50) throw std::invalid_argument("edge_tail: trials must be at least 50");
  const PredictionReport p = predictions(Model{d}, mu);
  if (!p.supercritical) throw UnsupportedRegime("edge_tail: mu must exceed the trivialization threshold");
  EdgeTailResult r;
  r.trials = trials;
  r.threshold = p.lambda_edge - epsilon;
  std::vector<double> mins;
  mins.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const BorderedHessianSample s = sample_g(d, mu, *p.rho_star, *p.u_star, N, mix_seed(seed, t), p.y_star);
    mins.push_back(s.lambda_min());
    if (s.lambda_min() <= r.threshold) ++r.exceedances;
  }
  r.probability = static_cast<double>(r.exceedances) / static_cast<double>(trials);
  r.lambda_min_mean = mean(mins);
  r.lambda_min_se = standard_error(mins);
  return r;
}

RatioEstimate second_moment_ratio(std::size_t N, double x, std::size_t n_samples, std::uint64_t seed) {
  if (N == 0) throw std::invalid_argument("second_moment_ratio: N must be positive");
  if (!(x > std::numbers::sqrt2 + 0.1)) throw std::invalid_argument("second_moment_ratio: x must exceed sqrt(2) + 0.1");
  if (n_samples < 1000) throw std::invalid_argument("second_moment_ratio: n_samples must be at least 1000");
  Rng rng = make_rng(seed);
  std::vector<double> l1(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const std::vector<double> ev = goe_eigenvalues(N, rng, GoeMethod::Tridiagonal);
    double acc = 0.0;
    for (double e : ev) acc += std::log(std::abs(x + e));
    l1[s] = acc;
  }
  const double nd = static_cast<double>(N);
  auto stat = [&](const std::vector<double>& v) {
    std::vector<double> v2(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) v2[i] = 2.0 * v[i];
    return (log_mean_exp(v2) - 2.0 * log_mean_exp(v)) / nd;
  };
  RatioEstimate r;
  r.value = stat(l1);
  // Delete-a-block jackknife.
  const std::size_t blocks = std::min<std::size_t>(n_samples, 100);
  std::vector<double> jack;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * n_samples / blocks;
    const std::size_t hi = (b + 1) * n_samples / blocks;
    std::vector<double> rest;
    rest.reserve(n_samples - (hi - lo));
    for (std::size_t i = 0; i < n_samples; ++i)
      if (i < lo || i >= hi) rest.push_back(l1[i]);
    jack.push_back(stat(rest));
  }
  const double jm = mean(jack);
  double ss = 0.0;
  for (double j : jack) ss += (j - jm) * (j - jm);
  const double g = static_cast<double>(blocks);
  r.se = std::sqrt((g - 1.0) / g * ss);
  return r;
}

}  // namespace landscape
