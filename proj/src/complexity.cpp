#include "landscape/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "landscape/errors.hpp"

namespace landscape {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kLog2 = std::numbers::ln2;
const double kNegInf = -std::numeric_limits<double>::infinity();

struct SrcDerivs {
  double b0, b1, b2;
};

SrcDerivs src_derivs(const SrcCorrelator& b) { return {eval_src(b, 0.0, 0), eval_src(b, 0.0, 1), eval_src(b, 0.0, 2)}; }

void require_positive_mu(double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
}

}  // namespace

double phi(double x) {
  const double a = std::abs(x);
  if (a < kSqrt2) return 0.0;
  const double s = std::sqrt(a * a - 2.0);
  return -a * s / 2.0 + std::log((a + s) / kSqrt2);
}

double psi_star_semicircle(double x) {
  const double a = std::abs(x);
  if (a <= kSqrt2) return x * x / 2.0 - 0.5 - 0.5 * kLog2;
  const double s = std::sqrt(a * a - 2.0);
  // x^2/2 - |x| s/2 rewritten as |x|/(|x| + s) to avoid cancellation.
  return a / (a + s) - 0.5 - kLog2 + std::log(a + s);
}

double big_f(double x, double m) { return -x * x / 2.0 + 2.0 * m * x + phi(x); }

FMaximizer big_f_maximizer(double m) {
  if (!(m < 0.0)) throw std::invalid_argument("big_f_maximizer: m must be negative");
  if (m < -kSqrt2 / 2.0) {
    const double m2 = m * m;
    return {m + 1.0 / (2.0 * m), m2 + std::log(-m) + (1.0 + kLog2) / 2.0, -4.0 * m2 / (2.0 * m2 - 1.0)};
  }
  return {2.0 * m, 2.0 * m * m, -1.0};
}

double psi_src(const ComplexityPoint& p, const SrcCorrelator& b, double mu) {
  require_positive_mu(mu);
  if (!(p.rho > 0.0)) throw std::invalid_argument("psi_src: rho must be positive");
  const auto [b0, b1, b2] = src_derivs(b);
  const double w = p.u - mu * p.rho * p.rho / 2.0;
  const double base = psi_star_semicircle(p.y) - w * w / (2.0 * b0) + mu * mu * p.rho * p.rho / (4.0 * b1) +
                      std::log(p.rho);
  const double shift = p.y + (mu + 2.0 * b1 / b0 * w) / std::sqrt(8.0 * b2);
  const double cond = b0 * b2 - b1 * b1;
  if (cond <= 1e-12 * b0 * b2) return std::abs(shift) <= 1e-9 * (1.0 + std::abs(p.y)) ? base : kNegInf;
  return base - b0 * b2 / cond * shift * shift;
}

MaximizerResult psi_src_maximizer(const SrcCorrelator& b, double mu) {
  require_positive_mu(mu);
  const double thr = trivialization_threshold(b);
  if (!(mu > thr)) {
    std::ostringstream os;
    os << "psi_src_maximizer: mu = " << mu << " is not above the threshold " << thr;
    throw UnsupportedRegime(os.str());
  }
  const auto [b0, b1, b2] = src_derivs(b);
  const double s4 = std::sqrt(4.0 * b2);
  MaximizerResult r;
  r.point.rho = std::sqrt(-2.0 * b1) / mu;
  r.point.u = b1 / mu;
  r.point.y = -(mu / s4 + s4 / mu) / kSqrt2;
  r.value = -std::log(s4) + 0.5 * std::log(-2.0 * b1) - 0.5 - 0.5 * kLog2;
  return r;
}

double psi_lrc(const ComplexityPoint& p, const LrcStructure& d, double mu) {
  require_positive_mu(mu);
  const double r2 = p.rho * p.rho;
  const AlphaBeta ab = alpha_beta(d, p.rho);
  const double dp0 = eval_lrc(d, 0.0, 1);
  const double dpp0 = eval_lrc(d, 0.0, 2);
  const double dpr = eval_lrc(d, r2, 1);
  const double w = p.u - mu * r2 / 2.0 + mu * dpr * r2 / dp0;
  const double k = -2.0 * dpp0 - ab.beta * ab.beta;
  if (!(k > 0.0)) throw DegenerateConditioning("psi_lrc: -2D''(0) - beta^2 is not positive");
  const double m2 = mu + w * (dpr - dp0) / ab.delta;
  const double shift = p.y + m2 / std::sqrt(-4.0 * dpp0);
  return psi_star_semicircle(p.y) - w * w / (2.0 * ab.delta) - mu * mu * r2 / (2.0 * dp0) + std::log(p.rho) -
         (-2.0 * dpp0) / k * shift * shift;
}

MaximizerResult psi_lrc_maximizer(const LrcStructure& d, double mu) {
  require_positive_mu(mu);
  const double thr = trivialization_threshold(d);
  if (!(mu > thr)) {
    std::ostringstream os;
    os << "psi_lrc_maximizer: mu = " << mu << " is not above the threshold " << thr;
    throw UnsupportedRegime(os.str());
  }
  const double dp0 = eval_lrc(d, 0.0, 1);
  const double dpp0 = eval_lrc(d, 0.0, 2);
  MaximizerResult r;
  r.point.rho = std::sqrt(dp0) / mu;
  const double r2 = r.point.rho * r.point.rho;
  const double dpr = eval_lrc(d, r2, 1);
  r.point.u = (dpr - dp0) / mu + mu * r2 / 2.0 - mu * dpr * r2 / dp0;
  r.point.y = -mu / std::sqrt(-4.0 * dpp0) - std::sqrt(-dpp0) / mu;
  r.value = -std::log(std::sqrt(-4.0 * dpp0)) - 0.5 + 0.5 * std::log(dp0);
  return r;
}

PredictionReport predictions(const Model& model, double mu) {
  require_positive_mu(mu);
  validate(model);
  PredictionReport p;
  p.mu = mu;
  p.threshold = trivialization_threshold(model);
  p.supercritical = mu > p.threshold;
  // kappa = 4B''(0) for SRC, -2D''(0) for LRC.
  double kappa = 0.0;
  if (const auto* b = std::get_if<SrcCorrelator>(&model)) {
    kappa = 4.0 * eval_src(*b, 0.0, 2);
    if (p.supercritical) {
      const MaximizerResult r = psi_src_maximizer(*b, mu);
      p.rho_star = r.point.rho;
      p.u_star = r.point.u;
      p.y_star = r.point.y;
      p.psi_max = r.value;
    }
  } else {
    const auto& d = std::get<LrcStructure>(model);
    p.lrc = true;
    kappa = -2.0 * eval_lrc(d, 0.0, 2);
    if (p.supercritical) {
      const MaximizerResult r = psi_lrc_maximizer(d, mu);
      p.rho_star = r.point.rho;
      p.u_star = r.point.u;
      p.y_star = r.point.y;
      p.psi_max = r.value;
    }
  }
  if (!(kappa > 0.0)) throw std::invalid_argument("predictions: model has no atoms (zero curvature at 0)");
  p.center = mu + kappa / mu;
  p.radius = 2.0 * std::sqrt(kappa);
  p.lambda_edge = p.center - p.radius;
  p.m = -mu / std::sqrt(2.0 * kappa);
  if (!p.supercritical) p.exponent_subcritical = -std::log(mu / p.threshold) + mu * mu / (2.0 * kappa) - 0.5;
  return p;
}

KacRiceScales kac_rice_scales(const Model& model, double mu) {
  require_positive_mu(mu);
  double kappa = 0.0;
  if (const auto* b = std::get_if<SrcCorrelator>(&model))
    kappa = 4.0 * eval_src(*b, 0.0, 2);
  else
    kappa = -2.0 * eval_lrc(std::get<LrcStructure>(model), 0.0, 2);
  if (!(kappa > 0.0)) throw std::invalid_argument("kac_rice_scales: model has no atoms");
  KacRiceScales s;
  s.a = std::sqrt(2.0 * kappa);
  s.sigma = std::sqrt(kappa);
  s.m = -mu / s.a;
  return s;
}

LogMeanEstimate expected_crt_mc(const Model& model, double mu, std::size_t N, std::size_t n_samples,
                                std::uint64_t seed) {
  if (n_samples < 100) throw std::invalid_argument("expected_crt_mc: n_samples must be at least 100");
  if (N == 0) throw std::invalid_argument("expected_crt_mc: N must be positive");
  validate(model);
  const KacRiceScales sc = kac_rice_scales(model, mu);
  Rng rng = make_rng(seed);
  std::vector<std::vector<double>> spectra(n_samples);
  for (auto& s : spectra) s = goe_eigenvalues(N, rng, GoeMethod::Tridiagonal);

  const double nd = static_cast<double>(N);
  const double sqn = std::sqrt(nd);
  auto shift = [&](double z) { return (sc.sigma * z / sqn + mu) / sc.a; };
  auto log_det = [](const std::vector<double>& ev, double t) {
    double s = 0.0;
    for (double l : ev) s += std::log(std::abs(l + t));
    return s;
  };
  const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi);

  // Pilot scan on a subset to locate the region carrying the Z integral.
  const std::size_t n_pilot = std::min<std::size_t>(n_samples, 200);
  const double zmax = std::max(10.0, 1.5 * sqn * (mu + 4.0 * sc.a) / sc.sigma);
  const double coarse = 0.25;
  const auto n_coarse = static_cast<std::size_t>(std::ceil(2.0 * zmax / coarse)) + 1;
  std::vector<double> ell(n_coarse);
  std::vector<double> buf(n_pilot);
  for (std::size_t k = 0; k < n_coarse; ++k) {
    const double z = -zmax + coarse * static_cast<double>(k);
    const double t = shift(z);
    for (std::size_t i = 0; i < n_pilot; ++i) buf[i] = log_det(spectra[i], t);
    ell[k] = -0.5 * z * z + log_mean_exp(buf);
  }
  const std::size_t kpk = static_cast<std::size_t>(std::max_element(ell.begin(), ell.end()) - ell.begin());
  std::size_t klo = kpk;
  std::size_t khi = kpk;
  while (klo > 0 && ell[klo] > ell[kpk] - 45.0) --klo;
  while (khi + 1 < n_coarse && ell[khi] > ell[kpk] - 45.0) ++khi;
  const double zl = -zmax + coarse * static_cast<double>(klo) - coarse;
  const double zr = -zmax + coarse * static_cast<double>(khi) + coarse;

  const std::size_t nz = 241;
  const double dz = (zr - zl) / static_cast<double>(nz - 1);
  std::vector<double> logw(nz);
  Eigen::MatrixXd L(static_cast<Eigen::Index>(n_samples), static_cast<Eigen::Index>(nz));
  for (std::size_t k = 0; k < nz; ++k) {
    const double z = zl + dz * static_cast<double>(k);
    const double trap = (k == 0 || k + 1 == nz) ? 0.5 : 1.0;
    logw[k] = std::log(trap * dz) + log_norm - 0.5 * z * z;
    const double t = shift(z);
    for (std::size_t i = 0; i < n_samples; ++i)
      L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = log_det(spectra[i], t);
  }

  const std::size_t nb = std::min<std::size_t>(n_samples, 100);
  std::vector<double> colmax(nz);
  Eigen::MatrixXd block_sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nz));
  std::vector<double> block_n(nb, 0.0);
  for (std::size_t i = 0; i < n_samples; ++i) block_n[i * nb / n_samples] += 1.0;
  for (std::size_t k = 0; k < nz; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    colmax[k] = L.col(kk).maxCoeff();
    if (colmax[k] == kNegInf) continue;
    for (std::size_t i = 0; i < n_samples; ++i)
      block_sums(static_cast<Eigen::Index>(i * nb / n_samples), kk) +=
          std::exp(L(static_cast<Eigen::Index>(i), kk) - colmax[k]);
  }
  const Eigen::VectorXd total = block_sums.colwise().sum().transpose();
  auto estimate = [&](std::ptrdiff_t drop) {
    double count = static_cast<double>(n_samples);
    if (drop >= 0) count -= block_n[static_cast<std::size_t>(drop)];
    std::vector<double> terms;
    terms.reserve(nz);
    for (std::size_t k = 0; k < nz; ++k) {
      if (colmax[k] == kNegInf) continue;
      double s = total(static_cast<Eigen::Index>(k));
      if (drop >= 0) s -= block_sums(drop, static_cast<Eigen::Index>(k));
      if (s <= 0.0) continue;
      terms.push_back(logw[k] + colmax[k] + std::log(s / count));
    }
    return nd * std::log(sc.a / mu) + log_sum_exp(terms);
  };
  LogMeanEstimate out;
  out.log_mean = estimate(-1);
  std::vector<double> loo(nb);
  for (std::size_t b = 0; b < nb; ++b) loo[b] = estimate(static_cast<std::ptrdiff_t>(b));
  const double lbar = mean(loo);
  double ss = 0.0;
  for (double x : loo) ss += (x - lbar) * (x - lbar);
  const double nbd = static_cast<double>(nb);
  out.se = std::sqrt((nbd - 1.0) / nbd * ss);
  return out;
}

QuadratureResult expected_crt_quadrature(const Model& model, double mu, std::size_t N,
                                         const DensityEstimate& rho_np1) {
  if (N == 0) throw std::invalid_argument("expected_crt_quadrature: N must be positive");
  const auto& g = rho_np1.grid;
  if (g.size() < 3 || g.front() > -4.0 || g.back() < 4.0)
    throw GridCoverageError("expected_crt_quadrature: density grid must cover [-4, 4]");
  const KacRiceScales sc = kac_rice_scales(model, mu);
  const double nd = static_cast<double>(N);
  const double lin = 2.0 * std::sqrt(nd * (nd + 1.0)) * sc.m;
  std::vector<double> e(g.size(), kNegInf);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (rho_np1.log_values[j] == kNegInf) continue;
    e[j] = -(nd + 1.0) * g[j] * g[j] / 2.0 + lin * g[j] + rho_np1.log_values[j];
  }
  const std::size_t jpk = static_cast<std::size_t>(std::max_element(e.begin(), e.end()) - e.begin());
  if (e[jpk] == kNegInf) throw GridCoverageError("expected_crt_quadrature: density is zero on the whole grid");
  if (jpk == 0 || jpk + 1 == g.size())
    throw GridCoverageError("expected_crt_quadrature: integrand peaks at the grid boundary; widen the grid");
  std::vector<double> terms;
  terms.reserve(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (e[j] == kNegInf) continue;
    const double left = j > 0 ? g[j] - g[j - 1] : 0.0;
    const double right = j + 1 < g.size() ? g[j + 1] - g[j] : 0.0;
    terms.push_back(e[j] + std::log(0.5 * (left + right)));
  }
  const double log_pref = 0.5 * std::log(2.0) + std::lgamma((nd + 1.0) / 2.0) + std::log(nd + 1.0) -
                          0.5 * std::log(std::numbers::pi) - nd * std::log(-sc.m) - 0.5 * nd * std::log(nd) -
                          nd * sc.m * sc.m;
  QuadratureResult r;
  r.log_value = log_pref + log_sum_exp(terms);
  r.log_boundary_ratio = std::max(e.front(), e.back()) - e[jpk];
  return r;
}

double richardson(double f1, std::size_t n1, double f2, std::size_t n2) {
  if (n1 == n2) throw std::invalid_argument("richardson: sizes must differ");
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  return (b * f2 - a * f1) / (b - a);
}

}  // namespace landscape
