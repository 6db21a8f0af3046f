#include "landscape/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace landscape {

namespace {

constexpr std::size_t kTridiagonalFrom = 257;

double interp(double x0, double x1, double y0, double y1, double x) {
  if (x1 == x0) return y0;
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

}  // namespace

double SpectrumSample::lambda_star() const {
  return std::max(std::abs(eigenvalues.front()), std::abs(eigenvalues.back()));
}

double SemicircleLaw::density(double x) const {
  const double d = x - center;
  if (std::abs(d) >= radius) return 0.0;
  return 2.0 / (std::numbers::pi * radius * radius) * std::sqrt(radius * radius - d * d);
}

double SemicircleLaw::cdf(double x) const {
  const double t = (x - center) / radius;
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return 0.5 + (t * std::sqrt(1.0 - t * t) + std::asin(t)) / std::numbers::pi;
}

DiscreteMeasure empirical_measure(const std::vector<double>& points) {
  if (points.empty()) throw std::invalid_argument("empirical_measure: empty support");
  DiscreteMeasure m;
  m.atoms = points;
  m.weights.assign(points.size(), 1.0 / static_cast<double>(points.size()));
  return m;
}

DiscreteMeasure empirical_measure(const SpectrumSample& s) { return empirical_measure(s.eigenvalues); }

double DensityEstimate::trapezoid_mass() const {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) s += 0.5 * (values[i] + values[i + 1]) * (grid[i + 1] - grid[i]);
  return s;
}

double DensityEstimate::log_at(double x) const {
  if (grid.empty() || x < grid.front() || x > grid.back())
    throw std::out_of_range("density estimate queried outside its grid");
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t j = it == grid.end() ? grid.size() - 1 : static_cast<std::size_t>(it - grid.begin());
  if (j == 0) j = 1;
  const std::size_t i = j - 1;
  const double ninf = -std::numeric_limits<double>::infinity();
  if (log_values[i] == ninf || log_values[j] == ninf) {
    const double v = interp(grid[i], grid[j], values[i], values[j], x);
    return v > 0.0 ? std::log(v) : ninf;
  }
  return interp(grid[i], grid[j], log_values[i], log_values[j], x);
}

double DensityEstimate::at(double x) const { return std::exp(log_at(x)); }

Eigen::MatrixXd sample_goe_matrix(std::size_t N, Rng& rng) {
  const Eigen::Index n = static_cast<Eigen::Index>(N);
  std::normal_distribution<double> g(0.0, 1.0);
  const double off = 1.0 / std::sqrt(2.0 * static_cast<double>(N));
  const double dia = 1.0 / std::sqrt(static_cast<double>(N));
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    m(j, j) = dia * g(rng);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      m(i, j) = off * g(rng);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

std::vector<double> tridiagonal_eigenvalues(const Eigen::VectorXd& diag, const Eigen::VectorXd& off) {
  if (diag.size() == 1) return {diag(0)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("tridiagonal eigensolver failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

double tridiagonal_lambda_max(const Eigen::VectorXd& diag, const Eigen::VectorXd& off) {
  return tridiagonal_eigenvalues(diag, off).back();
}

std::vector<double> goe_eigenvalues(std::size_t N, Rng& rng, GoeMethod method) {
  if (N == 0) throw std::invalid_argument("GOE dimension must be positive");
  if (method == GoeMethod::Automatic) method = N >= kTridiagonalFrom ? GoeMethod::Tridiagonal : GoeMethod::Dense;
  if (method == GoeMethod::Dense) {
    const Eigen::MatrixXd m = sample_goe_matrix(N, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
  }
  const Eigen::Index n = static_cast<Eigen::Index>(N);
  const double nd = static_cast<double>(N);
  std::normal_distribution<double> g(0.0, 1.0 / std::sqrt(nd));
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = g(rng);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    std::chi_squared_distribution<double> chi2(static_cast<double>(n - 1 - i));
    off(i) = std::sqrt(chi2(rng) / (2.0 * nd));
  }
  return tridiagonal_eigenvalues(diag, off);
}

SpectrumSample sample_goe(std::size_t N, std::uint64_t seed, GoeMethod method) {
  Rng rng = make_rng(seed);
  return {goe_eigenvalues(N, rng, method), N};
}

std::vector<double> uniform_edges(double lo, double hi, double width) {
  if (!(hi > lo) || !(width > 0.0)) throw std::invalid_argument("uniform_edges: need hi > lo and width > 0");
  const auto nb = static_cast<std::size_t>(std::llround((hi - lo) / width));
  std::vector<double> e(nb + 1);
  for (std::size_t i = 0; i <= nb; ++i) e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(nb);
  return e;
}

std::vector<double> uniform_grid(double lo, double hi, double step) { return uniform_edges(lo, hi, step); }

DensityEstimate rho_n_estimate(std::size_t N, std::size_t n_samples, const std::vector<double>& edges,
                               std::uint64_t seed) {
  if (n_samples < 100) throw std::invalid_argument("rho_n_estimate: n_samples must be at least 100");
  if (edges.size() < 2) throw std::invalid_argument("rho_n_estimate: need at least one bin");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (!(edges[i + 1] > edges[i])) throw std::invalid_argument("rho_n_estimate: bin edges must increase");
  Rng rng = make_rng(seed);
  const std::size_t nb = edges.size() - 1;
  std::vector<double> counts(nb, 0.0);
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (double l : goe_eigenvalues(N, rng, GoeMethod::Tridiagonal)) {
      if (l < edges.front() || l >= edges.back()) continue;
      const auto it = std::upper_bound(edges.begin(), edges.end(), l);
      counts[static_cast<std::size_t>(it - edges.begin()) - 1] += 1.0;
    }
  }
  DensityEstimate d;
  d.samples = n_samples;
  const double total = static_cast<double>(n_samples) * static_cast<double>(N);
  d.grid.resize(nb);
  d.values.resize(nb);
  d.log_values.resize(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    d.grid[i] = 0.5 * (edges[i] + edges[i + 1]);
    d.values[i] = counts[i] / (total * (edges[i + 1] - edges[i]));
    d.log_values[i] = d.values[i] > 0.0 ? std::log(d.values[i]) : -std::numeric_limits<double>::infinity();
  }
  return d;
}

double goe_log_density(std::size_t N, double x) {
  if (N == 0) throw std::invalid_argument("goe_log_density: N must be positive");
  // Unit-weight scale: eigenvalue density of the ensemble with weight exp(-t^2/2),
  // written with orthonormal Hermite functions phi_k and I_k(t) = int_{-inf}^t phi_k.
  using ld = long double;
  const std::size_t n = N;
  const ld t = -std::abs(static_cast<ld>(x) * std::sqrt(static_cast<ld>(n)));
  const ld pi = std::numbers::pi_v<long double>;
  std::vector<ld> phi(n + 1);
  phi[0] = std::pow(pi, -0.25L) * std::exp(-t * t / 2.0L);
  phi[1] = std::sqrt(2.0L) * t * phi[0];
  for (std::size_t k = 1; k < n; ++k)
    phi[k + 1] = std::sqrt(2.0L / static_cast<ld>(k + 1)) * t * phi[k] -
                 std::sqrt(static_cast<ld>(k) / static_cast<ld>(k + 1)) * phi[k - 1];
  std::vector<ld> in(n + 1);
  std::vector<ld> inf(n + 1, 0.0L);
  in[0] = std::pow(pi, -0.25L) * std::sqrt(2.0L * pi) * 0.5L * std::erfc(-t / std::sqrt(2.0L));
  in[1] = -std::sqrt(2.0L) * phi[0];
  inf[0] = std::pow(pi, -0.25L) * std::sqrt(2.0L * pi);
  for (std::size_t k = 1; k < n; ++k) {
    const ld a = std::sqrt(static_cast<ld>(k) / static_cast<ld>(k + 1));
    in[k + 1] = a * in[k - 1] - std::sqrt(2.0L / static_cast<ld>(k + 1)) * phi[k];
    inf[k + 1] = a * inf[k - 1];
  }
  ld r = 0.0L;
  for (std::size_t k = 0; k < n; ++k) r += phi[k] * phi[k];
  r += std::sqrt(static_cast<ld>(n) / 2.0L) * phi[n - 1] * (in[n] - 0.5L * inf[n]);
  if (n % 2 == 1) r += phi[n - 1] / inf[n - 1];
  if (!(r > 0.0L)) return -std::numeric_limits<double>::infinity();
  // Rescale to unit mass and to E M_ii^2 = 1/N.
  return static_cast<double>(std::log(r) - 0.5L * std::log(static_cast<ld>(n)));
}

DensityEstimate goe_density_exact(std::size_t N, const std::vector<double>& grid) {
  DensityEstimate d;
  d.grid = grid;
  d.values.resize(grid.size());
  d.log_values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    d.log_values[i] = goe_log_density(N, grid[i]);
    d.values[i] = std::exp(d.log_values[i]);
  }
  return d;
}

LogMeanEstimate expected_abs_det_shifted_mc(std::size_t N, double x, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 100) throw std::invalid_argument("expected_abs_det_shifted_mc: n_samples must be at least 100");
  Rng rng = make_rng(seed);
  std::vector<double> lv(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    double acc = 0.0;
    for (double l : goe_eigenvalues(N, rng, GoeMethod::Tridiagonal)) acc += std::log(std::abs(l + x));
    lv[s] = acc;
  }
  return log_mean_exp_jackknife(lv);
}

double expected_abs_det_shifted_formula(std::size_t N, double x, const DensityEstimate& rho_np1) {
  const double nd = static_cast<double>(N);
  const double q = std::sqrt(nd / (nd + 1.0)) * x;
  return 0.5 * std::log(2.0 * (nd + 1.0)) - 0.5 * nd * std::log(nd) + std::lgamma(0.5 * (nd + 1.0)) +
         0.5 * nd * x * x + rho_np1.log_at(q);
}

}  // namespace landscape
