#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "landscape/numerics.hpp"

namespace landscape {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

double log_sum_exp(const std::vector<double>& v) {
  const double ninf = -std::numeric_limits<double>::infinity();
  if (v.empty()) return ninf;
  const double m = *std::max_element(v.begin(), v.end());
  if (m == ninf) return ninf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double log_mean_exp(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("log_mean_exp: empty input");
  return log_sum_exp(v) - std::log(static_cast<double>(v.size()));
}

double erfcx(double x) {
  if (x < 0.0) return 2.0 * std::exp(x * x) - erfcx(-x);
  if (x < 25.0) return std::exp(x * x) * std::erfc(x);
  // Continued fraction 1/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), evaluated bottom-up.
  double f = x;
  for (int k = 60; k >= 1; --k) f = x + 0.5 * k / f;
  return 1.0 / (std::sqrt(std::numbers::pi) * f);
}

double log_normal_cdf(double x) {
  if (x > -5.0) return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
  return std::log(0.5 * erfcx(-x / std::numbers::sqrt2)) - 0.5 * x * x;
}

LogMeanEstimate log_mean_exp_jackknife(const std::vector<double>& lv) {
  const std::size_t n = lv.size();
  if (n < 2) throw std::invalid_argument("log_mean_exp_jackknife: need at least two samples");
  const double ninf = -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(lv.begin(), lv.end());
  if (m == ninf) return {ninf, 0.0};
  std::vector<double> e(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = std::exp(lv[i] - m);
    s += e[i];
  }
  const double nd = static_cast<double>(n);
  LogMeanEstimate out;
  out.log_mean = m + std::log(s / nd);
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rest = s - e[i];
    if (rest > 1e-8 * s) {
      loo[i] = m + std::log(rest / (nd - 1.0));
    } else {
      std::vector<double> others;
      others.reserve(n - 1);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) others.push_back(lv[j]);
      loo[i] = log_mean_exp(others);
    }
  }
  double lbar = 0.0;
  for (double x : loo) lbar += x;
  lbar /= nd;
  double ss = 0.0;
  for (double x : loo) ss += (x - lbar) * (x - lbar);
  out.se = std::sqrt((nd - 1.0) / nd * ss);
  return out;
}

Extremum golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double dmax = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    dmax = std::max(dmax, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return dmax;
}

double ks_critical(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return c * std::sqrt((nd + md) / (nd * md));
}

double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty input");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace landscape
