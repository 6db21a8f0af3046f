#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace landscape {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent streams from (base, index).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

// log(sum exp(v)); -inf for empty or all -inf input.
double log_sum_exp(const std::vector<double>& v);
double log_mean_exp(const std::vector<double>& v);

// exp(x^2) erfc(x), accurate for large positive x.
double erfcx(double x);

// log of the standard normal CDF, accurate in the lower tail.
double log_normal_cdf(double x);

struct LogMeanEstimate {
  double log_mean = 0.0;
  double se = 0.0;
};

// Shifted log-mean-exp of per-sample log values with a delete-one jackknife
// standard error on the log scale.
LogMeanEstimate log_mean_exp_jackknife(const std::vector<double>& log_values);

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section search for the maximum of a unimodal function on [a, b].
Extremum golden_max(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);

// Asymptotic two-sample critical value at level alpha (0.01 or 0.05).
double ks_critical(std::size_t n, std::size_t m, double alpha = 0.01);

double mean(const std::vector<double>& v);
// Standard error of the mean.
double standard_error(const std::vector<double>& v);

}  // namespace landscape
