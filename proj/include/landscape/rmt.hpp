#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "landscape/numerics.hpp"

namespace landscape {

struct SpectrumSample {
  std::vector<double> eigenvalues;  // ascending
  std::size_t N = 0;

  double lambda_min() const { return eigenvalues.front(); }
  double lambda_max() const { return eigenvalues.back(); }
  // Largest modulus.
  double lambda_star() const;
};

struct SemicircleLaw {
  double center = 0.0;
  double radius = std::numbers::sqrt2;

  double density(double x) const;
  double cdf(double x) const;
  double lower_edge() const { return center - radius; }
};

struct DiscreteMeasure {
  std::vector<double> atoms;
  std::vector<double> weights;
};

DiscreteMeasure empirical_measure(const std::vector<double>& points);
DiscreteMeasure empirical_measure(const SpectrumSample& s);

using Measure = std::variant<DiscreteMeasure, SemicircleLaw>;

// Bounded-Lipschitz distance. Semicircle laws are binned at resolution
// h = resolution * span; discrete atoms are kept at their exact positions.
// The finite dual over grid values of f is solved exactly.
double bl_distance(const Measure& a, const Measure& b, double resolution = 1e-3);

struct DensityEstimate {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> log_values;
  std::size_t samples = 0;

  double trapezoid_mass() const;
  // Linear interpolation of the log-density between grid nodes
  // (linear in value next to zero-valued nodes). Throws std::out_of_range.
  double log_at(double x) const;
  double at(double x) const;
};

enum class GoeMethod { Automatic, Dense, Tridiagonal };

// Symmetric matrix with E M_ij^2 = (1 + delta_ij) / (2N).
Eigen::MatrixXd sample_goe_matrix(std::size_t N, Rng& rng);
std::vector<double> goe_eigenvalues(std::size_t N, Rng& rng, GoeMethod method = GoeMethod::Automatic);
SpectrumSample sample_goe(std::size_t N, std::uint64_t seed, GoeMethod method = GoeMethod::Automatic);

// Largest eigenvalue of a symmetric tridiagonal matrix.
double tridiagonal_lambda_max(const Eigen::VectorXd& diag, const Eigen::VectorXd& off);
std::vector<double> tridiagonal_eigenvalues(const Eigen::VectorXd& diag, const Eigen::VectorXd& off);

// Histogram bin edges lo, lo + width, ..., hi.
std::vector<double> uniform_edges(double lo = -3.0, double hi = 3.0, double width = 0.02);
std::vector<double> uniform_grid(double lo, double hi, double step);

// Histogram estimate of the GOE_N one-point density on the given bin edges;
// values are reported at bin centers.
DensityEstimate rho_n_estimate(std::size_t N, std::size_t n_samples, const std::vector<double>& edges,
                               std::uint64_t seed);

// Exact finite-N GOE one-point density (Hermite-function form), log scale.
double goe_log_density(std::size_t N, double x);
DensityEstimate goe_density_exact(std::size_t N, const std::vector<double>& grid);

// log E|det(GOE_N + x I)| by Monte Carlo.
LogMeanEstimate expected_abs_det_shifted_mc(std::size_t N, double x, std::size_t n_samples, std::uint64_t seed);

// log of sqrt(2(N+1)) N^{-N/2} Gamma((N+1)/2) e^{N x^2/2} rho_{N+1}(sqrt(N/(N+1)) x).
double expected_abs_det_shifted_formula(std::size_t N, double x, const DensityEstimate& rho_np1);

}  // namespace landscape
