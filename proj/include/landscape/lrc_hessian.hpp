#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "landscape/numerics.hpp"
#include "landscape/structure_functions.hpp"

namespace landscape {

// Conditional-law constants of the LRC Hessian at radius rho and energy u.
struct LrcConditionalConstants {
  double m1 = 0.0;
  double m2 = 0.0;
  double sigma1_sq_times_N = 0.0;
  double sigma2_sq_times_N = 0.0;
  double mY = 0.0;
  double sigmaY_sq_times_N = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

LrcConditionalConstants constants(const LrcStructure& d, double mu, double rho, double u);

// G = [[z1', xi^T], [xi, G**]] with G** = sqrt(-4D''(0)) (sqrt((N-1)/N) GOE_{N-1} - z3' I).
// The border is stored in the eigenbasis of G**, where G is an arrowhead matrix.
struct BorderedHessianSample {
  std::size_t N = 0;
  double z1 = 0.0;               // corner z1'
  double z3 = 0.0;               // shift z3'
  Eigen::VectorXd xi;            // N-1, coordinates in the eigenbasis of G**
  std::vector<double> goe;       // GOE_{N-1} spectrum, ascending
  std::vector<double> bulk;      // eigenvalues of G**, ascending
  std::vector<double> eigenvalues;  // eigenvalues of G, ascending

  double lambda_min() const { return eigenvalues.front(); }
};

enum class ArrowheadMethod { Automatic, Dense, Secular };

// Draws G at (rho, u). With y set, z3' is pinned to y and z1' follows its
// conditional law given z3' = y. Automatic uses a dense eigensolve below N = 512.
BorderedHessianSample sample_g(const LrcStructure& d, double mu, double rho, double u, std::size_t N,
                               std::uint64_t seed, std::optional<double> y = std::nullopt,
                               ArrowheadMethod method = ArrowheadMethod::Automatic);

// Eigenvalues of the arrowhead [[z, xi^T], [xi, diag(bulk)]], ascending.
std::vector<double> arrowhead_eigenvalues(double z, const Eigen::VectorXd& xi, const std::vector<double>& bulk,
                                          ArrowheadMethod method = ArrowheadMethod::Automatic);

// lambda_j(G) <= lambda_j(G**) <= lambda_{j+1}(G) up to tol.
bool interlaces(const BorderedHessianSample& s, double tol = 0.0);

Eigen::MatrixXd dense_matrix(const BorderedHessianSample& s);

// z1' | z3' = y ~ Normal(a_bar, b_sq / N).
struct CornerConditional {
  double a_bar = 0.0;
  double b_sq = 0.0;
};

CornerConditional corner_conditional(const LrcStructure& d, double mu, double rho, double u, double y);

struct SchurDeterminant {
  double log_abs = 0.0;
  int sign = 1;
  // Some eigenvalue of G** has modulus <= 1e-12.
  bool near_singular = false;
};

// det G = det(G**) (z1' - xi^T G**^{-1} xi) through the eigen-expansion.
SchurDeterminant schur_det(const BorderedHessianSample& s);

struct TridiagonalW {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;
};

// W with corner -sqrt(N)(z1~ + sqrt(2) y), diagonal sqrt(2) eta_i and
// off-diagonals chi_{N-1}, ..., chi_1, where sqrt(-2D''(0)) z1~ ~ Normal(a_bar, b^2/N).
TridiagonalW sample_tridiag_w(const LrcStructure& d, double mu, double rho, double u, double y, std::size_t N,
                              std::uint64_t seed);
double tridiag_w_lambda_max(const LrcStructure& d, double mu, double rho, double u, double y, std::size_t N,
                            std::uint64_t seed);

// lambda_min(G) = -sqrt(-2D''(0)/N) lambda_max(W) - sqrt(-4D''(0)) y.
double lambda_min_from_w(const LrcStructure& d, double lambda_max_w, double y, std::size_t N);

struct EdgeTailResult {
  double probability = 0.0;
  std::size_t exceedances = 0;
  std::size_t trials = 0;
  double threshold = 0.0;
  double lambda_min_mean = 0.0;
  double lambda_min_se = 0.0;
};

// Fraction of draws of G at the complexity maximizer with lambda_min <= c_l - r_l - epsilon.
EdgeTailResult edge_tail(const LrcStructure& d, double mu, std::size_t N, std::size_t trials, double epsilon,
                         std::uint64_t seed);

struct RatioEstimate {
  double value = 0.0;
  double se = 0.0;
};

// (1/N) log( E det(xI + GOE_N)^2 / (E|det(xI + GOE_N)|)^2 ).
RatioEstimate second_moment_ratio(std::size_t N, double x, std::size_t n_samples, std::uint64_t seed);

}  // namespace landscape
