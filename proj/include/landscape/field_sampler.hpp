#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "landscape/structure_functions.hpp"

namespace landscape {

// Random-feature realization of X_N:
//   SRC: X(x) = g0 + sum_k s_k cos(w_k.x + phi_k)
//   LRC: X(x) = xi.x + sum_k s_k (cos(w_k.x + phi_k) - cos(phi_k))
// with w_k ~ N(0, (2 t^2 / N) I) for an atom drawn with probability a/M.
// s_k = sqrt(2 N M / K) (SRC) and sqrt(N M / K) (LRC) give covariance N B(|x-y|^2/N)
// and increment variance N D(|x-y|^2/N) respectively.
struct FieldRealization {
  bool lrc = false;
  std::size_t N = 0;
  std::size_t K = 0;
  Eigen::MatrixXd frequencies;  // N x K, column k is w_k
  Eigen::VectorXd phases;       // K
  Eigen::VectorXd amplitudes;   // K
  Eigen::VectorXd xi;           // N
  double g0 = 0.0;
  // -sum_k s_k cos(phi_k) for LRC pinning, 0 for SRC.
  double offset = 0.0;
  std::uint64_t seed = 0;
};

struct HamiltonianEval {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

FieldRealization sample_field(const Model& model, std::size_t N, std::size_t K, std::uint64_t seed);

// Field value X(x) alone.
double eval_field(const FieldRealization& f, const Eigen::VectorXd& x);

// H(x) = X(x) + (mu/2)|x|^2 with gradient; the Hessian is skipped.
double eval_value_gradient(const FieldRealization& f, double mu, const Eigen::VectorXd& x, Eigen::VectorXd& grad);

HamiltonianEval eval_hamiltonian(const FieldRealization& f, double mu, const Eigen::VectorXd& x);

// Upper bound mu + sum_k s_k |w_k|^2 on the Hessian spectrum.
double hessian_spectral_bound(const FieldRealization& f, double mu);

// Rows are joint samples of (X(p_1), ..., X(p_m)) from the closed-form covariance.
Eigen::MatrixXd exact_sample_on_points(const Model& model, const std::vector<Eigen::VectorXd>& points,
                                       std::size_t n_samples, std::uint64_t seed);

Eigen::MatrixXd point_covariance(const Model& model, const std::vector<Eigen::VectorXd>& points);

}  // namespace landscape
