#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "landscape/numerics.hpp"
#include "landscape/rmt.hpp"
#include "landscape/structure_functions.hpp"

namespace landscape {

struct ComplexityPoint {
  double rho = 1.0;
  double u = 0.0;
  double y = 0.0;
};

struct MaximizerResult {
  ComplexityPoint point;
  double value = 0.0;
};

double phi(double x);
// Log-potential of the standard semicircle, int log|x - t| sigma_sc(dt).
double psi_star_semicircle(double x);

// F(x) = -x^2/2 + 2 m x + Phi(x).
double big_f(double x, double m);

struct FMaximizer {
  double x_max = 0.0;
  double f_max = 0.0;
  double f_second = 0.0;
};

FMaximizer big_f_maximizer(double m);

// Complexity function of the SRC model. When B(0)B''(0) = B'(0)^2 the Gaussian
// term in y collapses to a constraint and the function is -inf off it.
double psi_src(const ComplexityPoint& p, const SrcCorrelator& b, double mu);
MaximizerResult psi_src_maximizer(const SrcCorrelator& b, double mu);

// Complexity function of the LRC model.
double psi_lrc(const ComplexityPoint& p, const LrcStructure& d, double mu);
MaximizerResult psi_lrc_maximizer(const LrcStructure& d, double mu);

struct PredictionReport {
  bool lrc = false;
  double mu = 0.0;
  double threshold = 0.0;
  bool supercritical = false;
  std::optional<double> rho_star;
  std::optional<double> u_star;
  std::optional<double> y_star;
  std::optional<double> psi_max;
  double center = 0.0;
  double radius = 0.0;
  double lambda_edge = 0.0;
  std::optional<double> exponent_subcritical;
  double m = 0.0;
};

PredictionReport predictions(const Model& model, double mu);

// Hessian law at a point: a GOE_N + (sigma Z / sqrt(N) + mu) I, and m = -mu / a.
struct KacRiceScales {
  double a = 0.0;
  double sigma = 0.0;
  double m = 0.0;
};

KacRiceScales kac_rice_scales(const Model& model, double mu);

// log E Crt_N = log( mu^-N E|det(a GOE_N + (sigma Z/sqrt(N) + mu) I)| ).
// GOE spectra are sampled; the Gaussian shift Z is integrated by trapezoid
// quadrature per sample; the error is a block-jackknife over GOE draws.
LogMeanEstimate expected_crt_mc(const Model& model, double mu, std::size_t N, std::size_t n_samples,
                                std::uint64_t seed);

struct QuadratureResult {
  double log_value = 0.0;
  // log of (largest boundary integrand / peak integrand).
  double log_boundary_ratio = 0.0;
};

// log E Crt_N from the one-dimensional integral against rho_{N+1}.
QuadratureResult expected_crt_quadrature(const Model& model, double mu, std::size_t N,
                                         const DensityEstimate& rho_np1);

// Richardson extrapolation of f(N) = f_inf + c/N from two sizes.
double richardson(double f1, std::size_t n1, double f2, std::size_t n2);

struct ReplicaSolution {
  double v = 0.0;
  double Q = 0.0;
  double mu_eff = 0.0;
  double edge = 0.0;
  double residual_1 = 0.0;
  double residual_2 = 0.0;
};

struct ReplicaReport {
  // Q = 0 branch; v is undetermined there and reported as 1/mu.
  ReplicaSolution symmetric;
  std::vector<ReplicaSolution> interior;
  double convention_factor = 4.0;
};

// Replica equations evaluated for B_fld(q) = B(sqrt(k) q), k = convention_factor.
ReplicaReport replica_solve(const SrcCorrelator& b, double mu, double convention_factor = 4.0,
                            double q_max = 10.0);

// Residuals of the two replica equations at (v, Q).
std::pair<double, double> replica_residuals(const SrcCorrelator& b, double mu, double convention_factor, double v,
                                            double Q);

}  // namespace landscape
