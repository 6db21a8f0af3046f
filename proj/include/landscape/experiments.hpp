#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "landscape/complexity.hpp"
#include "landscape/field_sampler.hpp"
#include "landscape/rmt.hpp"
#include "landscape/structure_functions.hpp"

namespace landscape {

struct CriticalPointRecord {
  Eigen::VectorXd x;
  double grad_norm = 0.0;
  double value_per_n = 0.0;
  std::size_t index = 0;  // Hessian eigenvalues below -1e-8
  double lambda_min = 0.0;
  std::size_t start = 0;  // index of the start that found it
};

struct SearchOptions {
  // Stopping tolerance on |grad H| in units of sqrt(N).
  double grad_tol = 1e-10;
  // Start ball radius as a multiple of the predicted sqrt(N) rho*.
  double radius_factor = 3.0;
  // Two endpoints are the same point within this many sqrt(N).
  double agree_tol = 1e-6;
  std::size_t max_iterations = 5000;
};

// 3 sqrt(N) sqrt(D'(0) or -2B'(0)) / mu by default.
double search_radius(const Model& model, double mu, std::size_t N, double radius_factor = 3.0);

struct MinimizeResult {
  CriticalPointRecord point;
  std::vector<double> hessian_spectrum;  // ascending
  std::size_t converged_starts = 0;
  std::size_t agreeing_starts = 0;
  // At least three distinct starts reached the returned point.
  bool confirmed = false;
};

// Multistart descent: L-BFGS followed by a line-searched Newton polish.
// Throws SearchFailure when no start reaches the gradient tolerance.
MinimizeResult minimize(const Model& model, const FieldRealization& field, double mu, std::size_t n_starts,
                        std::uint64_t seed, const SearchOptions& opt = {});

// Multistart Newton root-finding on grad H = 0; finds saddles as well as minima.
// Starts are Gaussian with the spatial spread of critical points, sqrt(radial scale)/mu per coordinate.
// Points closer than dedupe_tol sqrt(N) are merged, keeping the lowest start index.
std::vector<CriticalPointRecord> census(const Model& model, const FieldRealization& field, double mu,
                                        std::size_t n_starts, double dedupe_tol, std::uint64_t seed,
                                        const SearchOptions& opt = {});

struct TrialConfig {
  Model model = default_src();
  double mu = 3.0;
  std::size_t N = 50;
  std::size_t K = 2000;
  std::size_t trials = 10;
  std::size_t starts = 4;
  std::size_t census_starts = 0;  // 0 skips the census
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  double grad_tol = 1e-10;
  double dedupe_tol = 1e-5;
  double bl_resolution = 1e-3;
};

struct TrialRecord {
  std::size_t trial_id = 0;
  std::uint64_t seed = 0;
  std::size_t N = 0;
  std::size_t K = 0;
  double mu = 0.0;
  std::string model;
  double energy_per_n = 0.0;
  double radius_per_sqrt_n = 0.0;
  SpectrumSample spectrum;
  double lambda_min = 0.0;
  double bl_to_prediction = 0.0;
  std::vector<CriticalPointRecord> census;
  bool census_run = false;
  bool confirmed = false;
  double wall_time_ms = 0.0;
  std::string status = "ok";
};

TrialRecord run_trial(const TrialConfig& cfg, std::size_t trial_id);
std::vector<TrialRecord> run_trials(const TrialConfig& cfg);

struct Tolerances {
  double energy = 0.05;
  double radius = 0.05;
  double lambda_min = 0.15;
  double bl = 0.1;
};

struct ObservableSummary {
  std::string name;
  double mean = 0.0;
  double se = 0.0;
  std::optional<double> prediction;
  double tolerance = 0.0;
  std::optional<bool> pass;
};

struct TrialSummary {
  std::size_t trials_ok = 0;
  std::size_t trials_failed = 0;
  std::vector<ObservableSummary> observables;
  double mean_census_size = 0.0;
};

TrialSummary aggregate(const std::vector<TrialRecord>& records, const PredictionReport& prediction,
                       const Tolerances& tol = {});

// Shortest round-trip decimal.
std::string format_double(double v);

extern const char* const kTrialsCsvHeader;
// With include_wall_time = false the timing column is written as 0 so that
// identical configs give byte-identical files.
void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records, bool include_wall_time = true);
void write_census_csv(std::ostream& os, const std::vector<TrialRecord>& records);

// Histogram of pooled Hessian eigenvalues with bin edges and the predicted density.
void write_spectrum_histogram_csv(std::ostream& os, const std::vector<TrialRecord>& records,
                                  const SemicircleLaw& prediction, std::size_t bins = 60);

}  // namespace landscape
