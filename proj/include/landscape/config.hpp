#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "landscape/experiments.hpp"
#include "landscape/structure_functions.hpp"

namespace landscape {

struct ToleranceBlock {
  double grad_tol = 1e-10;
  double dedupe_tol = 1e-5;
  double bl_resolution = 1e-3;
  double energy = 0.05;
  double radius = 0.05;
  double lambda_min = 0.15;
  double bl = 0.1;

  bool operator==(const ToleranceBlock&) const = default;
};

struct CountBlock {
  std::vector<std::size_t> n_grid{25, 50, 100};
  std::size_t samples = 10000;

  bool operator==(const CountBlock&) const = default;
};

struct EdgeBlock {
  std::vector<std::size_t> n_grid{100, 200, 400};
  std::size_t trials = 200;
  double epsilon = 0.2;

  bool operator==(const EdgeBlock&) const = default;
};

struct ReplicaBlock {
  double convention_factor = 4.0;
  double q_max = 10.0;

  bool operator==(const ReplicaBlock&) const = default;
};

struct OutputBlock {
  std::string dir = "out";
  std::string prediction_json = "prediction.json";
  std::string trials_csv = "trials.csv";
  std::string summary_json = "summary.json";
  std::string census_csv = "census.csv";
  std::string histogram_csv = "spectrum_histogram.csv";
  std::string count_csv = "count.csv";
  std::string replica_json = "replica.json";
  std::string edge_csv = "edge.csv";
  // Write measured wall time into the trials CSV (otherwise 0).
  bool wall_time = true;

  bool operator==(const OutputBlock&) const = default;
};

struct RunConfig {
  Model model = default_src();
  double mu = 3.0;
  std::size_t N = 50;
  std::size_t K = 2000;
  std::size_t trials = 10;
  std::size_t starts = 4;
  std::size_t census_starts = 0;
  std::uint64_t seed = 20240607;
  std::size_t threads = 0;  // 0: available parallelism
  ToleranceBlock tolerances;
  CountBlock count;
  EdgeBlock edge;
  ReplicaBlock replica;
  OutputBlock output;

  bool operator==(const RunConfig&) const = default;
};

// Parse or validation failure; line is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);
std::string emit_config(const RunConfig& cfg);

// Throws ConfigError without a line number.
void validate_config(const RunConfig& cfg);

extern const char* const kThreadsEnv;

// LANDSCAPE_THREADS overrides the config; 0 means available parallelism.
std::size_t resolve_threads(const RunConfig& cfg);

TrialConfig to_trial_config(const RunConfig& cfg);
Tolerances to_tolerances(const RunConfig& cfg);

}  // namespace landscape
