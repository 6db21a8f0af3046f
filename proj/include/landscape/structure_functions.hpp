#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace landscape {

struct Atom {
  double weight = 0.0;
  double frequency = 0.0;

  bool operator==(const Atom&) const = default;
};

// Short-range correlator B(r) = c0 + sum_k a_k exp(-r t_k^2).
struct SrcCorrelator {
  double c0 = 0.0;
  std::vector<Atom> atoms;

  bool operator==(const SrcCorrelator&) const = default;
};

// Long-range structure function D(r) = A r + sum_k a_k (1 - exp(-r t_k^2)).
struct LrcStructure {
  double slope = 0.0;
  std::vector<Atom> atoms;

  bool operator==(const LrcStructure&) const = default;
};

using Model = std::variant<SrcCorrelator, LrcStructure>;

// Throws std::invalid_argument naming the offending field.
void validate(const SrcCorrelator& b);
void validate(const LrcStructure& d);
void validate(const Model& m);

// Derivative of the given order (0..4) at r >= 0.
double eval_src(const SrcCorrelator& b, double r, int order = 0);
double eval_lrc(const LrcStructure& d, double r, int order = 0);

// Total atom weight M.
double atom_mass(const std::vector<Atom>& atoms);

// sqrt(4 B''(0)) for SRC, sqrt(-2 D''(0)) for LRC.
double trivialization_threshold(const SrcCorrelator& b);
double trivialization_threshold(const LrcStructure& d);
double trivialization_threshold(const Model& m);

// D'(0) for LRC, -2 B'(0) for SRC: the squared-radius scale mu^2 rho*^2.
double radial_scale(const Model& m);

struct AlphaBeta {
  double alpha = 0.0;
  double beta = 0.0;
  // D(rho^2) - D'(rho^2)^2 rho^2 / D'(0)
  double delta = 0.0;
};

// alpha(rho^2) = 2 D''(rho^2)/sqrt(delta), beta(rho^2) = (D'(rho^2) - D'(0))/sqrt(delta).
// Throws DegenerateConditioning when delta <= 1e-14 D(rho^2).
AlphaBeta alpha_beta(const LrcStructure& d, double rho);

struct Assumption3Report {
  bool pass = false;
  double worst_margin = 0.0;
  double worst_rho = 0.0;
};

// Checks -2D''(0) > (a r^2 + b) b and -4D''(0) > (a r^2 + b) a r^2 on a
// log-spaced grid in (0, rho_max].
Assumption3Report check_assumption3(const LrcStructure& d, double rho_max, std::size_t grid_points);

SrcCorrelator default_src();
LrcStructure default_lrc();

std::string model_id(const Model& m);

}  // namespace landscape
