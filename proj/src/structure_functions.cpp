#include "landscape/structure_functions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "landscape/errors.hpp"

namespace landscape {

namespace {

void validate_atoms(const std::vector<Atom>& atoms, const char* owner) {
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const Atom& a = atoms[k];
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      std::ostringstream os;
      os << owner << ".atoms[" << k << "].weight must be positive and finite (got " << a.weight << ")";
      throw std::invalid_argument(os.str());
    }
    if (!(a.frequency > 0.0) || !std::isfinite(a.frequency)) {
      std::ostringstream os;
      os << owner << ".atoms[" << k << "].frequency must be positive and finite (got " << a.frequency << ")";
      throw std::invalid_argument(os.str());
    }
  }
}

void check_order(int order, int max_order) {
  if (order < 0 || order > max_order) throw std::invalid_argument("derivative order out of range");
}

void check_r(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("structure function argument r must be nonnegative");
}

}  // namespace

void validate(const SrcCorrelator& b) {
  if (!(b.c0 >= 0.0) || !std::isfinite(b.c0)) throw std::invalid_argument("model.c0 must be nonnegative and finite");
  validate_atoms(b.atoms, "model");
}

void validate(const LrcStructure& d) {
  if (!(d.slope >= 0.0) || !std::isfinite(d.slope)) throw std::invalid_argument("model.slope must be nonnegative and finite");
  validate_atoms(d.atoms, "model");
  if (d.slope == 0.0 && d.atoms.empty()) throw std::invalid_argument("model: LRC structure needs a positive slope or at least one atom");
}

void validate(const Model& m) {
  std::visit([](const auto& x) { validate(x); }, m);
}

double eval_src(const SrcCorrelator& b, double r, int order) {
  check_r(r);
  check_order(order, 4);
  double s = order == 0 ? b.c0 : 0.0;
  for (const Atom& a : b.atoms) {
    const double t2 = a.frequency * a.frequency;
    s += a.weight * std::pow(-t2, order) * std::exp(-r * t2);
  }
  return s;
}

double eval_lrc(const LrcStructure& d, double r, int order) {
  check_r(r);
  check_order(order, 4);
  double s = 0.0;
  if (order == 0) s = d.slope * r;
  if (order == 1) s = d.slope;
  for (const Atom& a : d.atoms) {
    const double t2 = a.frequency * a.frequency;
    if (order == 0)
      s += a.weight * -std::expm1(-r * t2);
    else
      s -= a.weight * std::pow(-t2, order) * std::exp(-r * t2);
  }
  return s;
}

double atom_mass(const std::vector<Atom>& atoms) {
  double m = 0.0;
  for (const Atom& a : atoms) m += a.weight;
  return m;
}

double trivialization_threshold(const SrcCorrelator& b) { return std::sqrt(4.0 * eval_src(b, 0.0, 2)); }

double trivialization_threshold(const LrcStructure& d) { return std::sqrt(-2.0 * eval_lrc(d, 0.0, 2)); }

double trivialization_threshold(const Model& m) {
  return std::visit([](const auto& x) { return trivialization_threshold(x); }, m);
}

double radial_scale(const Model& m) {
  if (const auto* b = std::get_if<SrcCorrelator>(&m)) return -2.0 * eval_src(*b, 0.0, 1);
  return eval_lrc(std::get<LrcStructure>(m), 0.0, 1);
}

AlphaBeta alpha_beta(const LrcStructure& d, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("alpha_beta: rho must be positive");
  const double r = rho * rho;
  const double d0 = eval_lrc(d, r, 0);
  const double d1 = eval_lrc(d, r, 1);
  const double d2 = eval_lrc(d, r, 2);
  const double d10 = eval_lrc(d, 0.0, 1);
  const double delta = d0 - d1 * d1 * r / d10;
  if (!(delta > 1e-14 * d0)) {
    std::ostringstream os;
    os << "degenerate conditioning at rho=" << rho << ": D(rho^2) - D'(rho^2)^2 rho^2/D'(0) = " << delta;
    throw DegenerateConditioning(os.str());
  }
  const double sq = std::sqrt(delta);
  return {2.0 * d2 / sq, (d1 - d10) / sq, delta};
}

Assumption3Report check_assumption3(const LrcStructure& d, double rho_max, std::size_t grid_points) {
  if (!(rho_max > 0.0)) throw std::invalid_argument("check_assumption3: rho_max must be positive");
  if (grid_points < 2) throw std::invalid_argument("check_assumption3: grid_points must be at least 2");
  const double dpp0 = eval_lrc(d, 0.0, 2);
  const double lo = std::log(rho_max * 1e-3);
  const double hi = std::log(rho_max);
  Assumption3Report rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double rho = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1));
    const AlphaBeta ab = alpha_beta(d, rho);
    const double ar2 = ab.alpha * rho * rho;
    const double m1 = -2.0 * dpp0 - (ar2 + ab.beta) * ab.beta;
    const double m2 = -4.0 * dpp0 - (ar2 + ab.beta) * ar2;
    const double m = std::min(m1, m2);
    if (m < rep.worst_margin) {
      rep.worst_margin = m;
      rep.worst_rho = rho;
    }
  }
  rep.pass = rep.worst_margin > 0.0;
  return rep;
}

SrcCorrelator default_src() { return {0.0, {{1.0, 1.0}}}; }

LrcStructure default_lrc() { return {0.5, {{1.0, 1.0}}}; }

std::string model_id(const Model& m) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* b = std::get_if<SrcCorrelator>(&m)) {
    os << "src(c0=" << b->c0;
    for (const Atom& a : b->atoms) os << ";" << a.weight << "@" << a.frequency;
  } else {
    const auto& d = std::get<LrcStructure>(m);
    os << "lrc(A=" << d.slope;
    for (const Atom& a : d.atoms) os << ";" << a.weight << "@" << a.frequency;
  }
  os << ")";
  return os.str();
}

}  // namespace landscape
