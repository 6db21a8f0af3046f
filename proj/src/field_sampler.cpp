#include "landscape/field_sampler.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "landscape/errors.hpp"
#include "landscape/numerics.hpp"

namespace landscape {

FieldRealization sample_field(const Model& model, std::size_t N, std::size_t K, std::uint64_t seed) {
  if (N == 0) throw std::invalid_argument("sample_field: N must be positive");
  validate(model);
  const bool lrc = std::holds_alternative<LrcStructure>(model);
  const std::vector<Atom>& atoms =
      lrc ? std::get<LrcStructure>(model).atoms : std::get<SrcCorrelator>(model).atoms;
  if (!atoms.empty() && K == 0) throw std::invalid_argument("sample_field: K must be positive when atoms are present");
  if (atoms.empty()) K = 0;

  FieldRealization f;
  f.lrc = lrc;
  f.N = N;
  f.K = K;
  f.seed = seed;
  const auto n = static_cast<Eigen::Index>(N);
  const auto k = static_cast<Eigen::Index>(K);
  f.frequencies.resize(n, k);
  f.phases.resize(k);
  f.amplitudes.resize(k);
  f.xi = Eigen::VectorXd::Zero(n);

  Rng rng = make_rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> uphase(0.0, 2.0 * std::numbers::pi);
  if (lrc) {
    const double sa = std::sqrt(std::get<LrcStructure>(model).slope);
    for (Eigen::Index i = 0; i < n; ++i) f.xi(i) = sa * g(rng);
  } else {
    f.g0 = std::sqrt(std::get<SrcCorrelator>(model).c0) * g(rng);
  }
  if (K == 0) return f;

  std::vector<double> weights;
  for (const Atom& a : atoms) weights.push_back(a.weight);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  const double mass = atom_mass(atoms);
  const double nd = static_cast<double>(N);
  const double amp = std::sqrt((lrc ? 1.0 : 2.0) * nd * mass / static_cast<double>(K));
  for (Eigen::Index j = 0; j < k; ++j) {
    const double t = atoms[pick(rng)].frequency;
    const double sd = t * std::sqrt(2.0 / nd);
    for (Eigen::Index i = 0; i < n; ++i) f.frequencies(i, j) = sd * g(rng);
    f.phases(j) = uphase(rng);
    f.amplitudes(j) = amp;
  }
  if (lrc) f.offset = -f.amplitudes.dot(f.phases.array().cos().matrix());
  return f;
}

double eval_field(const FieldRealization& f, const Eigen::VectorXd& x) {
  if (x.size() != static_cast<Eigen::Index>(f.N)) throw std::invalid_argument("eval_field: dimension mismatch");
  double v = f.g0 + f.offset + f.xi.dot(x);
  if (f.K == 0) return v;
  const Eigen::VectorXd p = f.frequencies.transpose() * x + f.phases;
  for (Eigen::Index j = 0; j < p.size(); ++j) v += f.amplitudes(j) * std::cos(p(j));
  return v;
}

double eval_value_gradient(const FieldRealization& f, double mu, const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
  if (x.size() != static_cast<Eigen::Index>(f.N)) throw std::invalid_argument("eval_value_gradient: dimension mismatch");
  double v = f.g0 + f.offset + f.xi.dot(x) + 0.5 * mu * x.squaredNorm();
  grad = f.xi + mu * x;
  if (f.K == 0) return v;
  const Eigen::VectorXd p = f.frequencies.transpose() * x + f.phases;
  Eigen::VectorXd sn(p.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    v += f.amplitudes(j) * std::cos(p(j));
    sn(j) = f.amplitudes(j) * std::sin(p(j));
  }
  grad.noalias() -= f.frequencies * sn;
  return v;
}

HamiltonianEval eval_hamiltonian(const FieldRealization& f, double mu, const Eigen::VectorXd& x) {
  if (x.size() != static_cast<Eigen::Index>(f.N)) throw std::invalid_argument("eval_hamiltonian: dimension mismatch");
  HamiltonianEval e;
  const auto n = static_cast<Eigen::Index>(f.N);
  e.value = f.g0 + f.offset + f.xi.dot(x) + 0.5 * mu * x.squaredNorm();
  e.gradient = f.xi + mu * x;
  e.hessian = mu * Eigen::MatrixXd::Identity(n, n);
  if (f.K == 0) return e;
  const Eigen::VectorXd p = f.frequencies.transpose() * x + f.phases;
  Eigen::VectorXd cs(p.size());
  Eigen::VectorXd sn(p.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    cs(j) = f.amplitudes(j) * std::cos(p(j));
    sn(j) = f.amplitudes(j) * std::sin(p(j));
    e.value += cs(j);
  }
  e.gradient.noalias() -= f.frequencies * sn;
  const Eigen::MatrixXd wc = f.frequencies * cs.asDiagonal();
  e.hessian.noalias() -= wc * f.frequencies.transpose();
  e.hessian.triangularView<Eigen::StrictlyUpper>() = e.hessian.transpose();
  return e;
}

double hessian_spectral_bound(const FieldRealization& f, double mu) {
  double s = mu;
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(f.K); ++j)
    s += f.amplitudes(j) * f.frequencies.col(j).squaredNorm();
  return s;
}

Eigen::MatrixXd point_covariance(const Model& model, const std::vector<Eigen::VectorXd>& points) {
  validate(model);
  const std::size_t m = points.size();
  if (m == 0) throw std::invalid_argument("point_covariance: no points");
  const double nd = static_cast<double>(points.front().size());
  Eigen::MatrixXd c(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (points[i].size() != points.front().size()) throw std::invalid_argument("point_covariance: dimension mismatch");
    for (std::size_t j = 0; j <= i; ++j) {
      const double rij = (points[i] - points[j]).squaredNorm() / nd;
      double v = 0.0;
      if (const auto* b = std::get_if<SrcCorrelator>(&model)) {
        v = nd * eval_src(*b, rij, 0);
      } else {
        const auto& d = std::get<LrcStructure>(model);
        v = 0.5 * nd *
            (eval_lrc(d, points[i].squaredNorm() / nd, 0) + eval_lrc(d, points[j].squaredNorm() / nd, 0) -
             eval_lrc(d, rij, 0));
      }
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      c(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return c;
}

Eigen::MatrixXd exact_sample_on_points(const Model& model, const std::vector<Eigen::VectorXd>& points,
                                       std::size_t n_samples, std::uint64_t seed) {
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (points[i].size() == points[j].size() && (points[i] - points[j]).squaredNorm() == 0.0)
        throw std::invalid_argument("exact_sample_on_points: points must be distinct");
  Eigen::MatrixXd c = point_covariance(model, points);
  const auto m = c.rows();
  const double jitter = 1e-10 * c.trace() / static_cast<double>(m);

  // Pivoted LDL^T handles the rank-deficient pinned case; one jittered retry.
  Eigen::LDLT<Eigen::MatrixXd> ldlt(c);
  auto acceptable = [&](const Eigen::LDLT<Eigen::MatrixXd>& f) {
    return f.info() == Eigen::Success && f.vectorD().minCoeff() >= -jitter;
  };
  if (!acceptable(ldlt)) {
    c.diagonal().array() += jitter;
    ldlt.compute(c);
    if (!acceptable(ldlt)) throw IllConditionedCovariance("exact_sample_on_points: covariance factorization failed");
  }
  const Eigen::VectorXd sd = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd lfac = ldlt.matrixL();

  Rng rng = make_rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n_samples), m);
  Eigen::VectorXd z(m);
  for (Eigen::Index s = 0; s < static_cast<Eigen::Index>(n_samples); ++s) {
    for (Eigen::Index i = 0; i < m; ++i) z(i) = g(rng);
    Eigen::VectorXd y = lfac * sd.cwiseProduct(z);
    y = ldlt.transpositionsP().transpose() * y;
    out.row(s) = y.transpose();
  }
  return out;
}

}  // namespace landscape
