#include <array>
#include <cmath>
#include <stdexcept>

#include "landscape/complexity.hpp"

namespace landscape {

namespace {

// B_fld(q) = B(sqrt(k) q) and its derivatives.
struct FldCorrelator {
  const SrcCorrelator& b;
  double sk;
  double operator()(double q, int order) const { return std::pow(sk, order) * eval_src(b, sk * q, order); }
};

std::pair<double, double> residuals(const FldCorrelator& f, double mu, double v, double Q) {
  const double p = 1.0 - mu * v * Q;
  const double r1 = mu * mu * Q / p - (f(Q, 1) - f(0.0, 1));
  const double r2 = std::log(p) / v + mu * Q - v * (f(Q, 0) - f(0.0, 0) - Q * f(Q, 1));
  return {r1, r2};
}

ReplicaSolution make_solution(const FldCorrelator& f, double mu, double v, double Q) {
  ReplicaSolution s;
  s.v = v;
  s.Q = Q;
  s.mu_eff = mu + f(0.0, 2) / mu + v * (f(Q, 1) - f(0.0, 1) - Q * f(0.0, 2));
  s.edge = s.mu_eff - 2.0 * std::sqrt(f(0.0, 2));
  const auto [r1, r2] = residuals(f, mu, v, Q);
  s.residual_1 = r1;
  s.residual_2 = r2;
  return s;
}

}  // namespace

std::pair<double, double> replica_residuals(const SrcCorrelator& b, double mu, double convention_factor, double v,
                                            double Q) {
  return residuals(FldCorrelator{b, std::sqrt(convention_factor)}, mu, v, Q);
}

ReplicaReport replica_solve(const SrcCorrelator& b, double mu, double convention_factor, double q_max) {
  if (!(mu > 0.0)) throw std::invalid_argument("replica_solve: mu must be positive");
  if (!(convention_factor > 0.0)) throw std::invalid_argument("replica_solve: convention_factor must be positive");
  if (!(q_max > 0.0)) throw std::invalid_argument("replica_solve: q_max must be positive");
  validate(b);
  if (b.atoms.empty()) throw std::invalid_argument("replica_solve: correlator needs at least one atom");
  const FldCorrelator f{b, std::sqrt(convention_factor)};
  ReplicaReport rep;
  rep.convention_factor = convention_factor;
  rep.symmetric = make_solution(f, mu, 1.0 / mu, 0.0);

  // Unknowns s = log Q, t = logit(mu v Q); keeps Q > 0, v > 0 and 1 - mu v Q > 0.
  auto unpack = [&](double s, double t) {
    const double Q = std::exp(s);
    const double p = 1.0 / (1.0 + std::exp(-t));
    return std::array<double, 2>{p / (mu * Q), Q};
  };
  auto res = [&](double s, double t) {
    const auto [v, Q] = unpack(s, t);
    const auto [r1, r2] = residuals(f, mu, v, Q);
    return std::array<double, 2>{r1, r2};
  };
  const double lq_lo = std::log(q_max) - 8.0 * std::log(10.0);
  const double lq_hi = std::log(q_max);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 9; ++j) {
      double s = lq_lo + (lq_hi - lq_lo) * i / 11.0;
      double t = -4.0 + j;
      auto r = res(s, t);
      double nrm = std::hypot(r[0], r[1]);
      for (int it = 0; it < 200 && std::isfinite(nrm) && nrm > 1e-14; ++it) {
        const double h = 1e-7;
        const auto rs = res(s + h, t);
        const auto rt = res(s, t + h);
        const double j11 = (rs[0] - r[0]) / h;
        const double j21 = (rs[1] - r[1]) / h;
        const double j12 = (rt[0] - r[0]) / h;
        const double j22 = (rt[1] - r[1]) / h;
        const double det = j11 * j22 - j12 * j21;
        if (!std::isfinite(det) || std::abs(det) < 1e-300) break;
        const double ds = -(j22 * r[0] - j12 * r[1]) / det;
        const double dt = -(-j21 * r[0] + j11 * r[1]) / det;
        double step = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
          const auto rn = res(s + step * ds, t + step * dt);
          const double nn = std::hypot(rn[0], rn[1]);
          if (std::isfinite(nn) && nn < nrm) {
            s += step * ds;
            t += step * dt;
            r = rn;
            nrm = nn;
            moved = true;
            break;
          }
        }
        if (!moved) break;
      }
      if (!(nrm <= 1e-10)) continue;
      const auto [v, Q] = unpack(s, t);
      if (!(Q > 1e-8) || Q > q_max) continue;
      bool dup = false;
      for (const auto& x : rep.interior)
        if (std::abs(x.Q - Q) <= 1e-7 * (1.0 + Q) && std::abs(x.v - v) <= 1e-7 * (1.0 + v)) dup = true;
      if (!dup) rep.interior.push_back(make_solution(f, mu, v, Q));
    }
  }
  return rep;
}

}  // namespace landscape
