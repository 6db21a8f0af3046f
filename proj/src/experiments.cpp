#include "landscape/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <thread>

#include "landscape/errors.hpp"
#include "landscape/numerics.hpp"

namespace landscape {

namespace {

Eigen::VectorXd start_point(std::size_t N, double radius, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd x(static_cast<Eigen::Index>(N));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng);
  const double nrm = x.norm();
  if (nrm == 0.0 || radius == 0.0) return Eigen::VectorXd::Zero(x.size());
  return x * (radius * std::pow(u(rng), 1.0 / static_cast<double>(N)) / nrm);
}

Eigen::VectorXd gaussian_start(std::size_t N, double sd, std::uint64_t seed) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N));
  if (!(sd > 0.0)) return x;
  Rng rng = make_rng(seed);
  std::normal_distribution<double> g(0.0, sd);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng);
  return x;
}

struct Polished {
  Eigen::VectorXd x;
  double value = 0.0;
  double grad_norm = 0.0;
  std::vector<double> spectrum;
};

void fill_spectrum(const FieldRealization& f, double mu, Polished& p) {
  const HamiltonianEval e = eval_hamiltonian(f, mu, p.x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e.hessian, Eigen::EigenvaluesOnly);
  p.value = e.value;
  p.grad_norm = e.gradient.norm();
  p.spectrum.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
}

// L-BFGS with Armijo backtracking; stops at |g| <= stop.
Eigen::VectorXd lbfgs(const FieldRealization& f, double mu, Eigen::VectorXd x, double stop, std::size_t max_it) {
  constexpr std::size_t kMemory = 10;
  std::deque<Eigen::VectorXd> s_hist;
  std::deque<Eigen::VectorXd> y_hist;
  std::deque<double> rho_hist;
  Eigen::VectorXd g;
  double v = eval_value_gradient(f, mu, x, g);
  Eigen::VectorXd gn;
  for (std::size_t it = 0; it < max_it && g.norm() > stop; ++it) {
    Eigen::VectorXd q = g;
    std::vector<double> a(s_hist.size());
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      a[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= a[i] * y_hist[i];
    }
    double h0 = 1.0 / mu;
    if (!s_hist.empty()) h0 = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    q *= h0;
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double b = rho_hist[i] * y_hist[i].dot(q);
      q += (a[i] - b) * s_hist[i];
    }
    Eigen::VectorXd p = -q;
    double slope = g.dot(p);
    if (!(slope < 0.0)) {
      p = -g * h0;
      slope = g.dot(p);
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }
    double t = 1.0;
    bool ok = false;
    Eigen::VectorXd xn;
    double vn = 0.0;
    for (int ls = 0; ls < 50; ++ls, t *= 0.5) {
      xn = x + t * p;
      vn = eval_value_gradient(f, mu, xn, gn);
      if (vn <= v + 1e-4 * t * slope) {
        ok = true;
        break;
      }
    }
    if (!ok) break;
    Eigen::VectorXd s = xn - x;
    Eigen::VectorXd y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = std::move(xn);
    v = vn;
    g = gn;
  }
  return x;
}

// Newton polish using |eigenvalues| of the Hessian, so the step is a descent
// direction even off the convex region.
Polished newton_polish(const FieldRealization& f, double mu, Eigen::VectorXd x, double tol) {
  Polished out;
  for (int it = 0; it < 50; ++it) {
    const HamiltonianEval e = eval_hamiltonian(f, mu, x);
    const double gn = e.gradient.norm();
    if (gn <= tol) break;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e.hessian);
    const Eigen::VectorXd lam = es.eigenvalues().cwiseAbs().cwiseMax(1e-8);
    const Eigen::VectorXd p = -es.eigenvectors() * ((es.eigenvectors().transpose() * e.gradient).cwiseQuotient(lam));
    const double slope = e.gradient.dot(p);
    double t = 1.0;
    bool moved = false;
    Eigen::VectorXd g;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      const Eigen::VectorXd xn = x + t * p;
      const double vn = eval_value_gradient(f, mu, xn, g);
      const bool armijo = vn <= e.value + 1e-4 * t * slope;
      const bool flat = vn <= e.value + 1e-12 * (1.0 + std::abs(e.value)) && g.norm() < gn;
      if (armijo || flat) {
        x = xn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  out.x = std::move(x);
  fill_spectrum(f, mu, out);
  return out;
}

// Undamped Newton on grad H = 0 with the step length capped; no merit function, so
// every critical point is an attractor. Iterates that run far outside the region
// where critical points live are abandoned.
std::optional<Eigen::VectorXd> newton_root(const FieldRealization& f, double mu, Eigen::VectorXd x, double tol,
                                           double step_cap, double escape_radius, std::size_t max_it) {
  for (std::size_t it = 0; it < max_it; ++it) {
    const HamiltonianEval e = eval_hamiltonian(f, mu, x);
    const double gn = e.gradient.norm();
    if (!std::isfinite(gn)) return std::nullopt;
    if (gn <= tol) return x;
    Eigen::VectorXd p = -e.hessian.partialPivLu().solve(e.gradient);
    if (!p.allFinite()) return std::nullopt;
    const double pn = p.norm();
    if (pn > step_cap) p *= step_cap / pn;
    x += p;
    if (x.norm() > escape_radius) return std::nullopt;
  }
  return std::nullopt;
}

std::size_t count_negative(const std::vector<double>& spectrum) {
  return static_cast<std::size_t>(std::count_if(spectrum.begin(), spectrum.end(), [](double l) { return l < -1e-8; }));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

double search_radius(const Model& model, double mu, std::size_t N, double radius_factor) {
  if (!(mu > 0.0)) throw std::invalid_argument("search_radius: mu must be positive");
  return radius_factor * std::sqrt(static_cast<double>(N)) * std::sqrt(radial_scale(model)) / mu;
}

MinimizeResult minimize(const Model& model, const FieldRealization& field, double mu, std::size_t n_starts,
                        std::uint64_t seed, const SearchOptions& opt) {
  if (n_starts < 1) throw std::invalid_argument("minimize: n_starts must be at least 1");
  const double sn = std::sqrt(static_cast<double>(field.N));
  const double tol = opt.grad_tol * sn;
  const double radius = search_radius(model, mu, field.N, opt.radius_factor);
  std::vector<Polished> ends;
  std::vector<std::size_t> ids;
  double best_gn = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n_starts; ++s) {
    Eigen::VectorXd x = start_point(field.N, radius, mix_seed(seed, s));
    x = lbfgs(field, mu, std::move(x), std::max(tol, 1e-6 * sn), opt.max_iterations);
    Polished p = newton_polish(field, mu, std::move(x), tol);
    best_gn = std::min(best_gn, p.grad_norm);
    if (p.grad_norm <= tol) {
      ends.push_back(std::move(p));
      ids.push_back(s);
    }
  }
  if (ends.empty())
    throw SearchFailure("minimize: no start reached |grad H| <= " + format_double(tol) + " after " +
                        std::to_string(n_starts) + " starts; best |grad H| = " + format_double(best_gn));
  std::size_t b = 0;
  for (std::size_t i = 1; i < ends.size(); ++i)
    if (ends[i].value < ends[b].value) b = i;
  MinimizeResult r;
  r.converged_starts = ends.size();
  for (const Polished& p : ends)
    if ((p.x - ends[b].x).norm() <= opt.agree_tol * sn) ++r.agreeing_starts;
  r.confirmed = r.agreeing_starts >= 3;
  r.point.x = ends[b].x;
  r.point.grad_norm = ends[b].grad_norm;
  r.point.value_per_n = ends[b].value / static_cast<double>(field.N);
  r.point.index = count_negative(ends[b].spectrum);
  r.point.lambda_min = ends[b].spectrum.front();
  r.point.start = ids[b];
  r.hessian_spectrum = std::move(ends[b].spectrum);
  return r;
}

std::vector<CriticalPointRecord> census(const Model& model, const FieldRealization& field, double mu,
                                        std::size_t n_starts, double dedupe_tol, std::uint64_t seed,
                                        const SearchOptions& opt) {
  if (n_starts < 10) throw std::invalid_argument("census: n_starts must be at least 10");
  if (!(dedupe_tol > 0.0)) throw std::invalid_argument("census: dedupe_tol must be positive");
  const double sn = std::sqrt(static_cast<double>(field.N));
  const double radius = search_radius(model, mu, field.N, opt.radius_factor);
  // Critical points are spread as N(0, (radial scale / mu^2) I) since grad X is stationary.
  const double spread = std::sqrt(radial_scale(model)) / mu;
  const double step_cap = spread > 0.0 ? 2.0 * spread : 1.0;
  const double escape = std::max(3.0 * radius, 1.0);
  const double solve_tol = std::min(opt.grad_tol, 1e-11) * sn;
  std::vector<CriticalPointRecord> out;
  for (std::size_t s = 0; s < n_starts; ++s) {
    const Eigen::VectorXd x0 = gaussian_start(field.N, spread, mix_seed(seed, s));
    const auto root = newton_root(field, mu, x0, solve_tol, step_cap, escape, 300);
    if (!root) continue;
    bool dup = false;
    for (const CriticalPointRecord& c : out)
      if ((c.x - *root).norm() <= dedupe_tol * sn) {
        dup = true;
        break;
      }
    if (dup) continue;
    Polished p;
    p.x = *root;
    fill_spectrum(field, mu, p);
    if (!(p.grad_norm <= 1e-9 * sn)) continue;
    CriticalPointRecord c;
    c.x = std::move(p.x);
    c.grad_norm = p.grad_norm;
    c.value_per_n = p.value / static_cast<double>(field.N);
    c.index = count_negative(p.spectrum);
    c.lambda_min = p.spectrum.front();
    c.start = s;
    out.push_back(std::move(c));
  }
  return out;
}

TrialRecord run_trial(const TrialConfig& cfg, std::size_t trial_id) {
  const auto t0 = std::chrono::steady_clock::now();
  TrialRecord r;
  r.trial_id = trial_id;
  r.seed = mix_seed(cfg.seed, trial_id);
  r.N = cfg.N;
  r.K = cfg.K;
  r.mu = cfg.mu;
  r.model = model_id(cfg.model);
  try {
    const PredictionReport pred = predictions(cfg.model, cfg.mu);
    const FieldRealization field = sample_field(cfg.model, cfg.N, cfg.K, r.seed);
    SearchOptions opt;
    opt.grad_tol = cfg.grad_tol;
    MinimizeResult m = minimize(cfg.model, field, cfg.mu, cfg.starts, mix_seed(r.seed, 1), opt);
    r.confirmed = m.confirmed;
    Eigen::VectorXd xs = m.point.x;
    double e = m.point.value_per_n;
    std::vector<double> spec = std::move(m.hessian_spectrum);
    if (cfg.census_starts > 0) {
      r.census = census(cfg.model, field, cfg.mu, cfg.census_starts, cfg.dedupe_tol, mix_seed(r.seed, 2), opt);
      r.census_run = true;
      for (const CriticalPointRecord& c : r.census)
        if (c.value_per_n < e) {
          e = c.value_per_n;
          xs = c.x;
          const HamiltonianEval h = eval_hamiltonian(field, cfg.mu, xs);
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.hessian, Eigen::EigenvaluesOnly);
          spec.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        }
    }
    r.energy_per_n = e;
    r.radius_per_sqrt_n = xs.norm() / std::sqrt(static_cast<double>(cfg.N));
    r.spectrum.N = cfg.N;
    r.spectrum.eigenvalues = std::move(spec);
    r.lambda_min = r.spectrum.lambda_min();
    r.bl_to_prediction =
        bl_distance(empirical_measure(r.spectrum), SemicircleLaw{pred.center, pred.radius}, cfg.bl_resolution);
  } catch (const std::exception& ex) {
    r.status = std::string("error: ") + ex.what();
  }
  r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<TrialRecord> run_trials(const TrialConfig& cfg) {
  std::vector<TrialRecord> out(cfg.trials);
  std::size_t threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  threads = std::min(threads, std::max<std::size_t>(cfg.trials, 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cfg.trials; i = next++) out[i] = run_trial(cfg, i);
  };
  if (threads <= 1) {
    work();
    return out;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  pool.clear();
  return out;
}

TrialSummary aggregate(const std::vector<TrialRecord>& records, const PredictionReport& prediction,
                       const Tolerances& tol) {
  TrialSummary s;
  std::vector<double> energy, radius, lmin, bl, sizes;
  for (const TrialRecord& r : records) {
    if (r.status != "ok") {
      ++s.trials_failed;
      continue;
    }
    ++s.trials_ok;
    energy.push_back(r.energy_per_n);
    radius.push_back(r.radius_per_sqrt_n);
    lmin.push_back(r.lambda_min);
    bl.push_back(r.bl_to_prediction);
    if (r.census_run) sizes.push_back(static_cast<double>(r.census.size()));
  }
  auto add = [&](const std::string& name, const std::vector<double>& v, std::optional<double> pred, double t,
                 bool upper_bound) {
    ObservableSummary o;
    o.name = name;
    o.tolerance = t;
    o.prediction = pred;
    if (!v.empty()) {
      o.mean = mean(v);
      o.se = v.size() > 1 ? standard_error(v) : 0.0;
      if (pred) o.pass = upper_bound ? o.mean <= t : std::abs(o.mean - *pred) <= t;
    }
    s.observables.push_back(o);
  };
  const bool sup = prediction.supercritical;
  add("energy_per_n", energy, prediction.u_star, tol.energy, false);
  add("radius_per_sqrt_n", radius, prediction.rho_star, tol.radius, false);
  add("lambda_min", lmin, sup ? std::optional<double>(prediction.lambda_edge) : std::nullopt, tol.lambda_min, false);
  add("bl_distance", bl, sup ? std::optional<double>(0.0) : std::nullopt, tol.bl, true);
  s.mean_census_size = sizes.empty() ? 0.0 : mean(sizes);
  return s;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const char* const kTrialsCsvHeader =
    "trial_id,seed,N,K,mu,model,energy_per_n,radius_per_sqrt_n,lambda_min,bl_distance,n_critical_points,"
    "wall_time_ms,status";

void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records, bool include_wall_time) {
  os << kTrialsCsvHeader << '\n';
  for (const TrialRecord& r : records) {
    os << r.trial_id << ',' << r.seed << ',' << r.N << ',' << r.K << ',' << format_double(r.mu) << ','
       << csv_field(r.model) << ',' << format_double(r.energy_per_n) << ',' << format_double(r.radius_per_sqrt_n)
       << ',' << format_double(r.lambda_min) << ',' << format_double(r.bl_to_prediction) << ','
       << (r.census_run ? std::to_string(r.census.size()) : std::string()) << ',' << format_double(include_wall_time ? r.wall_time_ms : 0.0)
       << ',' << csv_field(r.status) << '\n';
  }
}

void write_census_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << "trial_id,point_id,start,value_per_n,radius_per_sqrt_n,grad_norm,index,lambda_min\n";
  for (const TrialRecord& r : records) {
    const double sn = std::sqrt(static_cast<double>(r.N));
    for (std::size_t i = 0; i < r.census.size(); ++i) {
      const CriticalPointRecord& c = r.census[i];
      os << r.trial_id << ',' << i << ',' << c.start << ',' << format_double(c.value_per_n) << ','
         << format_double(c.x.norm() / sn) << ',' << format_double(c.grad_norm) << ',' << c.index << ','
         << format_double(c.lambda_min) << '\n';
    }
  }
}

void write_spectrum_histogram_csv(std::ostream& os, const std::vector<TrialRecord>& records,
                                  const SemicircleLaw& prediction, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram: bins must be positive");
  std::vector<double> pooled;
  for (const TrialRecord& r : records)
    if (r.status == "ok") pooled.insert(pooled.end(), r.spectrum.eigenvalues.begin(), r.spectrum.eigenvalues.end());
  double lo = prediction.center - prediction.radius;
  double hi = prediction.center + prediction.radius;
  for (double e : pooled) {
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  const double w = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double e : pooled) {
    auto k = static_cast<std::size_t>((e - lo) / w);
    counts[std::min(k, bins - 1)]++;
  }
  os << "bin_lo,bin_hi,count,density,predicted_density\n";
  const double total = static_cast<double>(std::max<std::size_t>(pooled.size(), 1));
  for (std::size_t k = 0; k < bins; ++k) {
    const double a = lo + w * static_cast<double>(k);
    const double b = k + 1 == bins ? hi : a + w;
    const double pd = (prediction.cdf(b) - prediction.cdf(a)) / (b - a);
    os << format_double(a) << ',' << format_double(b) << ',' << counts[k] << ','
       << format_double(static_cast<double>(counts[k]) / (total * (b - a))) << ',' << format_double(pd) << '\n';
  }
}

}  // namespace landscape
