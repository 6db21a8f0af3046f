// Command-line front end: predict, simulate, census, count, replica, lrc-edge, verify.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "landscape/complexity.hpp"
#include "landscape/config.hpp"
#include "landscape/errors.hpp"
#include "landscape/experiments.hpp"
#include "landscape/lrc_hessian.hpp"
#include "landscape/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace landscape;

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kConfig = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string suite;
};

// Round-trip numbers are emitted through the JSON serializer; NaN and inf become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json prediction_json(const Model& m, const PredictionReport& p) {
  json j;
  j["model"] = model_id(m);
  j["kind"] = p.lrc ? "lrc" : "src";
  j["mu"] = p.mu;
  j["threshold"] = p.threshold;
  j["supercritical"] = p.supercritical;
  if (p.rho_star) j["rho_star"] = *p.rho_star;
  if (p.u_star) j["u_star"] = *p.u_star;
  if (p.y_star) j["y_star"] = *p.y_star;
  if (p.psi_max) j["psi_max"] = *p.psi_max;
  j["center"] = p.center;
  j["radius"] = p.radius;
  j["lambda_edge"] = p.lambda_edge;
  if (p.exponent_subcritical) j["exponent_subcritical"] = *p.exponent_subcritical;
  j["m"] = p.m;
  return j;
}

fs::path output_path(const RunConfig& c, const std::string& name) {
  fs::path dir(c.output.dir);
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for " + p.string());
}

int cmd_predict(const RunConfig& c) {
  const PredictionReport p = predictions(c.model, c.mu);
  const json j = prediction_json(c.model, p);
  for (const auto& [k, v] : j.items()) std::cout << k << ": " << v.dump() << "\n";
  const fs::path out = output_path(c, c.output.prediction_json);
  write_file(out, j.dump(2) + "\n");
  std::cout << "wrote " << out.string() << "\n";
  return kOk;
}

int cmd_simulate(const RunConfig& c) {
  const PredictionReport p = predictions(c.model, c.mu);
  const TrialConfig tc = to_trial_config(c);
  const auto records = run_trials(tc);
  const TrialSummary s = aggregate(records, p, to_tolerances(c));

  std::ostringstream csv;
  write_trials_csv(csv, records, c.output.wall_time);
  const fs::path trials = output_path(c, c.output.trials_csv);
  write_file(trials, csv.str());
  std::ostringstream hist;
  write_spectrum_histogram_csv(hist, records, SemicircleLaw{p.center, p.radius});
  const fs::path hpath = output_path(c, c.output.histogram_csv);
  write_file(hpath, hist.str());

  json j;
  j["prediction"] = prediction_json(c.model, p);
  j["trials_ok"] = s.trials_ok;
  j["trials_failed"] = s.trials_failed;
  json obs = json::array();
  bool all_pass = true;
  for (const ObservableSummary& o : s.observables) {
    json e;
    e["name"] = o.name;
    e["mean"] = number(o.mean);
    e["se"] = number(o.se);
    e["prediction"] = o.prediction ? number(*o.prediction) : json(nullptr);
    e["tolerance"] = o.tolerance;
    e["pass"] = o.pass ? json(*o.pass) : json(nullptr);
    if (o.pass && !*o.pass) all_pass = false;
    obs.push_back(e);
    std::cout << o.name << ": " << o.mean << " +- " << o.se;
    if (o.prediction) std::cout << " (prediction " << *o.prediction << ", tol " << o.tolerance << ", "
                                << (*o.pass ? "pass" : "fail") << ")";
    std::cout << "\n";
  }
  j["observables"] = obs;
  if (tc.census_starts > 0) j["mean_census_size"] = s.mean_census_size;
  j["tolerances_note"] = "finite-N tolerances are implementation-calibrated; the limits hold in probability";
  j["all_pass"] = all_pass;
  const fs::path summary = output_path(c, c.output.summary_json);
  write_file(summary, j.dump(2) + "\n");
  std::cout << "trials ok " << s.trials_ok << ", failed " << s.trials_failed << "\nwrote " << trials.string() << ", "
            << hpath.string() << ", " << summary.string() << "\n";
  return kOk;
}

int cmd_census(RunConfig c) {
  if (c.census_starts == 0) c.census_starts = std::max<std::size_t>(10, c.starts);
  const auto records = run_trials(to_trial_config(c));
  std::ostringstream csv;
  write_census_csv(csv, records);
  const fs::path out = output_path(c, c.output.census_csv);
  write_file(out, csv.str());
  std::size_t failed = 0;
  for (const TrialRecord& r : records) {
    if (r.status != "ok") {
      ++failed;
      std::cout << "trial " << r.trial_id << ": " << r.status << "\n";
      continue;
    }
    std::size_t minima = 0;
    for (const auto& p : r.census) minima += p.index == 0;
    std::cout << "trial " << r.trial_id << ": " << r.census.size() << " critical points, " << minima << " minima\n";
  }
  std::cout << "wrote " << out.string() << "\n";
  return failed == records.size() && !records.empty() ? kRuntime : kOk;
}

int cmd_count(const RunConfig& c) {
  const PredictionReport p = predictions(c.model, c.mu);
  std::ostringstream csv;
  csv << "N,samples,log_expected_count,se,expected_count,log_count_per_n\n";
  std::cout << "N        E[Crt_N]        (1/N) log E[Crt_N]\n";
  for (std::size_t n : c.count.n_grid) {
    const LogMeanEstimate e = expected_crt_mc(c.model, c.mu, n, c.count.samples, mix_seed(c.seed, n));
    const double per_n = e.log_mean / static_cast<double>(n);
    csv << n << ',' << c.count.samples << ',' << format_double(e.log_mean) << ',' << format_double(e.se) << ','
        << format_double(std::exp(e.log_mean)) << ',' << format_double(per_n) << '\n';
    std::cout << n << "  " << std::exp(e.log_mean) << "  " << per_n << "\n";
  }
  if (p.exponent_subcritical) std::cout << "limit of (1/N) log E[Crt_N]: " << *p.exponent_subcritical << "\n";
  else std::cout << "limit of E[Crt_N]: 1\n";
  const fs::path out = output_path(c, c.output.count_csv);
  write_file(out, csv.str());
  std::cout << "wrote " << out.string() << "\n";
  return kOk;
}

json replica_solution_json(const ReplicaSolution& s) {
  return json{{"v", s.v},           {"Q", s.Q},
              {"mu_eff", s.mu_eff}, {"edge", s.edge},
              {"residual_1", s.residual_1}, {"residual_2", s.residual_2}};
}

int cmd_replica(const RunConfig& c) {
  const auto* b = std::get_if<SrcCorrelator>(&c.model);
  if (!b) throw ConfigError("<config>", 0, "replica requires model.kind src");
  const ReplicaReport r = replica_solve(*b, c.mu, c.replica.convention_factor, c.replica.q_max);
  json j;
  j["model"] = model_id(c.model);
  j["mu"] = c.mu;
  j["convention_factor"] = r.convention_factor;
  j["symmetric"] = replica_solution_json(r.symmetric);
  json in = json::array();
  for (const auto& s : r.interior) in.push_back(replica_solution_json(s));
  j["interior"] = in;
  j["predicted_edge"] = predictions(c.model, c.mu).lambda_edge;
  std::cout << j.dump(2) << "\n";
  const fs::path out = output_path(c, c.output.replica_json);
  write_file(out, j.dump(2) + "\n");
  std::cout << "wrote " << out.string() << "\n";
  return kOk;
}

int cmd_lrc_edge(const RunConfig& c) {
  const auto* d = std::get_if<LrcStructure>(&c.model);
  if (!d) throw ConfigError("<config>", 0, "lrc-edge requires model.kind lrc");
  std::ostringstream csv;
  csv << "N,trials,epsilon,threshold,exceedances,probability,lambda_min_mean,lambda_min_se\n";
  for (std::size_t n : c.edge.n_grid) {
    const EdgeTailResult r = edge_tail(*d, c.mu, n, c.edge.trials, c.edge.epsilon, mix_seed(c.seed, n));
    csv << n << ',' << r.trials << ',' << format_double(c.edge.epsilon) << ',' << format_double(r.threshold) << ','
        << r.exceedances << ',' << format_double(r.probability) << ',' << format_double(r.lambda_min_mean) << ','
        << format_double(r.lambda_min_se) << '\n';
    std::cout << "N=" << n << ": " << r.exceedances << "/" << r.trials << " below " << r.threshold
              << ", mean lambda_min " << r.lambda_min_mean << " +- " << r.lambda_min_se << "\n";
  }
  const fs::path out = output_path(c, c.output.edge_csv);
  write_file(out, csv.str());
  std::cout << "wrote " << out.string() << "\n";
  return kOk;
}

int cmd_verify(const RunConfig& c, const std::string& suite) {
  const auto results = run_verify(c.seed, suite, &std::cout);
  std::size_t failed = 0;
  for (const auto& r : results) failed += !r.pass;
  std::cout << "\n" << results.size() - failed << "/" << results.size() << " checks passed\n";
  return failed == 0 && !results.empty() ? kOk : kRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landscape complexity experiments for locally isotropic Gaussian fields"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", opt.config, "YAML run configuration (defaults when omitted)");
    sub->add_option("--seed", opt.seed, "override the config seed");
    sub->add_option("-o,--out", opt.out, "override output.dir");
  };
  const std::vector<std::pair<std::string, std::string>> commands{
      {"predict", "closed-form limits for the configured model"},
      {"simulate", "minimize sampled Hamiltonians; trials CSV, summary JSON, spectrum histogram"},
      {"census", "multistart Newton census of critical points"},
      {"count", "Monte Carlo E[Crt_N] over count.n_grid"},
      {"replica", "replica equations for an SRC model"},
      {"lrc-edge", "edge-tail experiment for the conditional LRC Hessian"},
      {"verify", "run the invariant suite"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub);
    if (name == "verify") sub->add_option("--suite", opt.suite, "run one suite only");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  RunConfig cfg;
  try {
    if (!opt.config.empty()) cfg = load_config(opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    if (!opt.out.empty()) cfg.output.dir = opt.out;
    resolve_threads(cfg);
    if (cmd == "predict") return cmd_predict(cfg);
    if (cmd == "simulate") return cmd_simulate(cfg);
    if (cmd == "census") return cmd_census(cfg);
    if (cmd == "count") return cmd_count(cfg);
    if (cmd == "replica") return cmd_replica(cfg);
    if (cmd == "lrc-edge") return cmd_lrc_edge(cfg);
    if (cmd == "verify") return cmd_verify(cfg, opt.suite);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kRuntime;
}
