#include "landscape/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <yaml-cpp/yaml.h>

namespace landscape {

const char* const kThreadsEnv = "LANDSCAPE_THREADS";

ConfigError::ConfigError(const std::string& source, int line, const std::string& what)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + what : source + ": " + what),
      line_(line) {}

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& n, const std::string& what) const {
    const int line = n.IsDefined() && n.Mark().line >= 0 ? n.Mark().line + 1 : 0;
    throw ConfigError(source_, line, what);
  }

  void check_keys(const YAML::Node& map, const std::string& path, const std::set<std::string>& allowed) const {
    if (!map.IsMap()) fail(map, path + " must be a mapping");
    for (const auto& kv : map) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, "unknown key '" + (path.empty() ? key : path + "." + key) + "'");
    }
  }

  template <class T>
  T scalar(const YAML::Node& n, const std::string& path) const {
    if (!n.IsScalar()) fail(n, path + " must be a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, path + " has an invalid value '" + n.Scalar() + "'");
    }
  }

  double positive(const YAML::Node& n, const std::string& path) const {
    const double v = scalar<double>(n, path);
    if (!(v > 0.0) || !std::isfinite(v)) fail(n, path + " must be positive and finite");
    return v;
  }

  double nonnegative(const YAML::Node& n, const std::string& path) const {
    const double v = scalar<double>(n, path);
    if (!(v >= 0.0) || !std::isfinite(v)) fail(n, path + " must be nonnegative and finite");
    return v;
  }

  std::size_t count(const YAML::Node& n, const std::string& path, std::size_t min) const {
    const long long v = scalar<long long>(n, path);
    if (v < static_cast<long long>(min)) fail(n, path + " must be at least " + std::to_string(min));
    return static_cast<std::size_t>(v);
  }

  std::vector<std::size_t> counts(const YAML::Node& n, const std::string& path, std::size_t min) const {
    if (!n.IsSequence() || n.size() == 0) fail(n, path + " must be a nonempty list");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(count(n[i], path + "[" + std::to_string(i) + "]", min));
    return out;
  }

  Model model(const YAML::Node& n) const {
    check_keys(n, "model", {"kind", "c0", "A", "atoms"});
    if (!n["kind"]) fail(n, "model.kind is required (src or lrc)");
    const std::string kind = scalar<std::string>(n["kind"], "model.kind");
    std::vector<Atom> atoms;
    if (n["atoms"]) {
      const YAML::Node a = n["atoms"];
      if (!a.IsSequence()) fail(a, "model.atoms must be a list");
      for (std::size_t i = 0; i < a.size(); ++i) {
        const std::string p = "model.atoms[" + std::to_string(i) + "]";
        check_keys(a[i], p, {"weight", "frequency"});
        if (!a[i]["weight"] || !a[i]["frequency"]) fail(a[i], p + " needs weight and frequency");
        atoms.push_back({positive(a[i]["weight"], p + ".weight"), positive(a[i]["frequency"], p + ".frequency")});
      }
    }
    Model m;
    if (kind == "src") {
      if (n["A"]) fail(n["A"], "model.A applies to kind lrc only");
      SrcCorrelator b;
      b.c0 = n["c0"] ? nonnegative(n["c0"], "model.c0") : 0.0;
      b.atoms = std::move(atoms);
      m = b;
    } else if (kind == "lrc") {
      if (n["c0"]) fail(n["c0"], "model.c0 applies to kind src only");
      LrcStructure d;
      d.slope = n["A"] ? nonnegative(n["A"], "model.A") : 0.0;
      d.atoms = std::move(atoms);
      m = d;
    } else {
      fail(n["kind"], "model.kind must be src or lrc");
    }
    try {
      validate(m);
    } catch (const std::invalid_argument& e) {
      fail(n, e.what());
    }
    return m;
  }

 private:
  std::string source_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg);
  }
  const Reader r(source);
  RunConfig c;
  if (root.IsNull()) return c;
  r.check_keys(root, "", {"model", "mu", "N", "K", "trials", "starts", "census_starts", "seed", "threads",
                          "tolerances", "count", "edge", "replica", "output"});
  if (root["model"]) c.model = r.model(root["model"]);
  if (root["mu"]) c.mu = r.positive(root["mu"], "mu");
  if (root["N"]) c.N = r.count(root["N"], "N", 1);
  if (root["K"]) c.K = r.count(root["K"], "K", 1);
  if (root["trials"]) c.trials = r.count(root["trials"], "trials", 1);
  if (root["starts"]) c.starts = r.count(root["starts"], "starts", 1);
  if (root["census_starts"]) {
    c.census_starts = r.count(root["census_starts"], "census_starts", 0);
    if (c.census_starts > 0 && c.census_starts < 10) r.fail(root["census_starts"], "census_starts must be 0 or at least 10");
  }
  if (root["seed"]) c.seed = r.scalar<std::uint64_t>(root["seed"], "seed");
  if (root["threads"]) c.threads = r.count(root["threads"], "threads", 0);
  if (const YAML::Node t = root["tolerances"]) {
    r.check_keys(t, "tolerances", {"grad_tol", "dedupe_tol", "bl_resolution", "energy", "radius", "lambda_min", "bl"});
    ToleranceBlock& tb = c.tolerances;
    if (t["grad_tol"]) tb.grad_tol = r.positive(t["grad_tol"], "tolerances.grad_tol");
    if (t["dedupe_tol"]) tb.dedupe_tol = r.positive(t["dedupe_tol"], "tolerances.dedupe_tol");
    if (t["bl_resolution"]) {
      tb.bl_resolution = r.positive(t["bl_resolution"], "tolerances.bl_resolution");
      if (tb.bl_resolution > 0.1) r.fail(t["bl_resolution"], "tolerances.bl_resolution must be at most 0.1");
    }
    if (t["energy"]) tb.energy = r.positive(t["energy"], "tolerances.energy");
    if (t["radius"]) tb.radius = r.positive(t["radius"], "tolerances.radius");
    if (t["lambda_min"]) tb.lambda_min = r.positive(t["lambda_min"], "tolerances.lambda_min");
    if (t["bl"]) tb.bl = r.positive(t["bl"], "tolerances.bl");
  }
  if (const YAML::Node n = root["count"]) {
    r.check_keys(n, "count", {"n_grid", "samples"});
    if (n["n_grid"]) c.count.n_grid = r.counts(n["n_grid"], "count.n_grid", 1);
    if (n["samples"]) c.count.samples = r.count(n["samples"], "count.samples", 10);
  }
  if (const YAML::Node n = root["edge"]) {
    r.check_keys(n, "edge", {"n_grid", "trials", "epsilon"});
    if (n["n_grid"]) c.edge.n_grid = r.counts(n["n_grid"], "edge.n_grid", 3);
    if (n["trials"]) c.edge.trials = r.count(n["trials"], "edge.trials", 50);
    if (n["epsilon"]) c.edge.epsilon = r.positive(n["epsilon"], "edge.epsilon");
  }
  if (const YAML::Node n = root["replica"]) {
    r.check_keys(n, "replica", {"convention_factor", "q_max"});
    if (n["convention_factor"]) c.replica.convention_factor = r.positive(n["convention_factor"], "replica.convention_factor");
    if (n["q_max"]) c.replica.q_max = r.positive(n["q_max"], "replica.q_max");
  }
  if (const YAML::Node n = root["output"]) {
    r.check_keys(n, "output", {"dir", "prediction_json", "trials_csv", "summary_json", "census_csv", "histogram_csv",
                               "count_csv", "replica_json", "edge_csv", "wall_time"});
    OutputBlock& o = c.output;
    auto path = [&](const char* key, std::string& dst) {
      if (!n[key]) return;
      dst = r.scalar<std::string>(n[key], std::string("output.") + key);
      if (dst.empty()) r.fail(n[key], std::string("output.") + key + " must not be empty");
    };
    path("dir", o.dir);
    path("prediction_json", o.prediction_json);
    path("trials_csv", o.trials_csv);
    path("summary_json", o.summary_json);
    path("census_csv", o.census_csv);
    path("histogram_csv", o.histogram_csv);
    path("count_csv", o.count_csv);
    path("replica_json", o.replica_json);
    path("edge_csv", o.edge_csv);
    if (n["wall_time"]) o.wall_time = r.scalar<bool>(n["wall_time"], "output.wall_time");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string emit_config(const RunConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  const std::vector<Atom>* atoms = nullptr;
  if (const auto* b = std::get_if<SrcCorrelator>(&c.model)) {
    e << YAML::Key << "kind" << YAML::Value << "src" << YAML::Key << "c0" << YAML::Value << b->c0;
    atoms = &b->atoms;
  } else {
    const auto& d = std::get<LrcStructure>(c.model);
    e << YAML::Key << "kind" << YAML::Value << "lrc" << YAML::Key << "A" << YAML::Value << d.slope;
    atoms = &d.atoms;
  }
  e << YAML::Key << "atoms" << YAML::Value << YAML::BeginSeq;
  for (const Atom& a : *atoms)
    e << YAML::Flow << YAML::BeginMap << YAML::Key << "weight" << YAML::Value << a.weight << YAML::Key << "frequency"
      << YAML::Value << a.frequency << YAML::EndMap;
  e << YAML::EndSeq << YAML::EndMap;
  e << YAML::Key << "mu" << YAML::Value << c.mu;
  e << YAML::Key << "N" << YAML::Value << c.N;
  e << YAML::Key << "K" << YAML::Value << c.K;
  e << YAML::Key << "trials" << YAML::Value << c.trials;
  e << YAML::Key << "starts" << YAML::Value << c.starts;
  e << YAML::Key << "census_starts" << YAML::Value << c.census_starts;
  e << YAML::Key << "seed" << YAML::Value << c.seed;
  e << YAML::Key << "threads" << YAML::Value << c.threads;
  const ToleranceBlock& t = c.tolerances;
  e << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "grad_tol" << YAML::Value << t.grad_tol;
  e << YAML::Key << "dedupe_tol" << YAML::Value << t.dedupe_tol;
  e << YAML::Key << "bl_resolution" << YAML::Value << t.bl_resolution;
  e << YAML::Key << "energy" << YAML::Value << t.energy;
  e << YAML::Key << "radius" << YAML::Value << t.radius;
  e << YAML::Key << "lambda_min" << YAML::Value << t.lambda_min;
  e << YAML::Key << "bl" << YAML::Value << t.bl;
  e << YAML::EndMap;
  e << YAML::Key << "count" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n_grid" << YAML::Value << YAML::Flow << c.count.n_grid;
  e << YAML::Key << "samples" << YAML::Value << c.count.samples << YAML::EndMap;
  e << YAML::Key << "edge" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n_grid" << YAML::Value << YAML::Flow << c.edge.n_grid;
  e << YAML::Key << "trials" << YAML::Value << c.edge.trials;
  e << YAML::Key << "epsilon" << YAML::Value << c.edge.epsilon << YAML::EndMap;
  e << YAML::Key << "replica" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "convention_factor" << YAML::Value << c.replica.convention_factor;
  e << YAML::Key << "q_max" << YAML::Value << c.replica.q_max << YAML::EndMap;
  const OutputBlock& o = c.output;
  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "dir" << YAML::Value << o.dir;
  e << YAML::Key << "prediction_json" << YAML::Value << o.prediction_json;
  e << YAML::Key << "trials_csv" << YAML::Value << o.trials_csv;
  e << YAML::Key << "summary_json" << YAML::Value << o.summary_json;
  e << YAML::Key << "census_csv" << YAML::Value << o.census_csv;
  e << YAML::Key << "histogram_csv" << YAML::Value << o.histogram_csv;
  e << YAML::Key << "count_csv" << YAML::Value << o.count_csv;
  e << YAML::Key << "replica_json" << YAML::Value << o.replica_json;
  e << YAML::Key << "edge_csv" << YAML::Value << o.edge_csv;
  e << YAML::Key << "wall_time" << YAML::Value << o.wall_time;
  e << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

void validate_config(const RunConfig& c) {
  // Structural validation goes through the parser so every rule lives in one place.
  parse_config(emit_config(c), "<config>");
}

std::size_t resolve_threads(const RunConfig& cfg) {
  std::size_t t = cfg.threads;
  if (const char* env = std::getenv(kThreadsEnv); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0) throw ConfigError(kThreadsEnv, 0, "must be a nonnegative integer");
    t = static_cast<std::size_t>(v);
  }
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return t;
}

TrialConfig to_trial_config(const RunConfig& c) {
  TrialConfig t;
  t.model = c.model;
  t.mu = c.mu;
  t.N = c.N;
  t.K = c.K;
  t.trials = c.trials;
  t.starts = c.starts;
  t.census_starts = c.census_starts;
  t.seed = c.seed;
  t.threads = resolve_threads(c);
  t.grad_tol = c.tolerances.grad_tol;
  t.dedupe_tol = c.tolerances.dedupe_tol;
  t.bl_resolution = c.tolerances.bl_resolution;
  return t;
}

Tolerances to_tolerances(const RunConfig& c) {
  return {c.tolerances.energy, c.tolerances.radius, c.tolerances.lambda_min, c.tolerances.bl};
}

}  // namespace landscape
