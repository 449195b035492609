#include "coverage/config.hpp"

#include <fstream>
#include <optional>
#include <set>

namespace coverage {

using nlohmann::json;

namespace {

/// Object view that records which keys were read so leftovers can be reported.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }
  ~Section() = default;
  Section(const Section&) = delete;
  Section& operator=(const Section&) = delete;

  [[nodiscard]] std::string key(std::string_view name) const {
    return path_.empty() ? std::string(name) : path_ + "." + std::string(name);
  }

  const json* find(std::string_view name) {
    used_.insert(std::string(name));
    auto it = node_.find(std::string(name));
    return it == node_.end() ? nullptr : &*it;
  }

  const json& require(std::string_view name) {
    const json* v = find(name);
    if (!v) throw ConfigError(key(name), "missing required key");
    return *v;
  }

  double number(std::string_view name, std::optional<double> fallback = std::nullopt) {
    const json* v = find(name);
    if (!v) {
      if (!fallback) throw ConfigError(key(name), "missing required key");
      return *fallback;
    }
    if (!v->is_number()) throw ConfigError(key(name), "expected a number");
    return v->get<double>();
  }

  long integer(std::string_view name, std::optional<long> fallback = std::nullopt) {
    const json* v = find(name);
    if (!v) {
      if (!fallback) throw ConfigError(key(name), "missing required key");
      return *fallback;
    }
    if (!v->is_number_integer()) throw ConfigError(key(name), "expected an integer");
    return v->get<long>();
  }

  bool boolean(std::string_view name, bool fallback) {
    const json* v = find(name);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(key(name), "expected true or false");
    return v->get<bool>();
  }

  std::string string(std::string_view name, std::optional<std::string> fallback = std::nullopt) {
    const json* v = find(name);
    if (!v) {
      if (!fallback) throw ConfigError(key(name), "missing required key");
      return *fallback;
    }
    if (!v->is_string()) throw ConfigError(key(name), "expected a string");
    return v->get<std::string>();
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!used_.contains(it.key())) throw ConfigError(key(it.key()), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

Point parse_point(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(key, "expected a [x, y] pair");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Eigen::VectorXd parse_vector(const json& v, const std::string& key) {
  if (v.is_number()) return Eigen::VectorXd::Constant(1, v.get<double>());
  if (!v.is_array()) throw ConfigError(key, "expected a number or a list of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(key, "expected a list of numbers");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

/// Dense list, or {"default": x, "values": {"<1-based index>": value}}.
Eigen::VectorXd parse_coeffs(const json& v, const std::string& key, Eigen::Index m) {
  if (v.is_array()) {
    Eigen::VectorXd out = parse_vector(v, key);
    if (out.size() != m) throw ConfigError(key, "expected " + std::to_string(m) + " values");
    return out;
  }
  Section s(v, key);
  Eigen::VectorXd out = Eigen::VectorXd::Constant(m, s.number("default", 0.0));
  if (const json* values = s.find("values")) {
    if (!values->is_object()) throw ConfigError(s.key("values"), "expected an object");
    for (auto it = values->begin(); it != values->end(); ++it) {
      const std::string entry = s.key("values") + "." + it.key();
      std::size_t used = 0;
      long idx = 0;
      try {
        idx = std::stol(it.key(), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != it.key().size() || idx < 1 || idx > m) {
        throw ConfigError(entry, "index must be an integer in 1.." + std::to_string(m));
      }
      if (!it.value().is_number()) throw ConfigError(entry, "expected a number");
      out[idx - 1] = it.value().get<double>();
    }
  }
  s.finish();
  return out;
}

EnvironmentSpec parse_environment(const json& node) {
  Section s(node, "environment");
  EnvironmentSpec env;
  if (const json* d = s.find("domain")) {
    Section ds(*d, "environment.domain");
    if (const json* lo = ds.find("lower")) env.domain.lower = parse_point(*lo, ds.key("lower"));
    if (const json* hi = ds.find("upper")) env.domain.upper = parse_point(*hi, ds.key("upper"));
    env.domain.grid_resolution = static_cast<int>(ds.integer("grid_resolution", 100));
    ds.finish();
  }
  if (const json* b = s.find("basis")) {
    Section bs(*b, "environment.basis");
    if (const json* cells = bs.find("cells")) {
      if (!cells->is_array() || cells->size() != 2 || !(*cells)[0].is_number_integer() ||
          !(*cells)[1].is_number_integer()) {
        throw ConfigError(bs.key("cells"), "expected [cells_x, cells_y]");
      }
      env.cells_x = (*cells)[0].get<int>();
      env.cells_y = (*cells)[1].get<int>();
    }
    env.sigma = bs.number("sigma", env.sigma);
    env.rho_trunc = bs.number("rho_trunc", env.rho_trunc);
    bs.finish();
  }
  env.coeffs = parse_coeffs(s.require("coeffs"), s.key("coeffs"),
                            static_cast<Eigen::Index>(env.cells_x) * env.cells_y);
  s.finish();
  return env;
}

InitialPositions parse_initial(const json& node) {
  Section s(node, "initial_positions");
  InitialPositions init;
  const std::string mode = s.string("mode");
  if (mode == "explicit") {
    init.kind = InitialPositions::Kind::Explicit;
    const json& pts = s.require("points");
    if (!pts.is_array()) throw ConfigError(s.key("points"), "expected a list of [x, y]");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      init.points.push_back(parse_point(pts[i], s.key("points")));
    }
  } else if (mode == "random") {
    init.kind = InitialPositions::Kind::Random;
    const long count = s.integer("count");
    if (count < 1) throw ConfigError(s.key("count"), "must be >= 1");
    init.count = static_cast<std::size_t>(count);
    if (const json* lo = s.find("lower")) init.lower = parse_point(*lo, s.key("lower"));
    if (const json* hi = s.find("upper")) init.upper = parse_point(*hi, s.key("upper"));
  } else {
    throw ConfigError(s.key("mode"), "expected 'explicit' or 'random'");
  }
  s.finish();
  return init;
}

ScheduleParams parse_schedule(const json& node) {
  Section s(node, "schedule");
  ScheduleParams p;
  const std::string mode = s.string("mode", "known-decay");
  if (mode == "known-decay") {
    p.mode = ScheduleMode::KnownDecay;
  } else if (mode == "unknown-warmup") {
    p.mode = ScheduleMode::UnknownWarmup;
  } else {
    throw ConfigError(s.key("mode"), "expected 'known-decay' or 'unknown-warmup'");
  }
  p.lambda_s = s.number("lambda_s", p.lambda_s);
  p.lambda_f = s.number("lambda_f", p.lambda_f);
  p.alpha = s.number("alpha", p.alpha);
  p.warmup_lambda_0 = s.number("warmup_lambda_0", p.warmup_lambda_0);
  p.warmup_growth = s.number("warmup_growth", p.warmup_growth);
  p.switch_threshold_pct = s.number("switch_threshold_pct", p.switch_threshold_pct);
  p.min_warmup_steps = s.integer("min_warmup_steps", p.min_warmup_steps);
  s.finish();
  return p;
}

EstimatorSpec parse_estimator(const json& node) {
  Section s(node, "estimator");
  EstimatorSpec e;
  e.gains.gamma = s.number("gamma", e.gains.gamma);
  e.gains.zeta = s.number("zeta", e.gains.zeta);
  e.gains.a_min = s.number("a_min", e.gains.a_min);
  if (const json* g = s.find("Gamma_diag")) {
    e.gains.Gamma_diag = parse_vector(*g, s.key("Gamma_diag"));
  }
  if (const json* init = s.find("a_hat_init")) e.a_hat_init = parse_vector(*init, s.key("a_hat_init"));
  e.weight.r = s.number("w_r", e.weight.r);
  e.weight.tau_w = s.number("tau_w", e.weight.tau_w);
  s.finish();
  return e;
}

NetworkSpec parse_network(const json& node) {
  Section s(node, "network");
  NetworkSpec n;
  const std::string kind = s.string("kind", "complete");
  if (kind == "complete") {
    n.kind = NetworkSpec::Kind::Complete;
  } else if (kind == "path") {
    n.kind = NetworkSpec::Kind::Path;
  } else if (kind == "explicit") {
    n.kind = NetworkSpec::Kind::Explicit;
    const json& w = s.require("weights");
    if (!w.is_array() || w.empty()) throw ConfigError(s.key("weights"), "expected a matrix");
    const auto rows = static_cast<Eigen::Index>(w.size());
    n.weights.resize(rows, rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Eigen::VectorXd row = parse_vector(w[static_cast<std::size_t>(i)], s.key("weights"));
      if (row.size() != rows) throw ConfigError(s.key("weights"), "matrix must be square");
      n.weights.row(i) = row.transpose();
    }
  } else {
    throw ConfigError(s.key("kind"), "expected 'complete', 'path' or 'explicit'");
  }
  n.weight = s.number("weight", n.weight);
  s.finish();
  return n;
}

Method parse_method(Section& s) {
  const std::string m = s.string("method");
  if (m == "proposed") return Method::Proposed;
  if (m == "lloyd") return Method::Lloyd;
  throw ConfigError(s.key("method"), "expected 'proposed' or 'lloyd'");
}

EnvMode parse_env_mode(Section& s) {
  const std::string m = s.string("env_mode");
  if (m == "known") return EnvMode::Known;
  if (m == "unknown") return EnvMode::Unknown;
  throw ConfigError(s.key("env_mode"), "expected 'known' or 'unknown'");
}

}  // namespace

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", path.string() + ": " + e.what());
  }
}

void apply_override(json& doc, std::string_view dot_path, std::string_view value) {
  if (dot_path.empty()) throw ConfigError("<override>", "empty key path");
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = dot_path.find('.', start);
    const std::string part(dot_path.substr(start, dot - start));
    if (part.empty()) throw ConfigError(std::string(dot_path), "malformed key path");
    if (!node->is_object()) {
      throw ConfigError(std::string(dot_path), "'" + part + "' is not inside an object");
    }
    if (dot == std::string_view::npos) {
      json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
      (*node)[part] = parsed.is_discarded() ? json(std::string(value)) : parsed;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(std::string(assignment), "override must look like key.path=value");
  }
  apply_override(doc, assignment.substr(0, eq), assignment.substr(eq + 1));
}

ScenarioConfig parse_scenario(const json& doc) {
  Section s(doc, "");
  ScenarioConfig cfg;
  cfg.name = s.string("name", cfg.name);
  cfg.method = parse_method(s);
  cfg.env_mode = parse_env_mode(s);
  cfg.epsilon = s.number("epsilon", cfg.epsilon);
  cfg.dt = s.number("dt", cfg.dt);
  cfg.max_steps = s.integer("max_steps", cfg.max_steps);
  cfg.seed = static_cast<std::uint64_t>(s.integer("seed", 1));
  cfg.clamp_to_domain = s.boolean("clamp_to_domain", cfg.clamp_to_domain);
  cfg.path_length_steps = s.integer("path_length_steps", cfg.path_length_steps);
  if (const json* g = s.find("lloyd_gain"); g && !g->is_null()) {
    if (!g->is_number()) throw ConfigError("lloyd_gain", "expected a number or null");
    cfg.lloyd_gain = g->get<double>();
  }
  cfg.environment = parse_environment(s.require("environment"));
  cfg.initial = parse_initial(s.require("initial_positions"));
  if (const json* v = s.find("schedule")) cfg.schedule = parse_schedule(*v);
  if (const json* v = s.find("estimator")) cfg.estimator = parse_estimator(*v);
  if (const json* v = s.find("network")) cfg.network = parse_network(*v);
  if (const json* v = s.find("convergence")) {
    Section c(*v, "convergence");
    cfg.convergence.threshold_pct = c.number("threshold_pct", cfg.convergence.threshold_pct);
    cfg.convergence.window = static_cast<int>(c.integer("window", cfg.convergence.window));
    cfg.convergence.stop = c.boolean("stop", cfg.convergence.stop);
    c.finish();
  }
  s.finish();
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw ConfigError("<scenario>", e.what());
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return parse_scenario(load_json(path));
}

}  // namespace coverage
