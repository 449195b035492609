#include "coverage/sim_engine.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "coverage/parallel.hpp"

namespace coverage {

const char* to_string(Method m) noexcept {
  return m == Method::Proposed ? "proposed" : "lloyd";
}

const char* to_string(EnvMode m) noexcept { return m == EnvMode::Known ? "known" : "unknown"; }

Environment EnvironmentSpec::build() const {
  return Environment(domain, BasisSet::grid_layout(domain, cells_x, cells_y, sigma, rho_trunc),
                     coeffs);
}

Positions InitialPositions::generate(std::uint64_t seed) const {
  if (kind == Kind::Explicit) return points;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(lower.x(), upper.x());
  std::uniform_real_distribution<double> uy(lower.y(), upper.y());
  Positions out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    out.emplace_back(x, y);
  }
  return out;
}

NetworkGraph NetworkSpec::build(std::size_t n) const {
  switch (kind) {
    case Kind::Complete:
      return NetworkGraph::complete(n, weight);
    case Kind::Path:
      return NetworkGraph::path(n, weight);
    case Kind::Explicit:
      if (static_cast<std::size_t>(weights.rows()) != n) {
        throw ValidationError("network: explicit weight matrix does not match agent count");
      }
      return NetworkGraph(weights);
  }
  throw ValidationError("network: unknown kind");
}

void ScenarioConfig::validate() const {
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (max_steps < 0) throw ValidationError("max_steps must be non-negative");
  if (lloyd_gain && !(*lloyd_gain > 0.0)) throw ValidationError("lloyd_gain must be positive");
  if (convergence.window < 1) throw ValidationError("convergence.window must be >= 1");
  schedule.validate();
  if (initial.kind == InitialPositions::Kind::Explicit ? initial.points.empty()
                                                       : initial.count == 0) {
    throw ValidationError("initial_positions: at least one agent required");
  }
  if (env_mode == EnvMode::Known && schedule.mode == ScheduleMode::UnknownWarmup &&
      method == Method::Proposed) {
    throw ValidationError("schedule: warm-up mode needs an unknown environment");
  }
  if (env_mode == EnvMode::Unknown) {
    const auto m = static_cast<Eigen::Index>(environment.cells_x) * environment.cells_y;
    const auto& init = estimator.a_hat_init;
    if (init.size() != 1 && init.size() != m) {
      throw ValidationError("estimator.a_hat_init must be a scalar or one value per basis");
    }
    if ((init.array() < estimator.gains.a_min).any()) {
      throw ValidationError("estimator.a_hat_init must not be below a_min");
    }
    estimator.gains.validate(static_cast<std::size_t>(m));
  }
}

double rcov_pct(double previous, double current) noexcept {
  if (previous == 0.0) return current == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(current - previous) / std::abs(previous) * 100.0;
}

double path_length(const SimulationTrace& trace, long max_steps) {
  if (trace.records.empty()) throw ValidationError("path_length: empty trace");
  const auto steps = std::min<long>(max_steps, static_cast<long>(trace.records.size()) - 1);
  double total = 0.0;
  for (long k = 0; k < steps; ++k) {
    const auto& a = trace.records[static_cast<std::size_t>(k)].positions;
    const auto& b = trace.records[static_cast<std::size_t>(k + 1)].positions;
    for (std::size_t i = 0; i < a.size(); ++i) total += (b[i] - a[i]).norm();
  }
  return total;
}

namespace {

double max_norm(const std::vector<Point>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, x.norm());
  return m;
}

double gain_ratio(double proposed_max, double lloyd_max, double epsilon) {
  if (lloyd_max == 0.0 || proposed_max == 0.0) return epsilon;
  return proposed_max / lloyd_max;
}

Eigen::VectorXd broadcast(const Eigen::VectorXd& v, Eigen::Index m) {
  return v.size() == 1 ? Eigen::VectorXd::Constant(m, v[0]) : v;
}

}  // namespace

double calibrate_lloyd_gain(std::span<const Point> positions, const Grid& grid,
                            std::span<const double> density, double lambda, double epsilon) {
  const auto annealed = WeightTable::annealed(compute_ranks(positions, grid), lambda);
  const auto terms = coverage_terms(positions, grid, density, annealed);
  const auto raw = lloyd_control(positions, grid, density, voronoi_assign(positions, grid), 1.0);
  return gain_ratio(epsilon * max_norm(terms.w), max_norm(raw), epsilon);
}

double calibrate_lloyd_gain(std::span<const Point> positions, const Grid& grid,
                            const BasisTable& table, std::span<const Eigen::VectorXd> a_hats,
                            double lambda, double epsilon) {
  const auto annealed = WeightTable::annealed(compute_ranks(positions, grid), lambda);
  const auto assignment = voronoi_assign(positions, grid);
  double prop = 0.0;
  double lloyd = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const auto phi_hat = table.combine(a_hats[i]);
    prop = std::max(prop, (epsilon * weighted_moment(positions, grid, phi_hat, annealed, i)).norm());
    lloyd = std::max(lloyd, lloyd_control(positions, grid, phi_hat, assignment, 1.0)[i].norm());
  }
  return gain_ratio(prop, lloyd, epsilon);
}

Simulation::Simulation(ScenarioConfig config)
    : Simulation(config, config.initial.generate(config.seed)) {}

Simulation::Simulation(ScenarioConfig config, Positions initial)
    : config_(std::move(config)),
      env_(config_.environment.build()),
      network_(config_.network.build(initial.size())),
      schedule_(config_.schedule) {
  config_.validate();
  if (initial.empty()) throw ValidationError("simulation: at least one agent required");
  for (const auto& p : initial) {
    if (!env_.domain().contains(p)) {
      throw ValidationError("simulation: initial position outside the domain");
    }
  }
  state_.positions = std::move(initial);
  lambda_ = schedule_.lambda_at(0);

  if (config_.env_mode == EnvMode::Unknown) {
    if (!network_.connected()) throw ValidationError("network: graph must be connected");
    const auto m = static_cast<Eigen::Index>(env_.basis().size());
    const Eigen::VectorXd init = broadcast(config_.estimator.a_hat_init, m);
    estimators_.assign(state_.positions.size(), EstimatorState::initial(init));
  }

  if (config_.lloyd_gain) {
    lloyd_gain_ = *config_.lloyd_gain;
  } else if (config_.env_mode == EnvMode::Known) {
    lloyd_gain_ = calibrate_lloyd_gain(state_.positions, env_.grid(), env_.density(), lambda_,
                                       config_.epsilon);
  } else {
    std::vector<Eigen::VectorXd> a_hats;
    for (const auto& e : estimators_) a_hats.push_back(e.a_hat);
    lloyd_gain_ = calibrate_lloyd_gain(state_.positions, env_.grid(), env_.basis_table(), a_hats,
                                       lambda_, config_.epsilon);
  }
}

bool Simulation::convergence_armed() const noexcept {
  if (config_.env_mode == EnvMode::Known) return true;
  if (config_.method == Method::Proposed) {
    return schedule_.state() == LambdaSchedule::State::Decaying;
  }
  return state_.time >= config_.estimator.weight.tau_w;
}

const Simulation::Evaluation& Simulation::evaluate() const {
  if (cache_) return *cache_;
  const auto& grid = env_.grid();
  const auto& P = state_.positions;
  const std::size_t n = P.size();
  const bool proposed = config_.method == Method::Proposed;

  std::optional<VoronoiAssignment> assignment;
  WeightTable weights = [&] {
    if (proposed) return WeightTable::annealed(compute_ranks(P, grid), lambda_);
    assignment = voronoi_assign(P, grid);
    return assignment->indicator();
  }();

  std::vector<Point> controls(n, Point::Zero());
  if (config_.env_mode == EnvMode::Known) {
    if (proposed) {
      const auto terms = coverage_terms(P, grid, env_.density(), weights);
      for (std::size_t i = 0; i < n; ++i) controls[i] = config_.epsilon * terms.w[i];
    } else {
      controls = lloyd_control(P, grid, env_.density(), *assignment, lloyd_gain_);
    }
  } else {
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const auto& a_hat = estimators_[i].a_hat;
        if (proposed) {
          controls[i] = estimated_control(P, grid, env_.basis_table(), a_hat, weights, i,
                                          config_.epsilon);
        } else {
          const auto phi_hat = env_.basis_table().combine(a_hat);
          controls[i] = lloyd_control(P, grid, phi_hat, *assignment, lloyd_gain_)[i];
        }
      }
    });
  }
  cache_ = Evaluation{std::move(weights), std::move(controls)};
  return *cache_;
}

double Simulation::mean_estimate_norm() const {
  double s = 0.0;
  for (const auto& e : estimators_) s += e.a_hat.norm();
  return estimators_.empty() ? 0.0 : s / static_cast<double>(estimators_.size());
}

void Simulation::step() {
  const Evaluation& eval = evaluate();
  const auto& grid = env_.grid();
  const std::size_t n = state_.positions.size();
  const double dt = config_.dt;

  for (std::size_t i = 0; i < n; ++i) {
    if (!eval.controls[i].allFinite()) {
      std::ostringstream msg;
      msg << "non-finite control for agent " << i + 1 << " at step " << state_.step;
      throw std::runtime_error(msg.str());
    }
  }

  std::optional<double> learning_signal;
  if (config_.env_mode == EnvMode::Unknown) {
    const double before = mean_estimate_norm();
    std::vector<Eigen::VectorXd> snapshot;
    snapshot.reserve(n);
    for (const auto& e : estimators_) snapshot.push_back(e.a_hat);
    const double w_t = config_.estimator.weight.at(state_.time);
    const double f_gain =
        config_.method == Method::Proposed ? config_.epsilon : lloyd_gain_;
    const auto& P = state_.positions;

    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      std::vector<double> l(n);
      for (std::size_t i = begin; i < end; ++i) {
        auto& est = estimators_[i];
        const Eigen::VectorXd k_p = eval_basis(env_.basis(), env_.domain(), P[i]);
        accumulate_data(est, k_p, k_p.dot(env_.coeffs()), w_t, dt);
        const auto F = compute_F(P, grid, env_.basis_table(), eval.weights, i, f_gain);
        for (std::size_t j = 0; j < n; ++j) l[j] = network_.weight(i, j);
        const auto pre = pre_adaptation(est, F, snapshot, l, config_.estimator.gains);
        project_and_step(est, pre, config_.estimator.gains, dt);
      }
    });
    learning_signal = rcov_pct(before, mean_estimate_norm());
  }

  for (std::size_t i = 0; i < n; ++i) {
    Point next = state_.positions[i] + dt * eval.controls[i];
    if (config_.clamp_to_domain) {
      next = env_.domain().clamp(next);
    } else if (!env_.domain().contains(next)) {
      std::ostringstream msg;
      msg << "agent " << i + 1 << " left the domain at step " << state_.step;
      throw std::runtime_error(msg.str());
    }
    state_.positions[i] = next;
  }
  state_.step += 1;
  state_.time = static_cast<double>(state_.step) * dt;
  lambda_ = schedule_.lambda_at(state_.step, learning_signal);
  cache_.reset();
}

StepRecord Simulation::record() const {
  const Evaluation& eval = evaluate();
  const auto& grid = env_.grid();
  StepRecord r;
  r.step = state_.step;
  r.time = state_.time;
  r.lambda = lambda_;
  r.positions = state_.positions;
  r.controls = eval.controls;
  r.cost_conventional = cost_conventional(state_.positions, grid, env_.density());
  r.cost_proposed =
      config_.method == Method::Proposed
          ? weighted_cost(state_.positions, grid, env_.density(), eval.weights)
          : cost_proposed(state_.positions, grid, env_.density(), lambda_);
  for (const auto& e : estimators_) r.a_hat.push_back(e.a_hat);
  return r;
}

SimulationTrace run(const ScenarioConfig& config) {
  Simulation sim(config);
  return run(sim);
}

SimulationTrace run(Simulation& sim) {
  const auto& cfg = sim.config();
  SimulationTrace trace;
  trace.records.push_back(sim.record());
  int below = 0;
  for (long s = 0; s < cfg.max_steps; ++s) {
    sim.step();
    StepRecord rec = sim.record();
    rec.rcov_pct = rcov_pct(trace.records.back().cost_conventional, rec.cost_conventional);
    trace.records.push_back(std::move(rec));
    if (!trace.summary.converged_at_step && sim.convergence_armed()) {
      below = trace.records.back().rcov_pct < cfg.convergence.threshold_pct ? below + 1 : 0;
      if (below >= cfg.convergence.window) {
        trace.summary.converged_at_step = sim.state().step - cfg.convergence.window + 1;
        if (cfg.convergence.stop) break;
      }
    }
  }
  auto& sum = trace.summary;
  sum.steps_executed = static_cast<long>(trace.records.size()) - 1;
  sum.path_length = path_length(trace, cfg.path_length_steps);
  sum.final_cost_conventional = trace.records.back().cost_conventional;
  sum.final_cost_proposed = trace.records.back().cost_proposed;
  sum.lloyd_gain = sim.lloyd_gain();
  sum.lambda_switch_step = sim.schedule().switch_step();
  return trace;
}

}  // namespace coverage
