// Time stepping, metrics and convergence detection for both coverage methods
// in known and unknown environments.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coverage/adaptive_estimator.hpp"
#include "coverage/baseline_lloyd.hpp"
#include "coverage/environment.hpp"
#include "coverage/global_controller.hpp"
#include "coverage/network.hpp"
#include "coverage/ranking.hpp"

namespace coverage {

enum class Method { Proposed, Lloyd };
enum class EnvMode { Known, Unknown };

[[nodiscard]] const char* to_string(Method m) noexcept;
[[nodiscard]] const char* to_string(EnvMode m) noexcept;

struct EnvironmentSpec {
  Domain domain;
  int cells_x = 5;
  int cells_y = 5;
  double sigma = 0.1;
  double rho_trunc = 0.2;
  Eigen::VectorXd coeffs;

  [[nodiscard]] Environment build() const;
};

struct InitialPositions {
  enum class Kind { Explicit, Random };
  Kind kind = Kind::Explicit;
  Positions points;       // explicit
  std::size_t count = 0;  // random
  Point lower{0.0, 0.0};  // random sampling box
  Point upper{1.0, 1.0};

  /// Explicit points, or `count` uniform draws from [lower, upper] (mt19937_64).
  [[nodiscard]] Positions generate(std::uint64_t seed) const;
};

struct EstimatorSpec {
  EstimatorGains gains;
  DataWeight weight;
  Eigen::VectorXd a_hat_init = Eigen::VectorXd::Constant(1, 400.0);  // length 1 broadcasts
};

struct NetworkSpec {
  enum class Kind { Complete, Path, Explicit };
  Kind kind = Kind::Complete;
  double weight = 1.0;
  Eigen::MatrixXd weights;  // explicit

  [[nodiscard]] NetworkGraph build(std::size_t n) const;
};

struct ConvergenceSpec {
  double threshold_pct = 0.1;
  int window = 10;
  bool stop = false;
};

struct ScenarioConfig {
  std::string name = "scenario";
  EnvironmentSpec environment;
  InitialPositions initial;
  Method method = Method::Proposed;
  EnvMode env_mode = EnvMode::Known;
  double epsilon = 0.1;
  double dt = 0.01;
  long max_steps = 1400;
  ScheduleParams schedule;
  EstimatorSpec estimator;
  NetworkSpec network;
  /// Lloyd gain k; unset calibrates it so both methods start with the same
  /// largest per-agent speed.
  std::optional<double> lloyd_gain;
  ConvergenceSpec convergence;
  /// false: leaving the domain is an error instead of a clamp.
  bool clamp_to_domain = true;
  std::uint64_t seed = 1;
  long path_length_steps = 1400;

  void validate() const;
};

struct StepRecord {
  long step = 0;
  double time = 0.0;
  double lambda = 0.0;
  double cost_conventional = 0.0;
  double cost_proposed = 0.0;
  double rcov_pct = 0.0;  // of cost_conventional versus the previous record
  Positions positions;
  std::vector<Point> controls;  // applied from this state
  std::vector<Eigen::VectorXd> a_hat;  // unknown mode only
};

struct TraceSummary {
  long steps_executed = 0;
  std::optional<long> converged_at_step;
  double path_length = 0.0;
  double final_cost_conventional = 0.0;
  double final_cost_proposed = 0.0;
  double lloyd_gain = 0.0;
  std::optional<long> lambda_switch_step;
};

struct SimulationTrace {
  std::vector<StepRecord> records;  // steps executed + 1
  TraceSummary summary;
};

/// RCOV = |f_next - f_prev| / |f_prev| * 100.
[[nodiscard]] double rcov_pct(double previous, double current) noexcept;

/// Summed per-step displacement of all agents over the first
/// min(max_steps, records - 1) steps.
[[nodiscard]] double path_length(const SimulationTrace& trace, long max_steps = 1400);

/// Gain k matching max_i |k W_i^voronoi| to max_i |epsilon W_i^annealed|
/// for the given configuration and density; epsilon when every Lloyd agent
/// is stalled.
[[nodiscard]] double calibrate_lloyd_gain(std::span<const Point> positions, const Grid& grid,
                                          std::span<const double> density, double lambda,
                                          double epsilon);
[[nodiscard]] double calibrate_lloyd_gain(std::span<const Point> positions, const Grid& grid,
                                          const BasisTable& table,
                                          std::span<const Eigen::VectorXd> a_hats,
                                          double lambda, double epsilon);

/// One simulation. step() advances by dt:
///   weights <- ranks (proposed) or Voronoi cells (lloyd)
///   controls from the true density (known) or each agent's estimate (unknown)
///   unknown: sense phi(p_i), accumulate data, adapt a_hat from last round's
///            neighbour snapshots, project
///   p += u dt, clamp, advance lambda.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig config);
  /// Start from explicit positions instead of the configured initializer.
  Simulation(ScenarioConfig config, Positions initial);

  void step();
  /// Metrics and controls of the current state.
  [[nodiscard]] StepRecord record() const;

  [[nodiscard]] const ScenarioConfig& config() const noexcept { return config_; }
  [[nodiscard]] const Environment& environment() const noexcept { return env_; }
  [[nodiscard]] const SwarmState& state() const noexcept { return state_; }
  [[nodiscard]] const std::vector<EstimatorState>& estimators() const noexcept {
    return estimators_;
  }
  [[nodiscard]] const NetworkGraph& network() const noexcept { return network_; }
  [[nodiscard]] const LambdaSchedule& schedule() const noexcept { return schedule_; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] double lloyd_gain() const noexcept { return lloyd_gain_; }
  /// Whether convergence detection is active (unknown mode waits for learning).
  [[nodiscard]] bool convergence_armed() const noexcept;

 private:
  struct Evaluation {
    WeightTable weights;
    std::vector<Point> controls;
  };
  const Evaluation& evaluate() const;
  [[nodiscard]] double mean_estimate_norm() const;

  ScenarioConfig config_;
  Environment env_;
  NetworkGraph network_;
  LambdaSchedule schedule_;
  SwarmState state_;
  std::vector<EstimatorState> estimators_;
  double lambda_;
  double lloyd_gain_;
  mutable std::optional<Evaluation> cache_;
};

[[nodiscard]] SimulationTrace run(const ScenarioConfig& config);
[[nodiscard]] SimulationTrace run(Simulation& sim);

}  // namespace coverage
