// Per-point agent ranking, the annealed rank weight exp(-rank / lambda) and
// the lambda(t) schedule.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "coverage/environment.hpp"
#include "coverage/types.hpp"

namespace coverage {

/// ranks(k, i) = number of agents strictly closer to grid point k than agent i.
/// Equidistant agents share a rank, so two tied nearest agents both get 0.
class RankTable {
 public:
  RankTable(std::size_t grid_size, std::size_t agents);

  [[nodiscard]] std::size_t grid_size() const noexcept { return grid_size_; }
  [[nodiscard]] std::size_t agents() const noexcept { return agents_; }
  [[nodiscard]] int rank(std::size_t k, std::size_t i) const { return ranks_[i * grid_size_ + k]; }
  void set(std::size_t k, std::size_t i, int r) { ranks_[i * grid_size_ + k] = r; }
  /// Ranks of agent i over the whole grid.
  [[nodiscard]] std::span<const int> column(std::size_t i) const {
    return {ranks_.data() + i * grid_size_, grid_size_};
  }

  friend bool operator==(const RankTable&, const RankTable&) = default;

 private:
  std::size_t grid_size_;
  std::size_t agents_;
  std::vector<int> ranks_;  // agent-major
};

/// Sorts the agent distances at every grid point (O(n log n) per point).
[[nodiscard]] RankTable compute_ranks(std::span<const Point> positions, const Grid& grid);

/// exp(-rank / lambda). Saturates silently to 0 once the exponent underflows,
/// which is exactly the hard-assignment limit. Throws for lambda <= 0.
[[nodiscard]] double h_lambda(int rank, double lambda);

/// Per-point, per-agent assignment weights used by every coverage integral:
/// either h_lambda(rank) or the 0/1 nearest-agent indicator.
class WeightTable {
 public:
  WeightTable(std::size_t grid_size, std::size_t agents);

  static WeightTable annealed(const RankTable& ranks, double lambda);

  [[nodiscard]] std::size_t grid_size() const noexcept { return grid_size_; }
  [[nodiscard]] std::size_t agents() const noexcept { return agents_; }
  [[nodiscard]] double weight(std::size_t k, std::size_t i) const {
    return weights_[i * grid_size_ + k];
  }
  [[nodiscard]] std::span<const double> column(std::size_t i) const {
    return {weights_.data() + i * grid_size_, grid_size_};
  }
  [[nodiscard]] std::span<double> column(std::size_t i) {
    return {weights_.data() + i * grid_size_, grid_size_};
  }

 private:
  std::size_t grid_size_;
  std::size_t agents_;
  std::vector<double> weights_;  // agent-major
};

enum class ScheduleMode { KnownDecay, UnknownWarmup };

struct ScheduleParams {
  ScheduleMode mode = ScheduleMode::KnownDecay;
  double lambda_s = 4.0;
  /// 0 freezes lambda at lambda_s (fixed-temperature runs).
  double lambda_f = 2e-3;
  double alpha = 40.0;
  double warmup_lambda_0 = 0.05;
  double warmup_growth = 1.005;
  double switch_threshold_pct = 1.0;
  /// The warm-up may not end before this many steps.
  long min_warmup_steps = 0;

  void validate() const;
};

/// lambda as a function of the iteration index k.
///
/// Known-decay:    lambda_s * alpha^(-lambda_f k).
/// Unknown-warmup: lambda_0 * growth^k until the learning signal first drops
/// below the threshold at k_s, then lambda(k_s) * alpha^(-lambda_f (k - k_s)).
///
/// The warm-up state machine is single-writer; query it with non-decreasing k.
class LambdaSchedule {
 public:
  enum class State { Warming, Decaying };

  explicit LambdaSchedule(ScheduleParams params);

  double lambda_at(long step, std::optional<double> rcov_signal_pct = std::nullopt);

  [[nodiscard]] const ScheduleParams& params() const noexcept { return params_; }
  [[nodiscard]] State state() const noexcept { return state_; }
  [[nodiscard]] std::optional<long> switch_step() const noexcept { return switch_step_; }

 private:
  ScheduleParams params_;
  State state_;
  std::optional<long> switch_step_;
  double lambda_peak_ = 0.0;
};

}  // namespace coverage
