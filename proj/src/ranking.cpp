#include "coverage/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coverage/parallel.hpp"

namespace coverage {

RankTable::RankTable(std::size_t grid_size, std::size_t agents)
    : grid_size_(grid_size), agents_(agents), ranks_(grid_size * agents, 0) {}

RankTable compute_ranks(std::span<const Point> positions, const Grid& grid) {
  const std::size_t n = positions.size();
  if (n == 0) throw ValidationError("compute_ranks: at least one agent required");
  RankTable table(grid.size(), n);
  parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> dist(n);
    std::vector<std::size_t> order(n);
    for (std::size_t k = begin; k < end; ++k) {
      const Point& q = grid.point(k);
      for (std::size_t i = 0; i < n; ++i) dist[i] = (q - positions[i]).squaredNorm();
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
      // A tie group shares the rank of its first member: the count of agents
      // strictly closer.
      int group_rank = 0;
      for (std::size_t pos = 0; pos < n; ++pos) {
        if (pos > 0 && dist[order[pos]] > dist[order[pos - 1]]) {
          group_rank = static_cast<int>(pos);
        }
        table.set(k, order[pos], group_rank);
      }
    }
  });
  return table;
}

double h_lambda(int rank, double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("h_lambda: lambda must be positive");
  if (rank < 0) throw ValidationError("h_lambda: rank must be non-negative");
  if (rank == 0) return 1.0;
  return std::exp(-static_cast<double>(rank) / lambda);
}

WeightTable::WeightTable(std::size_t grid_size, std::size_t agents)
    : grid_size_(grid_size), agents_(agents), weights_(grid_size * agents, 0.0) {}

WeightTable WeightTable::annealed(const RankTable& ranks, double lambda) {
  const std::size_t n = ranks.agents();
  std::vector<double> lookup(n);
  for (std::size_t r = 0; r < n; ++r) lookup[r] = h_lambda(static_cast<int>(r), lambda);
  WeightTable table(ranks.grid_size(), n);
  for (std::size_t i = 0; i < n; ++i) {
    auto src = ranks.column(i);
    auto dst = table.column(i);
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = lookup[static_cast<std::size_t>(src[k])];
  }
  return table;
}

void ScheduleParams::validate() const {
  if (!(lambda_s > 0.0)) throw ValidationError("schedule: lambda_s must be positive");
  if (!(lambda_f >= 0.0)) throw ValidationError("schedule: lambda_f must be non-negative");
  if (!(alpha > 1.0)) throw ValidationError("schedule: alpha must exceed 1 so lambda decays");
  if (mode == ScheduleMode::UnknownWarmup) {
    if (!(warmup_lambda_0 > 0.0)) {
      throw ValidationError("schedule: warmup_lambda_0 must be positive");
    }
    if (!(warmup_growth > 0.0)) throw ValidationError("schedule: warmup_growth must be positive");
    if (min_warmup_steps < 0) throw ValidationError("schedule: min_warmup_steps must be >= 0");
  }
}

LambdaSchedule::LambdaSchedule(ScheduleParams params)
    : params_(params),
      state_(params.mode == ScheduleMode::UnknownWarmup ? State::Warming : State::Decaying) {
  params_.validate();
}

double LambdaSchedule::lambda_at(long step, std::optional<double> rcov_signal_pct) {
  const double k = static_cast<double>(step);
  if (params_.mode == ScheduleMode::KnownDecay) {
    return params_.lambda_s * std::pow(params_.alpha, -params_.lambda_f * k);
  }
  if (state_ == State::Warming) {
    const double warm = params_.warmup_lambda_0 * std::pow(params_.warmup_growth, k);
    const bool learned = rcov_signal_pct.has_value() &&
                         *rcov_signal_pct < params_.switch_threshold_pct &&
                         step >= params_.min_warmup_steps;
    if (!learned) return warm;
    state_ = State::Decaying;
    switch_step_ = step;
    lambda_peak_ = warm;
  }
  return lambda_peak_ *
         std::pow(params_.alpha, -params_.lambda_f * static_cast<double>(step - *switch_step_));
}

}  // namespace coverage
