// Output formats.
//
// Trace CSV, one row per record, header row first:
//   step, time [s], lambda, cost_conventional, cost_proposed, rcov_pct,
//   x_1, y_1, ..., x_n, y_n            positions
//   ux_1, uy_1, ..., ux_n, uy_n        controls applied from that state
//   a_1_1, ..., a_1_m, ..., a_n_m      estimates (unknown mode only)
// Agent and basis indices are 1-based. Floats carry 9 significant digits.
//
// Grid CSV: x, y, phi for every grid point in grid order.

#pragma once

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "coverage/sim_engine.hpp"

namespace coverage {

[[nodiscard]] std::string format_number(double v);

void write_trace_csv(std::ostream& out, const SimulationTrace& trace);
void write_grid_csv(std::ostream& out, const Environment& env);

/// Basis layout and coefficients, enough to rebuild phi or phi_hat.
[[nodiscard]] nlohmann::json environment_json(const ScenarioConfig& config);
[[nodiscard]] nlohmann::json summary_json(const ScenarioConfig& config,
                                          const SimulationTrace& trace);

}  // namespace coverage
