#include "coverage/trace_io.hpp"

#include <cstdio>

namespace coverage {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  if (trace.records.empty()) return;
  const auto& first = trace.records.front();
  const std::size_t n = first.positions.size();
  const std::size_t m = first.a_hat.empty() ? 0 : static_cast<std::size_t>(first.a_hat[0].size());

  out << "step,time,lambda,cost_conventional,cost_proposed,rcov_pct";
  for (std::size_t i = 1; i <= n; ++i) out << ",x_" << i << ",y_" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",ux_" << i << ",uy_" << i;
  for (std::size_t i = 1; i <= first.a_hat.size(); ++i) {
    for (std::size_t j = 1; j <= m; ++j) out << ",a_" << i << '_' << j;
  }
  out << '\n';

  for (const auto& r : trace.records) {
    out << r.step << ',' << format_number(r.time) << ',' << format_number(r.lambda) << ','
        << format_number(r.cost_conventional) << ',' << format_number(r.cost_proposed) << ','
        << format_number(r.rcov_pct);
    for (const auto& p : r.positions) out << ',' << format_number(p.x()) << ',' << format_number(p.y());
    for (const auto& u : r.controls) out << ',' << format_number(u.x()) << ',' << format_number(u.y());
    for (const auto& a : r.a_hat) {
      for (Eigen::Index j = 0; j < a.size(); ++j) out << ',' << format_number(a[j]);
    }
    out << '\n';
  }
}

void write_grid_csv(std::ostream& out, const Environment& env) {
  out << "x,y,phi\n";
  const auto& grid = env.grid();
  const auto phi = env.density();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out << format_number(grid.point(k).x()) << ',' << format_number(grid.point(k).y()) << ','
        << format_number(phi[k]) << '\n';
  }
}

nlohmann::json environment_json(const ScenarioConfig& config) {
  const auto& e = config.environment;
  const auto basis = BasisSet::grid_layout(e.domain, e.cells_x, e.cells_y, e.sigma, e.rho_trunc);
  nlohmann::json means = nlohmann::json::array();
  for (const auto& mu : basis.means()) means.push_back({mu.x(), mu.y()});
  return {
      {"domain",
       {{"lower", {e.domain.lower.x(), e.domain.lower.y()}},
        {"upper", {e.domain.upper.x(), e.domain.upper.y()}},
        {"grid_resolution", e.domain.grid_resolution}}},
      {"basis",
       {{"cells", {e.cells_x, e.cells_y}},
        {"sigma", e.sigma},
        {"rho_trunc", e.rho_trunc},
        {"g_trunc", basis.g_trunc()},
        {"means", means}}},
      {"coeffs", std::vector<double>(e.coeffs.data(), e.coeffs.data() + e.coeffs.size())},
  };
}

nlohmann::json summary_json(const ScenarioConfig& config, const SimulationTrace& trace) {
  const auto& s = trace.summary;
  auto optional = [](const std::optional<long>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {
      {"scenario", config.name},
      {"method", to_string(config.method)},
      {"env_mode", to_string(config.env_mode)},
      {"agents", trace.records.empty() ? 0 : trace.records.front().positions.size()},
      {"epsilon", config.epsilon},
      {"dt", config.dt},
      {"seed", config.seed},
      {"steps_executed", s.steps_executed},
      {"converged_at_step", optional(s.converged_at_step)},
      {"path_length", s.path_length},
      {"path_length_steps", config.path_length_steps},
      {"final_cost_conventional", s.final_cost_conventional},
      {"final_cost_proposed", s.final_cost_proposed},
      {"lloyd_gain", s.lloyd_gain},
      {"lambda_switch_step", optional(s.lambda_switch_step)},
      {"environment", environment_json(config)},
  };
}

}  // namespace coverage
