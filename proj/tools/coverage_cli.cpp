// coverage: run, compare and sweep coverage scenarios.
//
//   coverage run <scenario.json> [--set key.path=value ...]
//   coverage compare <scenario.json>
//   coverage sweep <scenario.json> --param epsilon --values 0.1,0.15,0.3
//   coverage validate
//   coverage export-grid <scenario.json>
//
// Global flags: --seed, --out-dir, --threads.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coverage/config.hpp"
#include "coverage/parallel.hpp"
#include "coverage/sim_engine.hpp"
#include "coverage/trace_io.hpp"
#include "coverage/validation.hpp"

namespace fs = std::filesystem;
using namespace coverage;

namespace {

struct GlobalOptions {
  std::optional<long> seed;
  fs::path out_dir = ".";
  unsigned threads = 1;
};

nlohmann::json scenario_doc(const fs::path& path, const std::vector<std::string>& sets,
                            const GlobalOptions& g) {
  nlohmann::json doc = load_json(path);
  for (const auto& s : sets) apply_override(doc, s);
  if (g.seed) doc["seed"] = *g.seed;
  return doc;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_trace(const fs::path& path, const SimulationTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_trace_csv(out, trace);
}

std::string converged_text(const SimulationTrace& t) {
  return t.summary.converged_at_step ? std::to_string(*t.summary.converged_at_step) : "never";
}

int cmd_run(const fs::path& scenario, const std::vector<std::string>& sets,
            const GlobalOptions& g) {
  const auto cfg = parse_scenario(scenario_doc(scenario, sets, g));
  const auto trace = run(cfg);
  fs::create_directories(g.out_dir);
  write_trace(g.out_dir / "trace.csv", trace);
  write_file(g.out_dir / "summary.json", summary_json(cfg, trace).dump(2) + "\n");
  std::cout << cfg.name << " [" << to_string(cfg.method) << ", " << to_string(cfg.env_mode)
            << "]: steps=" << trace.summary.steps_executed
            << " converged_at=" << converged_text(trace)
            << " H=" << format_number(trace.summary.final_cost_conventional)
            << " l_p=" << format_number(trace.summary.path_length) << '\n';
  return 0;
}

int cmd_compare(const fs::path& scenario, const std::vector<std::string>& sets,
                const GlobalOptions& g) {
  auto doc = scenario_doc(scenario, sets, g);
  doc["method"] = "proposed";
  const auto proposed_cfg = parse_scenario(doc);
  doc["method"] = "lloyd";
  const auto lloyd_cfg = parse_scenario(doc);

  // Both runs start from the same positions; the Lloyd gain is calibrated
  // against the proposed controls at that configuration.
  const Positions init = proposed_cfg.initial.generate(proposed_cfg.seed);
  Simulation prop(proposed_cfg, init);
  Simulation lloyd(lloyd_cfg, init);
  const auto tp = run(prop);
  const auto tl = run(lloyd);

  fs::create_directories(g.out_dir);
  write_trace(g.out_dir / "trace_proposed.csv", tp);
  write_trace(g.out_dir / "trace_lloyd.csv", tl);
  nlohmann::json summary = {
      {"proposed", summary_json(proposed_cfg, tp)},
      {"lloyd", summary_json(lloyd_cfg, tl)},
      {"comparison",
       {{"final_cost_conventional_proposed", tp.summary.final_cost_conventional},
        {"final_cost_conventional_lloyd", tl.summary.final_cost_conventional},
        {"proposed_lower_cost",
         tp.summary.final_cost_conventional < tl.summary.final_cost_conventional},
        {"path_length_proposed", tp.summary.path_length},
        {"path_length_lloyd", tl.summary.path_length}}},
  };
  write_file(g.out_dir / "summary.json", summary.dump(2) + "\n");
  std::cout << "method    final_H          l_p          converged_at\n";
  std::cout << "proposed  " << format_number(tp.summary.final_cost_conventional) << "  "
            << format_number(tp.summary.path_length) << "  " << converged_text(tp) << '\n';
  std::cout << "lloyd     " << format_number(tl.summary.final_cost_conventional) << "  "
            << format_number(tl.summary.path_length) << "  " << converged_text(tl) << '\n';
  return 0;
}

std::vector<std::string> split_values(const std::string& list) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : list) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int cmd_sweep(const fs::path& scenario, const std::vector<std::string>& sets,
              const std::string& param, const std::string& values, unsigned jobs,
              const GlobalOptions& g) {
  const auto base = scenario_doc(scenario, sets, g);
  const auto list = split_values(values);
  if (list.empty()) throw std::runtime_error("sweep: --values is empty");

  std::vector<ScenarioConfig> configs;
  for (const auto& v : list) {
    auto doc = base;
    apply_override(doc, param, v);
    configs.push_back(parse_scenario(doc));
  }
  std::vector<SimulationTrace> traces(configs.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) traces[i] = run(configs[i]);
  } else {
    for (std::size_t start = 0; start < configs.size(); start += jobs) {
      std::vector<std::future<SimulationTrace>> batch;
      for (std::size_t i = start; i < std::min(configs.size(), start + jobs); ++i) {
        batch.push_back(std::async(std::launch::async, [&cfg = configs[i]] { return run(cfg); }));
      }
      for (std::size_t i = 0; i < batch.size(); ++i) traces[start + i] = batch[i].get();
    }
  }

  std::ostringstream table;
  table << param << ",converged_at_step,final_cost_conventional\n";
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& s = traces[i].summary;
    table << list[i] << ',' << (s.converged_at_step ? std::to_string(*s.converged_at_step) : "")
          << ',' << format_number(s.final_cost_conventional) << '\n';
  }
  fs::create_directories(g.out_dir);
  write_file(g.out_dir / "sweep.csv", table.str());
  std::cout << table.str();
  return 0;
}

int cmd_validate() {
  bool all = true;
  for (const auto& r : run_invariant_suite()) {
    std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  (" << r.detail << ")\n";
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

int cmd_export_grid(const fs::path& scenario, const std::vector<std::string>& sets,
                    const GlobalOptions& g) {
  const auto cfg = parse_scenario(scenario_doc(scenario, sets, g));
  const auto env = cfg.environment.build();
  fs::create_directories(g.out_dir);
  std::ofstream out(g.out_dir / "grid.csv", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write grid.csv");
  write_grid_csv(out, env);
  write_file(g.out_dir / "basis.json", environment_json(cfg).dump(2) + "\n");
  std::cout << "wrote " << (g.out_dir / "grid.csv").string() << " (" << env.grid().size()
            << " points, mass " << format_number(env.total_mass()) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent coverage control simulator"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::string out_dir = ".";
  long seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides the scenario)");
  app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--threads", g.threads, "Worker threads for grid loops")->check(CLI::PositiveNumber);

  std::string scenario;
  std::vector<std::string> sets;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--set", sets, "Override a key: key.path=value (repeatable)");
  };

  auto* run_cmd = app.add_subcommand("run", "Run one scenario, write trace.csv and summary.json");
  add_common(run_cmd);
  auto* compare_cmd =
      app.add_subcommand("compare", "Run proposed and Lloyd from identical initial positions");
  add_common(compare_cmd);
  auto* sweep_cmd = app.add_subcommand("sweep", "Run one scenario per parameter value");
  add_common(sweep_cmd);
  std::string param;
  std::string values;
  unsigned jobs = 1;
  sweep_cmd->add_option("--param", param, "Dot path of the swept key")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values")->required();
  sweep_cmd->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  auto* validate_cmd = app.add_subcommand("validate", "Run the runtime invariant suite");
  auto* grid_cmd = app.add_subcommand("export-grid", "Write the density grid and basis layout");
  add_common(grid_cmd);

  CLI11_PARSE(app, argc, argv);
  g.out_dir = out_dir;
  if (*seed_opt) g.seed = seed;
  set_thread_count(g.threads);

  try {
    if (*run_cmd) return cmd_run(scenario, sets, g);
    if (*compare_cmd) return cmd_compare(scenario, sets, g);
    if (*sweep_cmd) return cmd_sweep(scenario, sets, param, values, jobs, g);
    if (*validate_cmd) return cmd_validate();
    if (*grid_cmd) return cmd_export_grid(scenario, sets, g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
