#ifndef IRAC_HARNESS_HPP
#define IRAC_HARNESS_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "irac/baselines.hpp"
#include "irac/common.hpp"
#include "irac/instance.hpp"
#include "irac/pmm.hpp"
#include "irac/solution.hpp"

namespace irac {

// -------------------------------------------------------------------------
// Solver registry
// -------------------------------------------------------------------------

using SolverFn = std::function<Solution(const Instance&)>;

/// Registered solvers by canonical name. local_search derives its scan
/// seed from the instance so paired runs stay reproducible.
inline const std::map<std::string, SolverFn>& solver_registry() {
  static const std::map<std::string, SolverFn> reg = {
      {"user_gs", [](const Instance& i) { return solve_user_gs(i); }},
      {"edge_gs", [](const Instance& i) { return solve_edge_gs(i); }},
      {"max_rate", [](const Instance& i) { return solve_max_rate(i); }},
      {"greedy", [](const Instance& i) { return solve_greedy(i); }},
      {"local_search", [](const Instance& i) { return solve_local_search(i, 1000, i.seed); }},
      {"rounding", [](const Instance& i) { return solve_rounding(i); }},
      {"pmm", [](const Instance& i) { return pmm_solve(i); }},
      {"brute_force", [](const Instance& i) { return solve_brute_force(i); }},
  };
  return reg;
}

inline const SolverFn& find_solver(const std::string& name) {
  auto it = solver_registry().find(name);
  if (it == solver_registry().end()) {
    std::string known;
    for (const auto& [n, fn] : solver_registry()) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError("unknown solver '" + name + "' (known: " + known + ")");
  }
  return it->second;
}

// -------------------------------------------------------------------------
// Experiment configuration
// -------------------------------------------------------------------------

struct ExperimentConfig {
  ScenarioConfig scenario;                       // defaults = benchmark profile
  std::vector<double> power_sweep = {10e-3, 20e-3, 30e-3, 40e-3};
  std::vector<std::string> solvers = {"pmm", "local_search", "greedy",
                                      "rounding", "max_rate", "user_gs"};
  int num_runs = 100;
  std::uint64_t base_seed = 1;
  std::string output_dir = "irac-out";
  bool write_csv = true;
  bool write_json = true;
};

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known = {
      "schema", "scenario", "power_sweep", "power_sweep_mw", "solvers",
      "num_runs", "base_seed", "output_dir", "formats"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool found = false;
    for (const auto& k : known) found |= (it.key() == k);
    require(found, "experiment config: unknown field '" + it.key() + "'");
  }
  ExperimentConfig cfg;
  if (j.contains("scenario")) cfg.scenario = scenario_config_from_json(j["scenario"]);
  if (j.contains("power_sweep")) cfg.power_sweep = j["power_sweep"].get<std::vector<double>>();
  if (j.contains("power_sweep_mw")) {
    cfg.power_sweep.clear();
    for (double mw : j["power_sweep_mw"].get<std::vector<double>>())
      cfg.power_sweep.push_back(mw * 1e-3);
  }
  if (j.contains("solvers")) cfg.solvers = j["solvers"].get<std::vector<std::string>>();
  cfg.num_runs = j.value("num_runs", cfg.num_runs);
  cfg.base_seed = j.value("base_seed", cfg.base_seed);
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  if (j.contains("formats")) {
    cfg.write_csv = cfg.write_json = false;
    for (const auto& f : j["formats"]) {
      if (f == "csv") cfg.write_csv = true;
      else if (f == "json") cfg.write_json = true;
      else throw ValidationError("experiment config: unknown format " + f.dump());
    }
  }
  require(cfg.num_runs >= 1, "experiment config: num_runs must be >= 1");
  require(!cfg.power_sweep.empty(), "experiment config: empty power sweep");
  return cfg;
}

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
  std::vector<std::string> formats;
  if (cfg.write_csv) formats.push_back("csv");
  if (cfg.write_json) formats.push_back("json");
  return {{"schema", "irac-experiment/1"},
          {"scenario", to_json(cfg.scenario)},
          {"power_sweep", cfg.power_sweep},
          {"solvers", cfg.solvers},
          {"num_runs", cfg.num_runs},
          {"base_seed", cfg.base_seed},
          {"output_dir", cfg.output_dir},
          {"formats", formats}};
}

// -------------------------------------------------------------------------
// Experiment execution
// -------------------------------------------------------------------------

struct RunRow {
  int run = 0;
  double power = 0.0;
  std::string solver;
  bool feasible = false;
  double objective_P1 = 0.0;
  double total_loss = 0.0;
  double mean_psnr = 0.0;
  double max_latency = 0.0;
  int selected = 0;
  double wall_time = 0.0;
  std::uint64_t instance_hash = 0;
};

struct Aggregate {
  std::string solver;
  double power = 0.0;
  int runs = 0;
  double mean_total_loss = 0.0, std_total_loss = 0.0;
  double mean_psnr = 0.0, std_psnr = 0.0;
  double mean_max_latency = 0.0;
  double mean_objective_P1 = 0.0;
  double mean_wall_time = 0.0;
  double feasibility_rate = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RunRow> rows;
  std::vector<Aggregate> aggregates;
  int feasibility_violations = 0;  // non-edge_gs infeasible solutions (must be 0)
};

namespace detail {

inline void aggregate_report(ExperimentReport& rep) {
  const auto& cfg = rep.config;
  for (const auto& solver : cfg.solvers)
    for (double P : cfg.power_sweep) {
      Aggregate a;
      a.solver = solver;
      a.power = P;
      std::vector<double> losses, psnrs;
      for (const auto& r : rep.rows) {
        if (r.solver != solver || r.power != P) continue;
        ++a.runs;
        a.mean_total_loss += r.total_loss;
        a.mean_psnr += r.mean_psnr;
        a.mean_max_latency += r.max_latency;
        a.mean_objective_P1 += r.objective_P1;
        a.mean_wall_time += r.wall_time;
        a.feasibility_rate += r.feasible ? 1.0 : 0.0;
        losses.push_back(r.total_loss);
        psnrs.push_back(r.mean_psnr);
      }
      if (a.runs == 0) continue;
      a.mean_total_loss /= a.runs;
      a.mean_psnr /= a.runs;
      a.mean_max_latency /= a.runs;
      a.mean_objective_P1 /= a.runs;
      a.mean_wall_time /= a.runs;
      a.feasibility_rate /= a.runs;
      for (double v : losses) a.std_total_loss += (v - a.mean_total_loss) * (v - a.mean_total_loss);
      for (double v : psnrs) a.std_psnr += (v - a.mean_psnr) * (v - a.mean_psnr);
      a.std_total_loss = std::sqrt(a.std_total_loss / a.runs);
      a.std_psnr = std::sqrt(a.std_psnr / a.runs);
      rep.aggregates.push_back(a);
    }
}

}  // namespace detail

/// Monte-Carlo sweep: per run one shared instance (paired across solvers
/// and the whole power sweep), each solver executed and scored. Runs are
/// parallel; all reported orderings are fixed, so reports are byte stable.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  for (const auto& s : cfg.solvers) find_solver(s);  // fail before any compute
  {
    auto bad = validate_config(cfg.scenario);
    if (!bad.empty()) {
      std::string msg = "run_experiment: invalid scenario:";
      for (const auto& s : bad) msg += "\n  - " + s;
      throw ValidationError(msg);
    }
  }
  ExperimentReport rep;
  rep.config = cfg;
  ScenarioConfig scenario = cfg.scenario;
  scenario.seed = cfg.base_seed;

  const std::size_t cell = cfg.power_sweep.size() * cfg.solvers.size();
  rep.rows.resize(static_cast<std::size_t>(cfg.num_runs) * cell);
  std::vector<int> violations(cfg.num_runs, 0);

  parallel_for(cfg.num_runs, [&](std::size_t run) {
    Instance base = generate_instance(scenario, run);
    std::uint64_t hash = instance_hash(base);
    std::size_t at = run * cell;
    for (double P : cfg.power_sweep) {
      Instance inst = base;
      inst.P = P;
      for (const auto& name : cfg.solvers) {
        Solution sol = find_solver(name)(inst);
        SystemMetrics m = evaluate_solution(inst, sol.x, sol.p);
        RunRow& row = rep.rows[at++];
        row.run = static_cast<int>(run);
        row.power = P;
        row.solver = name;
        row.feasible = sol.feasibility.feasible;
        row.objective_P1 = sol.objective_P1;
        row.total_loss = m.total_loss;
        row.mean_psnr = m.mean_psnr;
        row.max_latency = m.max_latency;
        row.selected = 0;
        for (int b : sol.x) row.selected += b;
        row.wall_time = sol.wall_time;
        row.instance_hash = hash;
        if (!sol.feasibility.feasible && name != "edge_gs") ++violations[run];
      }
    }
  });
  for (int v : violations) rep.feasibility_violations += v;
  detail::aggregate_report(rep);
  return rep;
}

// -------------------------------------------------------------------------
// Report files
// -------------------------------------------------------------------------

namespace detail {

inline std::string csv_escape_hash(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace detail

/// Per-run rows; deterministic bytes (fixed order, 9 significant digits,
/// no timing columns; timings live in the JSON report).
inline std::string runs_csv(const ExperimentReport& rep) {
  std::string out =
      "run,power,solver,feasible,objective_P1,total_loss,mean_psnr,max_latency,selected,"
      "instance_hash\n";
  for (const auto& r : rep.rows) {
    out += std::to_string(r.run) + "," + format_g(r.power) + "," + r.solver + "," +
           (r.feasible ? "1" : "0") + "," + format_g(r.objective_P1) + "," +
           format_g(r.total_loss) + "," + format_g(r.mean_psnr) + "," +
           format_g(r.max_latency) + "," + std::to_string(r.selected) + "," +
           detail::csv_escape_hash(r.instance_hash) + "\n";
  }
  return out;
}

inline std::string summary_csv(const ExperimentReport& rep) {
  std::string out =
      "solver,power,runs,mean_total_loss,std_total_loss,mean_psnr,std_psnr,"
      "mean_max_latency,mean_objective_P1,feasibility_rate\n";
  for (const auto& a : rep.aggregates) {
    out += a.solver + "," + format_g(a.power) + "," + std::to_string(a.runs) + "," +
           format_g(a.mean_total_loss) + "," + format_g(a.std_total_loss) + "," +
           format_g(a.mean_psnr) + "," + format_g(a.std_psnr) + "," +
           format_g(a.mean_max_latency) + "," + format_g(a.mean_objective_P1) + "," +
           format_g(a.feasibility_rate) + "\n";
  }
  return out;
}

inline nlohmann::json to_json(const ExperimentReport& rep) {
  nlohmann::json aggs = nlohmann::json::array();
  for (const auto& a : rep.aggregates)
    aggs.push_back({{"solver", a.solver},
                    {"power", a.power},
                    {"runs", a.runs},
                    {"mean_total_loss", a.mean_total_loss},
                    {"std_total_loss", a.std_total_loss},
                    {"mean_psnr", a.mean_psnr},
                    {"std_psnr", a.std_psnr},
                    {"mean_max_latency", a.mean_max_latency},
                    {"mean_objective_P1", a.mean_objective_P1},
                    {"mean_wall_time", a.mean_wall_time},
                    {"feasibility_rate", a.feasibility_rate}});
  return {{"schema", "irac-report/1"},
          {"config", to_json(rep.config)},
          {"aggregates", aggs},
          {"feasibility_violations", rep.feasibility_violations}};
}

/// Writes runs.csv / summary.csv / report.json into the configured output
/// directory and returns the paths written.
inline std::vector<std::string> write_report_files(const ExperimentReport& rep) {
  namespace fs = std::filesystem;
  fs::create_directories(rep.config.output_dir);
  std::vector<std::string> paths;
  auto emit = [&](const std::string& name, const std::string& bytes) {
    fs::path p = fs::path(rep.config.output_dir) / name;
    std::ofstream out(p, std::ios::binary);
    require(out.good(), "cannot write " + p.string());
    out << bytes;
    paths.push_back(p.string());
  };
  if (rep.config.write_csv) {
    emit("runs.csv", runs_csv(rep));
    emit("summary.csv", summary_csv(rep));
  }
  if (rep.config.write_json) emit("report.json", to_json(rep).dump(2) + "\n");
  return paths;
}

// -------------------------------------------------------------------------
// compare / case study
// -------------------------------------------------------------------------

/// One row per solver on a single instance, for quick head-to-head checks.
inline std::string compare_solvers(const Instance& inst, const std::vector<std::string>& solvers) {
  for (const auto& s : solvers) find_solver(s);
  std::string out = "solver,objective_P1,feasible,selected_users,wall_time_ms\n";
  for (const auto& name : solvers) {
    Solution sol = find_solver(name)(inst);
    std::string sel;
    for (int k = 0; k < inst.num_users(); ++k)
      if (sol.x[k]) sel += (sel.empty() ? "" : " ") + std::to_string(k);
    out += name + "," + format_g(sol.objective_P1) + "," + (sol.feasibility.feasible ? "1" : "0") +
           "," + (sel.empty() ? "-" : sel) + "," + format_g(sol.wall_time * 1e3, 4) + "\n";
  }
  return out;
}

/// Per-user diagnostic on one seeded instance: switching gains, channel
/// gains, and each solver's collaboration bits and transmit powers.
inline std::string case_study(const ExperimentConfig& cfg) {
  for (const auto& s : cfg.solvers) find_solver(s);
  ScenarioConfig scenario = cfg.scenario;
  scenario.seed = cfg.base_seed;
  Instance inst = generate_instance(scenario, 0);
  inst.P = cfg.power_sweep.front();

  std::vector<Solution> sols;
  for (const auto& name : cfg.solvers) sols.push_back(find_solver(name)(inst));

  std::string out = "user,switching_gain,channel_gain";
  for (const auto& name : cfg.solvers) out += ",x_" + name + ",p_" + name;
  out += "\n";
  for (int k = 0; k < inst.num_users(); ++k) {
    out += std::to_string(k) + "," + format_g(inst.users[k].switching_gain) + "," +
           format_g(inst.users[k].channel_gain);
    for (const auto& sol : sols)
      out += "," + std::to_string(sol.x[k]) + "," + format_g(sol.p[k]);
    out += "\n";
  }
  return out;
}

}  // namespace irac

#endif  // IRAC_HARNESS_HPP
