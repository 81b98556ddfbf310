// Command-line front end for the IRAC decision stack: scenario generation,
// solver runs, Monte-Carlo experiments, the imitation-learning pipeline,
// and image scoring.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "irac/harness.hpp"
#include "irac/ilo.hpp"
#include "irac/image.hpp"
#include "irac/metrics.hpp"

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  irac::require(in.good(), "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw irac::ValidationError(path + ": " + e.what());
  }
  return j;
}

void write_text(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  irac::require(out.good(), "cannot write " + path);
  out << bytes;
}

irac::ScenarioConfig load_scenario(const std::string& path) {
  if (path.empty()) return irac::ScenarioConfig{};  // benchmark defaults
  return irac::scenario_config_from_json(read_json_file(path));
}

void emit(const std::string& out_path, const std::string& bytes) {
  if (out_path.empty())
    std::cout << bytes;
  else
    write_text(out_path, bytes);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRAC edge-collaborative rendering decision stack"};
  app.require_subcommand(1);

  // ---- gen ----------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate an instance JSON from a scenario");
  std::string gen_config, gen_out;
  std::uint64_t gen_run = 0;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--config", gen_config, "scenario JSON (defaults to the benchmark profile)");
  gen->add_option("--run-index", gen_run, "run index within the scenario stream");
  gen->add_option("--seed", gen_seed, "override the scenario seed");
  gen->add_option("-o,--output", gen_out, "output path (stdout when omitted)");

  // ---- solve --------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "run one solver on an instance file");
  std::string solve_name = "pmm", solve_instance, solve_out;
  solve->add_option("--solver", solve_name, "solver name");
  solve->add_option("--instance", solve_instance, "instance JSON file")->required();
  solve->add_option("-o,--output", solve_out, "write the full solution JSON here");

  // ---- compare ------------------------------------------------------
  auto* cmp = app.add_subcommand("compare", "one row per solver on a single instance");
  std::string cmp_instance;
  std::vector<std::string> cmp_solvers = {"pmm", "local_search", "greedy", "rounding",
                                          "max_rate", "user_gs"};
  cmp->add_option("--instance", cmp_instance, "instance JSON file")->required();
  cmp->add_option("--solvers", cmp_solvers, "solver names");

  // ---- experiment ---------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "Monte-Carlo sweep from a config file");
  std::string exp_config;
  exp->add_option("--config", exp_config, "experiment JSON config")->required();

  // ---- case-study ---------------------------------------------------
  auto* cs = app.add_subcommand("case-study", "per-user diagnostic columns on one instance");
  std::string cs_config, cs_out;
  cs->add_option("--config", cs_config, "experiment JSON config")->required();
  cs->add_option("-o,--output", cs_out, "output CSV path (stdout when omitted)");

  // ---- metrics ------------------------------------------------------
  auto* metrics_cmd = app.add_subcommand("metrics", "image metrics");
  auto* score = metrics_cmd->add_subcommand("score", "rendering error between two PPM images");
  std::string score_a, score_b;
  double score_lambda = 0.2;
  score->add_option("--a", score_a, "first image (binary PPM)")->required();
  score->add_option("--b", score_b, "second image (binary PPM)")->required();
  score->add_option("--lambda", score_lambda, "structural weight in [0,1)");

  // ---- ilo ----------------------------------------------------------
  auto* ilo = app.add_subcommand("ilo", "imitation-learning pipeline");
  ilo->require_subcommand(1);

  auto* gd = ilo->add_subcommand("gen-data", "generate demonstration data with the PMM solver");
  std::string gd_config, gd_out, gd_test_out;
  int gd_samples = 1000, gd_split = 0;
  std::optional<std::uint64_t> gd_seed;
  gd->add_option("--config", gd_config, "scenario JSON (defaults to the benchmark profile)");
  gd->add_option("--samples", gd_samples, "number of samples");
  gd->add_option("--seed", gd_seed, "override the scenario seed");
  gd->add_option("-o,--output", gd_out, "dataset output path (JSON lines)")->required();
  gd->add_option("--split", gd_split, "samples kept in --output; the rest go to --test-output");
  gd->add_option("--test-output", gd_test_out, "held-out split output path");

  auto* tr = ilo->add_subcommand("train", "train the collaboration-bit network");
  std::string tr_train, tr_test, tr_out, tr_history;
  irac::TrainConfig tr_cfg;
  tr->add_option("--train", tr_train, "training dataset")->required();
  tr->add_option("--test", tr_test, "test dataset (optional, for history columns)");
  tr->add_option("--epochs", tr_cfg.epochs, "epochs");
  tr->add_option("--lr", tr_cfg.learning_rate, "learning rate");
  tr->add_option("--batch", tr_cfg.batch_size, "batch size");
  tr->add_option("--weight-decay", tr_cfg.weight_decay, "decoupled weight decay");
  tr->add_option("--focal-gamma", tr_cfg.focal_gamma, "focal focusing parameter");
  tr->add_option("--focal-alpha", tr_cfg.focal_alpha, "focal class-balance parameter");
  tr->add_option("--seed", tr_cfg.seed, "init/shuffle seed");
  tr->add_option("-o,--output", tr_out, "model output path")->required();
  tr->add_option("--history", tr_history, "write per-epoch loss/accuracy CSV here");

  auto* inf = ilo->add_subcommand("infer", "run the trained network on an instance file");
  std::string inf_model, inf_instance, inf_out;
  inf->add_option("--model", inf_model, "model file")->required();
  inf->add_option("--instance", inf_instance, "instance JSON file")->required();
  inf->add_option("-o,--output", inf_out, "write the full solution JSON here");

  auto* ev = ilo->add_subcommand("eval", "compare the network against its demonstrations");
  std::string ev_model, ev_data, ev_out;
  int ev_timing = 200;
  ev->add_option("--model", ev_model, "model file")->required();
  ev->add_option("--data", ev_data, "dataset to replay")->required();
  ev->add_option("--timing-subset", ev_timing, "instances re-solved with PMM for timing");
  ev->add_option("-o,--output", ev_out, "write the evaluation JSON here");

  try {
    app.parse(argc, argv);

    if (*gen) {
      irac::ScenarioConfig cfg = load_scenario(gen_config);
      if (gen_seed) cfg.seed = *gen_seed;
      irac::Instance inst = irac::generate_instance(cfg, gen_run);
      emit(gen_out, irac::to_json(inst).dump(2) + "\n");
    } else if (*solve) {
      irac::Instance inst = irac::instance_from_json(read_json_file(solve_instance));
      irac::Solution sol = irac::find_solver(solve_name)(inst);
      if (!solve_out.empty()) write_text(solve_out, irac::to_json(sol).dump(2) + "\n");
      std::string bits;
      for (int b : sol.x) bits += b ? '1' : '0';
      std::printf("solver=%s objective_P1=%s feasible=%d x=%s wall_ms=%s\n",
                  sol.solver_name.c_str(), irac::format_g(sol.objective_P1).c_str(),
                  sol.feasibility.feasible ? 1 : 0, bits.c_str(),
                  irac::format_g(sol.wall_time * 1e3, 4).c_str());
    } else if (*exp) {
      irac::ExperimentConfig cfg = irac::experiment_config_from_json(read_json_file(exp_config));
      irac::ExperimentReport rep = irac::run_experiment(cfg);
      auto paths = irac::write_report_files(rep);
      for (const auto& p : paths) std::printf("wrote %s\n", p.c_str());
      if (rep.feasibility_violations > 0) {
        std::fprintf(stderr, "error: %d infeasible non-edge_gs solutions\n",
                     rep.feasibility_violations);
        return 3;
      }
    } else if (*cs) {
      irac::ExperimentConfig cfg = irac::experiment_config_from_json(read_json_file(cs_config));
      emit(cs_out, irac::case_study(cfg));
    } else if (*score) {
      irac::Image a = irac::read_ppm(score_a);
      irac::Image b = irac::read_ppm(score_b);
      double l1 = irac::rendering_error(a, b, 0.0);
      double s = irac::ssim(a, b);
      double loss = irac::rendering_error(a, b, score_lambda);
      std::printf("l1 %s\nssim %s\ndssim %s\nloss %s\n", irac::format_g(l1).c_str(),
                  irac::format_g(s).c_str(), irac::format_g(1.0 - s).c_str(),
                  irac::format_g(loss).c_str());
    } else if (*cmp) {
      irac::Instance inst = irac::instance_from_json(read_json_file(cmp_instance));
      std::cout << irac::compare_solvers(inst, cmp_solvers);
    } else if (*gd) {
      irac::ScenarioConfig cfg = load_scenario(gd_config);
      if (gd_seed) cfg.seed = *gd_seed;
      irac::Dataset ds = irac::generate_dataset(cfg, gd_samples);
      if (gd_split > 0) {
        irac::require(!gd_test_out.empty(), "ilo gen-data: --split needs --test-output");
        irac::Dataset head, tail;
        head.scenario = tail.scenario = ds.scenario;
        for (std::size_t i = 0; i < ds.size(); ++i)
          (static_cast<int>(i) < gd_split ? head : tail).samples.push_back(ds.samples[i]);
        irac::save_dataset(head, gd_out);
        irac::save_dataset(tail, gd_test_out);
        std::printf("wrote %s (%zu samples) and %s (%zu samples), %d skipped\n", gd_out.c_str(),
                    head.size(), gd_test_out.c_str(), tail.size(), ds.skipped);
      } else {
        irac::save_dataset(ds, gd_out);
        std::printf("wrote %s (%zu samples, %d skipped)\n", gd_out.c_str(), ds.size(), ds.skipped);
      }
    } else if (*tr) {
      irac::Dataset train_set = irac::load_dataset(tr_train);
      irac::Dataset test_set;
      if (!tr_test.empty()) test_set = irac::load_dataset(tr_test);
      auto [model, history] = irac::train(train_set, test_set, tr_cfg);
      irac::save_model(model, tr_out);
      if (!tr_history.empty()) {
        std::string csv = "epoch,train_loss,train_accuracy,test_loss,test_accuracy\n";
        for (std::size_t e = 0; e < history.size(); ++e)
          csv += std::to_string(e + 1) + "," + irac::format_g(history[e].train_loss) + "," +
                 irac::format_g(history[e].train_accuracy) + "," +
                 irac::format_g(history[e].test_loss) + "," +
                 irac::format_g(history[e].test_accuracy) + "\n";
        write_text(tr_history, csv);
      }
      const auto& last = history.back();
      std::printf("wrote %s (final train_acc=%s test_acc=%s)\n", tr_out.c_str(),
                  irac::format_g(last.train_accuracy, 4).c_str(),
                  irac::format_g(last.test_accuracy, 4).c_str());
    } else if (*inf) {
      irac::MlpModel model = irac::load_model(inf_model);
      irac::Instance inst = irac::instance_from_json(read_json_file(inf_instance));
      irac::Solution sol = irac::infer(model, inst);
      if (!inf_out.empty()) write_text(inf_out, irac::to_json(sol).dump(2) + "\n");
      std::string bits;
      for (int b : sol.x) bits += b ? '1' : '0';
      std::printf("solver=ilo objective_P1=%s feasible=%d x=%s wall_ms=%s\n",
                  irac::format_g(sol.objective_P1).c_str(), sol.feasibility.feasible ? 1 : 0,
                  bits.c_str(), irac::format_g(sol.wall_time * 1e3, 4).c_str());
    } else if (*ev) {
      irac::MlpModel model = irac::load_model(ev_model);
      irac::Dataset ds = irac::load_dataset(ev_data);
      irac::IloEvaluation result = irac::ilo_evaluate(model, ds, ev_timing);
      nlohmann::json j = irac::to_json(result);
      if (!ev_out.empty()) write_text(ev_out, j.dump(2) + "\n");
      std::printf("%s\n", j.dump(2).c_str());
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const irac::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const irac::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
