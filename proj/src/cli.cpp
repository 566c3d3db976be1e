/*
 * Copyright (C) 2026 mapf-replan contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#include "mapf/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mapf/conflicts.hpp"
#include "mapf/dataset.hpp"
#include "mapf/errors.hpp"
#include "mapf/eval.hpp"
#include "mapf/executor.hpp"
#include "mapf/instance.hpp"
#include "mapf/kvconfig.hpp"
#include "mapf/parallel.hpp"
#include "mapf/planner.hpp"

namespace mapf {

namespace {

int normalize_jobs(int jobs)
{
  return jobs <= 0 ? hardware_jobs() : jobs;
}

struct PlanArgs
{
  std::string map_path;
  std::string instance_path;
  std::string out_path;
  int agents = 0;
  std::uint64_t seed = 0;
  double timeout_s = PlannerConfig{}.timeout_s;
  std::int64_t node_limit = PlannerConfig{}.low_level_expansion_limit;
};

void run_plan(const PlanArgs& args)
{
  const GridMap map = load_map_file(args.map_path);
  MapfInstance instance;
  if (!args.instance_path.empty()) {
    instance = load_instance_file(args.instance_path, map);
  } else {
    if (args.agents < 1)
      throw InvalidInput("plan needs --agents (or --instance)");
    std::cerr << "seeds: instance=" << args.seed << "\n";
    instance = generate_instance(map, args.agents, args.seed);
  }
  PlannerConfig cfg;
  cfg.timeout_s = args.timeout_s;
  cfg.low_level_expansion_limit = args.node_limit;
  const PlanResult result = solve_1robust(instance, cfg);
  if (!result.ok)
    throw PlannerError(result.failure_reason);
  if (!validate_solution(instance, result.solution).empty())
    throw PlannerError("solver produced a conflicting solution");
  save_solution_file(args.out_path, result.solution);
  const CostSummary costs = cost_summary(result.solution);
  std::cout << "soc_s: " << format_double(costs.soc) << "\n"
            << "makespan_s: " << format_double(costs.makespan) << "\n"
            << "high_level_expanded: " << result.stats.high_level_expanded << "\n"
            << "low_level_expanded: " << result.stats.low_level_expanded << "\n";
}

struct SimulateArgs
{
  std::string map_path;
  std::string sol_path;
  std::string trace_path;
  std::optional<std::uint64_t> obstacle_seed;
  std::optional<double> replan_t;
  std::uint64_t jitter_seed = 0;
  double jitter_max_s = 0.0;
  double timeout_s = PlannerConfig{}.timeout_s;
  std::int64_t node_limit = PlannerConfig{}.low_level_expansion_limit;
};

void run_simulate(const SimulateArgs& args)
{
  ScenarioConfig cfg;
  cfg.map = load_map_file(args.map_path);
  cfg.solution = load_solution_file(args.sol_path, cfg.map);
  cfg.planner.timeout_s = args.timeout_s;
  cfg.planner.low_level_expansion_limit = args.node_limit;
  if (args.obstacle_seed) {
    cfg.obstacle = sample_obstacle(cfg.solution, *args.obstacle_seed);
    std::cerr << "seeds: obstacle=" << *args.obstacle_seed << "\n";
    std::cerr << "obstacle: vertex=" << cfg.obstacle->vertex << " appear_s="
              << format_ticks(cfg.obstacle->appear) << " disappear_s="
              << format_ticks(cfg.obstacle->disappear) << "\n";
  }
  if (args.replan_t)
    cfg.replan_time = seconds_to_ticks(*args.replan_t);
  if (args.jitter_max_s > 0.0) {
    cfg.jitter.seed = args.jitter_seed;
    cfg.jitter.max_extra = seconds_to_ticks(args.jitter_max_s);
    std::cerr << "seeds: jitter=" << args.jitter_seed << "\n";
  }
  const ScenarioResult result = run_scenario(cfg);
  if (!args.trace_path.empty())
    write_text_atomic(args.trace_path, to_trace_text(result.trace));
  if (result.failed)
    throw SimulationError(result.failure_reason);
  std::cout << "executed_soc_s: " << format_ticks(result.executed_soc) << "\n"
            << "executed_makespan_s: " << format_ticks(result.makespan) << "\n"
            << "occupancy_violations: " << result.occupancy_violations << "\n";
  if (result.replan_tick) {
    std::cout << "replan_t_s: " << format_ticks(*result.replan_tick) << "\n"
              << "replan_runtime_s: " << format_double(result.replan_runtime_s) << "\n"
              << "unfinished_at_replan: " << result.unfinished_at_replan << "\n"
              << "overhead_adjusted_soc_s: "
              << format_double(overhead_adjusted_soc(result)) << "\n";
  }
}

struct GenArgs
{
  std::string config_path;
  std::string out_path = "dataset.csv";
  std::string skip_path;
  int jobs = 1;
};

void run_gen_dataset(const GenArgs& args)
{
  const KvConfig kv = KvConfig::load(args.config_path);
  GenerationConfig cfg = parse_generation_config(kv);
  cfg.jobs = normalize_jobs(args.jobs);
  std::cerr << "seeds: dataset=" << cfg.seed << "\n";
  const DatasetResult result = generate_dataset(cfg);
  write_csv(args.out_path, result.records);
  const std::string skip_path =
    args.skip_path.empty() ? args.out_path + ".skipped" : args.skip_path;
  write_skip_log(skip_path, result.skipped);
  std::cerr << "records: " << result.records.size()
            << " skipped: " << result.skipped.size() << "\n";
  std::cout << args.out_path << "\n";
}

struct TrainArgs
{
  std::string data_path;
  std::string out_path;
  std::string history_path;
  TrainConfig cfg;
};

void run_train(const TrainArgs& args)
{
  const std::vector<LabeledRecord> records = read_csv(args.data_path);
  std::vector<FeatureVector> xs;
  std::vector<double> ys;
  for (const LabeledRecord& rec : records) {
    xs.push_back(rec.features);
    ys.push_back(rec.y);
  }
  std::cerr << "seeds: train=" << args.cfg.seed << "\n";
  const TrainResult result = train(xs, ys, args.cfg);
  result.model.save(args.out_path);
  if (!args.history_path.empty()) {
    std::string text = "epoch,train_loss,val_loss\n";
    for (std::size_t e = 0; e < result.history.train_loss.size(); ++e) {
      text += std::to_string(e);
      text += ',';
      text += format_double(result.history.train_loss[e]);
      text += ',';
      text += format_double(result.history.val_loss[e]);
      text += '\n';
    }
    write_text_atomic(args.history_path, text);
  }
  std::cout << "epochs: " << result.history.train_loss.size() << "\n"
            << "best_epoch: " << result.history.best_epoch << "\n"
            << "best_val_loss_scaled: "
            << format_double(
                 result.history.val_loss[static_cast<std::size_t>(
                   result.history.best_epoch)])
            << "\n"
            << "optimizer_steps: " << result.history.steps << "\n";
}

struct EvaluateArgs
{
  std::string data_path;
  std::string model_path;
  std::string out_dir;
  double tau = 1.0;
  int importance_repeats = 5;
  std::uint64_t importance_seed = 0;
  int jobs = 1;
};

void run_evaluate(const EvaluateArgs& args)
{
  const std::vector<LabeledRecord> records = read_csv(args.data_path);
  const MlpModel model = MlpModel::load(args.model_path);
  const int jobs = normalize_jobs(args.jobs);
  const DecisionReport report = savings_report(records, model, args.tau, jobs);
  std::vector<double> importance;
  if (args.importance_repeats > 0 && !records.empty()) {
    std::vector<FeatureVector> xs;
    std::vector<double> ys;
    for (const LabeledRecord& rec : records) {
      xs.push_back(rec.features);
      ys.push_back(rec.y);
    }
    std::cerr << "seeds: importance=" << args.importance_seed << "\n";
    importance = permutation_importance(
      model, xs, ys, args.importance_repeats, args.importance_seed, jobs);
  }
  write_report_files(args.out_dir, report, records, importance);
  std::cout << report_text(report);
}

struct ImportanceArgs
{
  std::string data_path;
  std::string model_path;
  std::string out_path = "importance.csv";
  int repeats = 5;
  std::uint64_t seed = 0;
  int jobs = 1;
};

void run_importance(const ImportanceArgs& args)
{
  const std::vector<LabeledRecord> records = read_csv(args.data_path);
  const MlpModel model = MlpModel::load(args.model_path);
  std::vector<FeatureVector> xs;
  std::vector<double> ys;
  for (const LabeledRecord& rec : records) {
    xs.push_back(rec.features);
    ys.push_back(rec.y);
  }
  std::cerr << "seeds: importance=" << args.seed << "\n";
  const std::vector<double> importance = permutation_importance(
    model, xs, ys, args.repeats, args.seed, normalize_jobs(args.jobs));
  std::string text = "feature,mae_increase_s\n";
  for (std::size_t f = 0; f < importance.size(); ++f) {
    text += feature_names()[f];
    text += ',';
    text += format_double(importance[f]);
    text += '\n';
  }
  write_text_atomic(args.out_path, text);
  std::cout << args.out_path << "\n";
}

struct ReproArgs
{
  std::string config_path;
  std::string out_dir;
  int jobs = 1;
};

/// Chains generation, split, training, and evaluation off one config so the
/// whole experiment regenerates from a single command.
void run_repro(const ReproArgs& args)
{
  const KvConfig kv = KvConfig::load(args.config_path);
  GenerationConfig gen = parse_generation_config(kv);
  const int jobs = normalize_jobs(args.jobs);
  gen.jobs = jobs;

  const double train_fraction = kv.get_double_or("train_fraction", 0.7);
  const std::uint64_t split_seed = kv.get_u64_or("split_seed", 0);
  TrainConfig tc;
  tc.seed = kv.get_u64_or("train_seed", 0);
  tc.max_epochs = static_cast<int>(kv.get_int_or("train_epochs", tc.max_epochs));
  tc.batch = static_cast<int>(kv.get_int_or("train_batch", tc.batch));
  tc.patience = static_cast<int>(kv.get_int_or("train_patience", tc.patience));
  tc.val_split = kv.get_double_or("train_val_split", tc.val_split);
  tc.jobs = jobs;
  const double tau = kv.get_double_or("tau", 1.0);
  const int importance_repeats =
    static_cast<int>(kv.get_int_or("importance_repeats", 5));
  const std::uint64_t importance_seed = kv.get_u64_or("importance_seed", 0);
  std::cerr << "seeds: dataset=" << gen.seed << " split=" << split_seed
            << " train=" << tc.seed << " importance=" << importance_seed << "\n";

  std::filesystem::create_directories(args.out_dir);
  const std::string base = args.out_dir + "/";

  std::cerr << "generating dataset\n";
  const DatasetResult data = generate_dataset(gen);
  write_csv(base + "dataset.csv", data.records);
  write_skip_log(base + "skipped.txt", data.skipped);
  std::cerr << "records: " << data.records.size() << " skipped: "
            << data.skipped.size() << "\n";

  const auto [train_records, test_records] =
    split_dataset(data.records, train_fraction, split_seed);
  write_csv(base + "train.csv", train_records);
  write_csv(base + "test.csv", test_records);

  std::vector<FeatureVector> train_x;
  std::vector<double> train_y;
  for (const LabeledRecord& rec : train_records) {
    train_x.push_back(rec.features);
    train_y.push_back(rec.y);
  }
  std::cerr << "training on " << train_records.size() << " records\n";
  const TrainResult trained = train(train_x, train_y, tc);
  trained.model.save(base + "model.txt");

  const DecisionReport report = savings_report(test_records, trained.model, tau, jobs);
  std::vector<double> importance;
  if (importance_repeats > 0 && !test_records.empty()) {
    std::vector<FeatureVector> test_x;
    std::vector<double> test_y;
    for (const LabeledRecord& rec : test_records) {
      test_x.push_back(rec.features);
      test_y.push_back(rec.y);
    }
    importance = permutation_importance(
      trained.model, test_x, test_y, importance_repeats, importance_seed, jobs);
  }
  write_report_files(args.out_dir, report, test_records, importance);
  std::cout << report_text(report);
}

}  // namespace

int run_cli(int argc, char** argv)
{
  CLI::App app{"Multi-agent pathfinding execution toolkit: optimal 1-robust "
               "planning, dependency-graph execution with dynamic obstacles, and "
               "learned replanning-benefit prediction"};
  app.require_subcommand(1);

  PlanArgs plan_args;
  CLI::App* plan_cmd = app.add_subcommand("plan", "Solve one instance and write the solution");
  plan_cmd->add_option("--map", plan_args.map_path, "map file (movingai grid)")->required();
  plan_cmd->add_option("--agents", plan_args.agents, "agent count for a generated instance");
  plan_cmd->add_option("--seed", plan_args.seed, "instance seed");
  plan_cmd->add_option("--instance", plan_args.instance_path, "instance file instead of --agents/--seed");
  plan_cmd->add_option("--out", plan_args.out_path, "solution output path")->required();
  plan_cmd->add_option("--timeout-s", plan_args.timeout_s, "planner wall-clock budget in seconds");
  plan_cmd->add_option("--node-limit", plan_args.node_limit, "low-level expansion budget");

  SimulateArgs sim_args;
  std::uint64_t sim_obstacle_seed = 0;
  double sim_replan_t = 0.0;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Execute a solution through one scenario");
  sim_cmd->add_option("--map", sim_args.map_path, "map file (movingai grid)")->required();
  sim_cmd->add_option("--sol", sim_args.sol_path, "solution file from plan")->required();
  CLI::Option* obs_opt = sim_cmd->add_option("--obstacle-seed", sim_obstacle_seed, "sample a dynamic obstacle with this seed");
  CLI::Option* rep_opt = sim_cmd->add_option("--replan-t", sim_replan_t, "replan trigger time in seconds");
  sim_cmd->add_option("--trace", sim_args.trace_path, "write the event trace here");
  sim_cmd->add_option("--jitter-seed", sim_args.jitter_seed, "duration jitter seed (testing aid)");
  sim_cmd->add_option("--jitter-max-s", sim_args.jitter_max_s, "max extra duration per action in seconds");
  sim_cmd->add_option("--timeout-s", sim_args.timeout_s, "replanner wall-clock budget in seconds");
  sim_cmd->add_option("--node-limit", sim_args.node_limit, "replanner low-level expansion budget");

  GenArgs gen_args;
  CLI::App* gen_cmd = app.add_subcommand("gen-dataset", "Generate the labeled experiment corpus");
  gen_cmd->add_option("--config", gen_args.config_path, "flat key=value generation config")->required();
  gen_cmd->add_option("--out", gen_args.out_path, "dataset CSV output path");
  gen_cmd->add_option("--skipped", gen_args.skip_path, "skip-log path (default <out>.skipped)");
  gen_cmd->add_option("--jobs", gen_args.jobs, "worker threads (0 = hardware)");

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "Fit the replanning-benefit regressor");
  train_cmd->add_option("--data", train_args.data_path, "training CSV")->required();
  train_cmd->add_option("--out", train_args.out_path, "model output path")->required();
  train_cmd->add_option("--seed", train_args.cfg.seed, "training seed");
  train_cmd->add_option("--epochs", train_args.cfg.max_epochs, "epoch cap");
  train_cmd->add_option("--batch", train_args.cfg.batch, "mini-batch size");
  train_cmd->add_option("--patience", train_args.cfg.patience, "early-stopping patience in epochs");
  train_cmd->add_option("--val-split", train_args.cfg.val_split, "held-out validation fraction");
  train_cmd->add_option("--history", train_args.history_path, "write per-epoch losses here");
  train_cmd->add_option("--jobs", train_args.cfg.jobs, "worker threads (0 = hardware)");

  EvaluateArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "Write the decision report and figure data");
  eval_cmd->add_option("--data", eval_args.data_path, "test CSV")->required();
  eval_cmd->add_option("--model", eval_args.model_path, "model file")->required();
  eval_cmd->add_option("--out-dir", eval_args.out_dir, "report directory")->required();
  eval_cmd->add_option("--tau", eval_args.tau, "decision threshold in seconds");
  eval_cmd->add_option("--importance-repeats", eval_args.importance_repeats, "shuffles per feature (0 skips importances)");
  eval_cmd->add_option("--importance-seed", eval_args.importance_seed, "importance shuffle seed");
  eval_cmd->add_option("--jobs", eval_args.jobs, "worker threads (0 = hardware)");

  ImportanceArgs imp_args;
  CLI::App* imp_cmd = app.add_subcommand("importance", "Write permutation feature importances");
  imp_cmd->add_option("--data", imp_args.data_path, "test CSV")->required();
  imp_cmd->add_option("--model", imp_args.model_path, "model file")->required();
  imp_cmd->add_option("--out", imp_args.out_path, "importance CSV output path");
  imp_cmd->add_option("--repeats", imp_args.repeats, "shuffles per feature");
  imp_cmd->add_option("--seed", imp_args.seed, "shuffle seed");
  imp_cmd->add_option("--jobs", imp_args.jobs, "worker threads (0 = hardware)");

  ReproArgs repro_args;
  CLI::App* repro_cmd = app.add_subcommand("repro", "Run generate, split, train, evaluate off one config");
  repro_cmd->add_option("--config", repro_args.config_path, "flat key=value experiment config")->required();
  repro_cmd->add_option("--out-dir", repro_args.out_dir, "artifact directory")->required();
  repro_cmd->add_option("--jobs", repro_args.jobs, "worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0)
      return app.exit(e);
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (plan_cmd->parsed()) {
      run_plan(plan_args);
    } else if (sim_cmd->parsed()) {
      if (*obs_opt)
        sim_args.obstacle_seed = sim_obstacle_seed;
      if (*rep_opt)
        sim_args.replan_t = sim_replan_t;
      run_simulate(sim_args);
    } else if (gen_cmd->parsed()) {
      run_gen_dataset(gen_args);
    } else if (train_cmd->parsed()) {
      run_train(train_args);
    } else if (eval_cmd->parsed()) {
      run_evaluate(eval_args);
    } else if (imp_cmd->parsed()) {
      run_importance(imp_args);
    } else if (repro_cmd->parsed()) {
      run_repro(repro_args);
    }
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const PlannerError& e) {
    std::cerr << "planner error: " << e.what() << "\n";
    return 3;
  } catch (const SimulationError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 4;
  } catch (const ModelError& e) {
    std::cerr << "training error: " << e.what() << "\n";
    return 5;
  }
  return 0;
}

}  // namespace mapf
