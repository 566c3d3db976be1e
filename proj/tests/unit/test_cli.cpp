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

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "doctest.h"
#include "mapf/cli.hpp"
#include "test_util.hpp"

using namespace mapf;

namespace {

struct CliRun
{
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::initializer_list<std::string> args)
{
  std::vector<std::string> store{"mapf_replan"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  argv.reserve(store.size());
  for (std::string& s : store)
    argv.push_back(s.data());

  CliRun run;
  {
    mapf::test::CaptureStreams capture;
    run.code = run_cli(static_cast<int>(argv.size()), argv.data());
    run.out = capture.out();
    run.err = capture.err();
  }
  return run;
}

std::string open_map_8x8()
{
  std::string text = "type octile\nheight 8\nwidth 8\nmap\n";
  for (int y = 0; y < 8; ++y)
    text += "........\n";
  return text;
}

}  // namespace

TEST_CASE("usage problems exit with code 1")
{
  CHECK(cli({}).code == 1);
  CHECK(cli({"no-such-command"}).code == 1);
  const CliRun missing = cli({"plan", "--out", "x.sol"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("usage error") != std::string::npos);

  const CliRun help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("plan") != std::string::npos);
  CHECK(help.out.find("simulate") != std::string::npos);
}

TEST_CASE("missing files exit with code 2")
{
  mapf::test::TempDir dir;
  CHECK(cli({"plan", "--map", dir.file("absent.map"), "--agents", "1", "--out",
             dir.file("x.sol")})
          .code == 2);
  CHECK(cli({"train", "--data", dir.file("absent.csv"), "--out", dir.file("m.txt")})
          .code == 2);
  CHECK(cli({"gen-dataset", "--config", dir.file("absent.cfg")}).code == 2);
}

TEST_CASE("plan then simulate reproduces the planned cost")
{
  mapf::test::TempDir dir;
  mapf::test::write_file(dir.file("open.map"),
                         "type octile\nheight 4\nwidth 4\nmap\n....\n....\n....\n....\n");
  const std::string sol = dir.file("open.sol");

  const CliRun plan = cli({"plan", "--map", dir.file("open.map"), "--agents", "2",
                           "--seed", "4", "--out", sol});
  REQUIRE(plan.code == 0);
  CHECK(plan.out.find("soc_s: ") == 0);
  CHECK(plan.err.find("seeds: instance=4") != std::string::npos);
  REQUIRE(std::filesystem::exists(sol));

  const std::string planned_soc = plan.out.substr(7, plan.out.find('\n') - 7);
  const CliRun sim = cli({"simulate", "--map", dir.file("open.map"), "--sol", sol,
                          "--trace", dir.file("run.trace")});
  REQUIRE(sim.code == 0);
  CHECK(sim.out.find("executed_soc_s: " + planned_soc + "\n") == 0);
  CHECK(sim.out.find("occupancy_violations: 0") != std::string::npos);
  CHECK(std::filesystem::exists(dir.file("run.trace")));

  const CliRun no_agents =
    cli({"plan", "--map", dir.file("open.map"), "--out", dir.file("y.sol")});
  CHECK(no_agents.code == 1);
  CHECK(no_agents.err.find("invalid input") != std::string::npos);
}

TEST_CASE("an unsolvable instance exits with the planner code")
{
  mapf::test::TempDir dir;
  mapf::test::write_file(dir.file("tiny.map"),
                         "type octile\nheight 1\nwidth 3\nmap\n...\n");
  mapf::test::write_file(dir.file("swap.txt"), "agents 2\n0 0 2 0\n2 0 0 0\n");
  const CliRun run =
    cli({"plan", "--map", dir.file("tiny.map"), "--instance", dir.file("swap.txt"),
         "--node-limit", "2000", "--out", dir.file("x.sol")});
  CHECK(run.code == 3);
  CHECK(run.err.find("planner error") != std::string::npos);
}

TEST_CASE("a failing replan during simulation exits with the scenario code")
{
  mapf::test::TempDir dir;
  mapf::test::write_file(dir.file("open.map"),
                         "type octile\nheight 4\nwidth 4\nmap\n....\n....\n....\n....\n");
  // Diagonal crossing: both agents are still six seconds from their goals
  // when the replan triggers, so the zero-budget replanner must fail.
  mapf::test::write_file(dir.file("cross.txt"), "agents 2\n0 0 3 3\n3 0 0 3\n");
  const std::string sol = dir.file("cross.sol");
  REQUIRE(cli({"plan", "--map", dir.file("open.map"), "--instance",
               dir.file("cross.txt"), "--out", sol})
            .code == 0);
  const CliRun run = cli({"simulate", "--map", dir.file("open.map"), "--sol", sol,
                          "--replan-t", "0.5", "--node-limit", "0"});
  CHECK(run.code == 4);
  CHECK(run.err.find("scenario error: replanning failed") != std::string::npos);
}

TEST_CASE("the dataset, training and evaluation commands chain together")
{
  mapf::test::TempDir dir;
  mapf::test::write_file(dir.file("open.map"), open_map_8x8());
  mapf::test::write_file(dir.file("gen.cfg"),
                         "seed = 5\n"
                         "instances_per_count = 3\n"
                         "obstacle_seeds = 2\n"
                         "replan_seeds = 2\n"
                         "map.open = " + dir.file("open.map") + "\n"
                         "map.open.agents = 2\n");

  const std::string data = dir.file("data.csv");
  const CliRun gen = cli({"gen-dataset", "--config", dir.file("gen.cfg"), "--out", data});
  REQUIRE(gen.code == 0);
  CHECK(gen.out == data + "\n");
  REQUIRE(std::filesystem::exists(data));
  CHECK(std::filesystem::exists(data + ".skipped"));

  const std::string threaded = dir.file("data2.csv");
  REQUIRE(cli({"gen-dataset", "--config", dir.file("gen.cfg"), "--out", threaded,
               "--jobs", "3"})
            .code == 0);
  CHECK(mapf::test::read_file(threaded) == mapf::test::read_file(data));

  const std::string model = dir.file("model.txt");
  const CliRun train = cli({"train", "--data", data, "--out", model, "--batch", "4",
                            "--epochs", "8", "--patience", "4", "--history",
                            dir.file("history.csv")});
  REQUIRE(train.code == 0);
  CHECK(train.out.find("epochs: ") == 0);
  CHECK(train.out.find("best_epoch: ") != std::string::npos);
  REQUIRE(std::filesystem::exists(model));
  CHECK(mapf::test::read_file(dir.file("history.csv")).rfind(
          "epoch,train_loss,val_loss\n", 0) == 0);

  const CliRun eval = cli({"evaluate", "--data", data, "--model", model, "--out-dir",
                           dir.file("report"), "--tau", "0.5",
                           "--importance-repeats", "1"});
  REQUIRE(eval.code == 0);
  CHECK(eval.out.rfind("records: ", 0) == 0);
  CHECK(std::filesystem::exists(dir.file("report") + "/report.txt"));
  CHECK(std::filesystem::exists(dir.file("report") + "/fig_pred_vs_true.csv"));

  const CliRun imp = cli({"importance", "--data", data, "--model", model, "--out",
                          dir.file("imp.csv"), "--repeats", "1"});
  REQUIRE(imp.code == 0);
  const std::string imp_text = mapf::test::read_file(dir.file("imp.csv"));
  CHECK(imp_text.rfind("feature,mae_increase_s\n", 0) == 0);
  std::size_t newlines = 0;
  for (char ch : imp_text)
    newlines += ch == '\n';
  CHECK(newlines == 43);
}

TEST_CASE("repro runs end to end and is byte-reproducible")
{
  mapf::test::TempDir dir;
  mapf::test::write_file(dir.file("open.map"), open_map_8x8());
  mapf::test::write_file(dir.file("exp.cfg"),
                         "seed = 5\n"
                         "instances_per_count = 3\n"
                         "obstacle_seeds = 2\n"
                         "replan_seeds = 2\n"
                         "map.open = " + dir.file("open.map") + "\n"
                         "map.open.agents = 2\n"
                         "train_fraction = 0.7\n"
                         "train_epochs = 8\n"
                         "train_batch = 4\n"
                         "train_patience = 4\n"
                         "tau = 0.5\n"
                         "importance_repeats = 1\n");

  const CliRun first = cli({"repro", "--config", dir.file("exp.cfg"), "--out-dir",
                            dir.file("r1")});
  REQUIRE(first.code == 0);
  CHECK(first.out.rfind("records: ", 0) == 0);
  const CliRun second = cli({"repro", "--config", dir.file("exp.cfg"), "--out-dir",
                             dir.file("r2")});
  REQUIRE(second.code == 0);

  for (const char* name : {"dataset.csv", "train.csv", "test.csv", "model.txt",
                           "report.txt", "fig_perm_importance.csv"}) {
    INFO("artifact ", name);
    CHECK(mapf::test::read_file(dir.file("r1") + "/" + name) ==
          mapf::test::read_file(dir.file("r2") + "/" + name));
  }
  CHECK(first.out == second.out);
}
