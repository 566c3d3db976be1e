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

#include <string>
#include <vector>

#include "doctest.h"
#include "joint_oracle.hpp"
#include "mapf/conflicts.hpp"
#include "mapf/errors.hpp"
#include "mapf/planner.hpp"
#include "mapf/rng.hpp"
#include "test_util.hpp"

using namespace mapf;
using mapf::test::grid_from;

namespace {

long long planned_soc_steps(const Solution& sol)
{
  long long soc = 0;
  for (const AgentPlan& plan : sol.plans) soc += plan.length();
  return soc;
}

}  // namespace

TEST_CASE("lone agent takes a shortest path")
{
  const GridMap map = grid_from({"....."});
  MapfInstance inst;
  inst.map = map;
  inst.agents = {{map.vertex(0, 0), map.vertex(4, 0)}};
  const PlanResult result = solve_1robust(inst);
  REQUIRE(result.ok);
  CHECK(planned_soc_steps(result.solution) == 4);
  CHECK(validate_solution(inst, result.solution).empty());
  CHECK(result.stats.low_level_expanded > 0);
}

TEST_CASE("lone agent routes around walls")
{
  const GridMap map = grid_from({
    "...",
    "@@.",
    "...",
  });
  MapfInstance inst;
  inst.map = map;
  inst.agents = {{map.vertex(0, 0), map.vertex(0, 2)}};
  const PlanResult result = solve_1robust(inst);
  REQUIRE(result.ok);
  CHECK(planned_soc_steps(result.solution) == 6);
}

TEST_CASE("crossing agents match the joint-state optimum")
{
  const GridMap map = grid_from({
    "...",
    "...",
    "...",
  });
  MapfInstance inst;
  inst.map = map;
  // Perpendicular crossings that meet in the middle.
  inst.agents = {{map.vertex(0, 1), map.vertex(2, 1)},
                 {map.vertex(1, 0), map.vertex(1, 2)}};
  const PlanResult result = solve_1robust(inst);
  REQUIRE(result.ok);
  CHECK(validate_solution(inst, result.solution).empty());

  const auto oracle = mapf::test::joint_optimal_soc(
    map, {inst.agents[0].start, inst.agents[1].start},
    {inst.agents[0].goal, inst.agents[1].goal});
  REQUIRE(oracle.has_value());
  CHECK(planned_soc_steps(result.solution) == *oracle);
  // The crossing cannot be solved without someone giving way.
  CHECK(*oracle > 4);
}

TEST_CASE("head-on corridor meeting needs the side pocket")
{
  const GridMap map = grid_from({
    ".....",
    "..@..",
  });
  MapfInstance inst;
  inst.map = map;
  inst.agents = {{map.vertex(0, 0), map.vertex(4, 0)},
                 {map.vertex(4, 0), map.vertex(0, 0)}};
  const PlanResult result = solve_1robust(inst);
  REQUIRE(result.ok);
  CHECK(validate_solution(inst, result.solution).empty());
  const auto oracle = mapf::test::joint_optimal_soc(
    map, {map.vertex(0, 0), map.vertex(4, 0)}, {map.vertex(4, 0), map.vertex(0, 0)});
  REQUIRE(oracle.has_value());
  CHECK(planned_soc_steps(result.solution) == *oracle);
}

TEST_CASE("agents already at their goals get empty plans")
{
  const GridMap map = grid_from({"...", "..."});
  const std::vector<Vertex> at = {map.vertex(0, 0), map.vertex(2, 1)};
  const PlanResult result = solve_from_state(map, at, at);
  REQUIRE(result.ok);
  CHECK(planned_soc_steps(result.solution) == 0);
  CHECK(result.solution.plans[0].actions.empty());
  CHECK(result.solution.plans[0].start == at[0]);
}

TEST_CASE("unreachable goal fails with a reason")
{
  const GridMap map = grid_from({".@."});
  MapfInstance inst;
  inst.map = map;
  inst.agents = {{map.vertex(0, 0), map.vertex(2, 0)}};
  const PlanResult result = solve_1robust(inst);
  CHECK_FALSE(result.ok);
  CHECK(result.failure_reason.find("unreachable") != std::string::npos);
}

TEST_CASE("unsolvable swap exhausts its budget instead of lying")
{
  const GridMap map = grid_from({"..."});
  MapfInstance inst;
  inst.map = map;
  inst.agents = {{map.vertex(0, 0), map.vertex(2, 0)},
                 {map.vertex(2, 0), map.vertex(0, 0)}};
  PlannerConfig cfg;
  cfg.low_level_expansion_limit = 20000;
  const PlanResult result = solve_1robust(inst, cfg);
  CHECK_FALSE(result.ok);
}

TEST_CASE("tiny expansion budget reports hit_limit")
{
  const GridMap map = grid_from({"...", "...", "..."});
  MapfInstance inst;
  inst.map = map;
  inst.agents = {{map.vertex(0, 1), map.vertex(2, 1)},
                 {map.vertex(1, 0), map.vertex(1, 2)}};
  PlannerConfig cfg;
  cfg.low_level_expansion_limit = 1;
  const PlanResult result = solve_1robust(inst, cfg);
  CHECK_FALSE(result.ok);
  CHECK(result.stats.hit_limit);
  CHECK(result.failure_reason.find("budget") != std::string::npos);
}

TEST_CASE("planner output is deterministic")
{
  const GridMap map = grid_from({
    ".....",
    ".@.@.",
    ".....",
  });
  const MapfInstance inst = [&map] {
    MapfInstance i;
    i.map = map;
    i.agents = {{map.vertex(0, 0), map.vertex(4, 2)},
                {map.vertex(4, 0), map.vertex(0, 2)},
                {map.vertex(2, 2), map.vertex(2, 0)}};
    return i;
  }();
  const PlanResult a = solve_1robust(inst);
  const PlanResult b = solve_1robust(inst);
  REQUIRE(a.ok);
  REQUIRE(b.ok);
  CHECK(a.solution == b.solution);
  CHECK(a.stats.low_level_expanded == b.stats.low_level_expanded);
  CHECK(a.stats.high_level_expanded == b.stats.high_level_expanded);
}

TEST_CASE("invalid instances are rejected up front")
{
  const GridMap map = grid_from({"..."});
  MapfInstance inst;
  inst.map = map;
  inst.agents = {{map.vertex(0, 0), map.vertex(2, 0)},
                 {map.vertex(0, 0), map.vertex(1, 0)}};
  CHECK_THROWS_AS(solve_1robust(inst), InvalidInput);
  CHECK_THROWS_AS(
    solve_from_state(map, {map.vertex(0, 0)}, std::vector<Vertex>{}), PlannerError);
}

TEST_CASE("random small instances are solved optimally and 1-robust")
{
  Rng rng(2026);
  int solved = 0;
  int attempts = 0;
  while (solved < 20 && attempts < 200) {
    ++attempts;
    const int w = 3 + static_cast<int>(rng.below(2));
    const int h = 3 + static_cast<int>(rng.below(2));
    GridMap map(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (rng.uniform() < 0.15) map.set_blocked(x, y, true);
    const int agents = 2 + static_cast<int>(rng.below(2));
    if (map.free_cell_count() < 2 * agents + 1) continue;

    MapfInstance inst;
    try {
      inst = generate_instance(map, agents, rng.next());
    } catch (const InvalidInput&) {
      continue;  // no connected placement on this draw
    }

    std::vector<Vertex> starts, goals;
    for (const AgentTask& task : inst.agents) {
      starts.push_back(task.start);
      goals.push_back(task.goal);
    }
    const auto oracle = mapf::test::joint_optimal_soc(map, starts, goals);

    PlannerConfig cfg;
    cfg.low_level_expansion_limit = 200000;  // caps unsolvable-case runtime
    const PlanResult result = solve_1robust(inst, cfg);
    if (!oracle.has_value()) {
      CHECK_FALSE(result.ok);
      continue;
    }
    REQUIRE(result.ok);
    CHECK(validate_solution(inst, result.solution).empty());
    CHECK(planned_soc_steps(result.solution) == *oracle);
    ++solved;
  }
  CHECK(solved >= 20);
}
