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

#ifndef MAPF__PLANNER_HPP
#define MAPF__PLANNER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mapf/instance.hpp"
#include "mapf/solution.hpp"

namespace mapf {

struct PlannerConfig
{
  /// Wall-clock backstop. The expansion budget below is the primary limit so
  /// that success or failure of a solve does not depend on machine speed.
  double timeout_s = 60.0;

  /// Total single-agent search expansions allowed across the whole solve.
  std::int64_t low_level_expansion_limit = 2'000'000;
};

struct PlanStats
{
  std::int64_t high_level_expanded = 0;
  std::int64_t low_level_expanded = 0;
  double wall_s = 0.0;
  bool hit_limit = false;
};

struct PlanResult
{
  bool ok = false;
  Solution solution;
  PlanStats stats;
  std::string failure_reason;
};

/// Finds a sum-of-costs optimal solution in which no two agents occupy the
/// same vertex at the same step or at consecutive steps. That margin makes
/// the plans robust to one step of delay and rules out swap and follow
/// collisions as a side effect. Conflicts are resolved by a constraint tree
/// search: each tree node holds per-agent forbidden (vertex, step) pairs and
/// the cheapest plans satisfying them, and the first remaining collision
/// splits the node into two children.
PlanResult solve_1robust(const MapfInstance& instance, const PlannerConfig& cfg = {});

/// Same solver, but starting from explicit per-agent positions. Used when
/// replanning halfway through execution: the starts are wherever the agents
/// currently stand and may coincide with their goals.
PlanResult solve_from_state(
  const GridMap& map,
  const std::vector<Vertex>& starts,
  const std::vector<Vertex>& goals,
  const PlannerConfig& cfg = {});

}  // namespace mapf

#endif  // MAPF__PLANNER_HPP
