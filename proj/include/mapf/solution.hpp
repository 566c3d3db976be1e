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

#ifndef MAPF__SOLUTION_HPP
#define MAPF__SOLUTION_HPP

#include <string>
#include <vector>

#include "mapf/grid_map.hpp"
#include "mapf/sim_time.hpp"

namespace mapf {

/// One step of an agent's plan. `index` is 1-based; from == to is a wait.
struct Action {
  int agent = 0;
  int index = 0;
  Vertex from = -1;
  Vertex to = -1;

  bool is_wait() const { return from == to; }
  bool operator==(const Action&) const = default;
};

/// An agent's plan: its start vertex and the action sequence. Planned times
/// follow from the index: action i runs over [(i-1), i] in steps.
struct AgentPlan {
  Vertex start = -1;
  std::vector<Action> actions;

  int length() const { return static_cast<int>(actions.size()); }

  /// Position after `step` whole steps, holding the final vertex forever.
  Vertex position(int step) const
  {
    if (actions.empty() || step <= 0) return start;
    if (step >= length()) return actions.back().to;
    return actions[static_cast<std::size_t>(step) - 1].to;
  }

  Vertex final_vertex() const { return actions.empty() ? start : actions.back().to; }

  bool operator==(const AgentPlan&) const = default;
};

struct Solution {
  std::vector<AgentPlan> plans;
  Tick step_duration = kTicksPerSecond;  // 1 s per action

  int agent_count() const { return static_cast<int>(plans.size()); }

  /// Longest plan, in steps.
  int makespan_steps() const;

  bool operator==(const Solution&) const = default;
};

struct CostSummary {
  double soc = 0.0;       // seconds
  double makespan = 0.0;  // seconds
};

/// Sum-of-costs and makespan of the plan lengths; trailing waits present in a
/// plan count toward its length.
CostSummary cost_summary(const Solution& sol);

/// One line per agent: the visited vertex ids separated by spaces. A lone id
/// encodes an empty plan.
std::string to_solution_text(const Solution& sol);

/// Parses to_solution_text output, reconstructing actions; moves must be
/// grid-valid for `map`.
Solution parse_solution_text(const std::string& text, const GridMap& map);

Solution load_solution_file(const std::string& path, const GridMap& map);
void save_solution_file(const std::string& path, const Solution& sol);

}  // namespace mapf

#endif  // MAPF__SOLUTION_HPP
