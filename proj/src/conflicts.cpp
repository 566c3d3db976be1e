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

#include "mapf/conflicts.hpp"

#include <cstdlib>
#include <sstream>

#include "mapf/errors.hpp"

namespace mapf {

std::string ConflictReport::describe() const
{
  std::ostringstream out;
  out << (kind == Kind::vertex ? "vertex" : "following") << " conflict: agents "
      << agent_a << " and " << agent_b << " at vertex " << vertex << " (steps " << step_a
      << ", " << step_b << ")";
  return out.str();
}

namespace {

void check_structure(const MapfInstance& instance, const Solution& sol)
{
  if (sol.agent_count() != instance.agent_count())
    throw InvalidInput("solution has " + std::to_string(sol.agent_count()) +
                       " plans for " + std::to_string(instance.agent_count()) + " agents");
  const GridMap& map = instance.map;
  for (int k = 0; k < sol.agent_count(); ++k) {
    const AgentPlan& plan = sol.plans[static_cast<std::size_t>(k)];
    if (plan.start != instance.agents[static_cast<std::size_t>(k)].start)
      throw InvalidInput("plan " + std::to_string(k) + " does not begin at the agent start");
    if (plan.final_vertex() != instance.agents[static_cast<std::size_t>(k)].goal)
      throw InvalidInput("plan " + std::to_string(k) + " does not end at the agent goal");
    Vertex at = plan.start;
    if (!map.free(at))
      throw InvalidInput("plan " + std::to_string(k) + " starts on a non-free cell");
    for (const Action& a : plan.actions) {
      if (a.from != at)
        throw InvalidInput("plan " + std::to_string(k) + " has a discontinuous action chain");
      if (!map.free(a.to))
        throw InvalidInput("plan " + std::to_string(k) + " moves onto a non-free cell");
      const int manhattan = std::abs(map.x_of(a.from) - map.x_of(a.to)) +
                            std::abs(map.y_of(a.from) - map.y_of(a.to));
      if (manhattan > 1)
        throw InvalidInput("plan " + std::to_string(k) + " contains a non-grid move");
      at = a.to;
    }
  }
}

}  // namespace

std::vector<ConflictReport> validate_solution(const MapfInstance& instance, const Solution& sol)
{
  check_structure(instance, sol);

  std::vector<ConflictReport> conflicts;
  const int horizon = sol.makespan_steps();
  const int n = sol.agent_count();
  for (int t = 0; t <= horizon; ++t) {
    for (int a = 0; a < n; ++a) {
      const Vertex va = sol.plans[static_cast<std::size_t>(a)].position(t);
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        const Vertex vb1 = sol.plans[static_cast<std::size_t>(b)].position(t + 1);
        if (a < b) {
          const Vertex vb0 = sol.plans[static_cast<std::size_t>(b)].position(t);
          if (va == vb0)
            conflicts.push_back({ConflictReport::Kind::vertex, a, b, va, t, t});
        }
        // same vertex one step apart; skip t == horizon where both agents
        // are parked (already reported as a vertex conflict above)
        if (va == vb1 && t < horizon && vb1 != sol.plans[static_cast<std::size_t>(b)].position(t))
          conflicts.push_back({ConflictReport::Kind::following, a, b, va, t, t + 1});
      }
    }
  }
  return conflicts;
}

}  // namespace mapf
