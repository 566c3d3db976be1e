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

#ifndef MAPF__CONFLICTS_HPP
#define MAPF__CONFLICTS_HPP

#include <string>
#include <vector>

#include "mapf/instance.hpp"
#include "mapf/solution.hpp"

namespace mapf {

/// A 1-robustness violation: two agents at the same vertex at the same step
/// (vertex) or at consecutive steps (following). The single vertex-over-time
/// rule subsumes swap and cycle conflicts.
struct ConflictReport {
  enum class Kind { vertex, following };
  Kind kind = Kind::vertex;
  int agent_a = -1;  // at `v` at step_a
  int agent_b = -1;  // at `v` at step_b (== step_a, or step_a + 1)
  Vertex vertex = -1;
  int step_a = 0;
  int step_b = 0;

  std::string describe() const;
};

/// Returns all 1-robustness violations; empty means the solution is 1-robust.
/// Agents hold their final vertex forever. Plans that reference blocked or
/// out-of-bounds cells, or that do not run from the instance start to the
/// goal, are structural errors (InvalidInput), not conflicts.
std::vector<ConflictReport> validate_solution(const MapfInstance& instance,
                                              const Solution& sol);

}  // namespace mapf

#endif  // MAPF__CONFLICTS_HPP
