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

#ifndef MAPF__INSTANCE_HPP
#define MAPF__INSTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mapf/grid_map.hpp"

namespace mapf {

struct AgentTask {
  Vertex start = -1;
  Vertex goal = -1;
  bool operator==(const AgentTask&) const = default;
};

struct MapfInstance {
  GridMap map;
  std::vector<AgentTask> agents;

  int agent_count() const { return static_cast<int>(agents.size()); }

  /// Throws InvalidInput unless starts/goals are free cells, starts are
  /// pairwise distinct and goals are pairwise distinct.
  void validate() const;
};

/// Random start/goal placement, deterministic in (map, agent_count, seed).
/// Every goal is reachable from its start. Throws InvalidInput when the map
/// has fewer than 2*agent_count free cells or no connected placement is
/// found within the retry budget.
MapfInstance generate_instance(const GridMap& map, int agent_count, std::uint64_t seed);

/// Plain-text instance format: header `agents N`, then N lines `sx sy gx gy`.
std::string to_instance_text(const MapfInstance& instance);
MapfInstance parse_instance_text(const std::string& text, const GridMap& map);
MapfInstance load_instance_file(const std::string& path, const GridMap& map);
void save_instance_file(const std::string& path, const MapfInstance& instance);

}  // namespace mapf

#endif  // MAPF__INSTANCE_HPP
