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

#include "mapf/instance.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "mapf/errors.hpp"
#include "mapf/rng.hpp"

namespace mapf {

void MapfInstance::validate() const
{
  std::unordered_set<Vertex> starts, goals;
  for (const auto& task : agents) {
    if (!map.free(task.start) || !map.free(task.goal))
      throw InvalidInput("agent start/goal must lie on a free cell");
    if (!starts.insert(task.start).second)
      throw InvalidInput("duplicate agent start vertex " + std::to_string(task.start));
    if (!goals.insert(task.goal).second)
      throw InvalidInput("duplicate agent goal vertex " + std::to_string(task.goal));
  }
}

MapfInstance generate_instance(const GridMap& map, int agent_count, std::uint64_t seed)
{
  if (agent_count < 1)
    throw InvalidInput("agent_count must be at least 1");
  const auto cells = map.free_cells();
  if (static_cast<int>(cells.size()) < 2 * agent_count)
    throw InvalidInput("map needs at least 2*agent_count free cells");

  // Connected-component labels so goal draws can be restricted to the
  // start's component.
  std::vector<int> component(static_cast<std::size_t>(map.cell_count()), -1);
  int components = 0;
  std::vector<Vertex> stack, nbrs;
  for (Vertex c : cells) {
    if (component[static_cast<std::size_t>(c)] >= 0) continue;
    const int label = components++;
    stack.assign(1, c);
    component[static_cast<std::size_t>(c)] = label;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      map.free_neighbors(v, nbrs);
      for (Vertex n : nbrs) {
        if (component[static_cast<std::size_t>(n)] < 0) {
          component[static_cast<std::size_t>(n)] = label;
          stack.push_back(n);
        }
      }
    }
  }

  Rng rng(seed);
  constexpr int kMaxAttempts = 512;
  MapfInstance instance;
  instance.map = map;
  std::unordered_set<Vertex> used_starts, used_goals;
  for (int agent = 0; agent < agent_count; ++agent) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const Vertex start = cells[rng.below(cells.size())];
      if (used_starts.count(start)) continue;
      const Vertex goal = cells[rng.below(cells.size())];
      if (used_goals.count(goal)) continue;
      if (component[static_cast<std::size_t>(start)] != component[static_cast<std::size_t>(goal)])
        continue;
      instance.agents.push_back(AgentTask{start, goal});
      used_starts.insert(start);
      used_goals.insert(goal);
      placed = true;
    }
    if (!placed)
      throw InvalidInput("no connected start/goal placement found for agent " +
                         std::to_string(agent));
  }
  return instance;
}

std::string to_instance_text(const MapfInstance& instance)
{
  std::ostringstream out;
  out << "agents " << instance.agent_count() << "\n";
  for (const auto& task : instance.agents) {
    out << instance.map.x_of(task.start) << ' ' << instance.map.y_of(task.start) << ' '
        << instance.map.x_of(task.goal) << ' ' << instance.map.y_of(task.goal) << "\n";
  }
  return out.str();
}

MapfInstance parse_instance_text(const std::string& text, const GridMap& map)
{
  std::istringstream in(text);
  std::string key;
  int count = -1;
  if (!(in >> key >> count) || key != "agents" || count < 0)
    throw ParseError("instance file must begin with `agents N`", 1);
  MapfInstance instance;
  instance.map = map;
  for (int i = 0; i < count; ++i) {
    int sx, sy, gx, gy;
    if (!(in >> sx >> sy >> gx >> gy))
      throw ParseError("expected `sx sy gx gy` for agent " + std::to_string(i), i + 2);
    if (!map.in_bounds(sx, sy) || !map.in_bounds(gx, gy))
      throw ParseError("agent " + std::to_string(i) + " coordinates out of bounds", i + 2);
    instance.agents.push_back(AgentTask{map.vertex(sx, sy), map.vertex(gx, gy)});
  }
  instance.validate();
  return instance;
}

MapfInstance load_instance_file(const std::string& path, const GridMap& map)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance_text(buf.str(), map);
}

void save_instance_file(const std::string& path, const MapfInstance& instance)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ParseError("cannot write instance file: " + path);
  out << to_instance_text(instance);
}

}  // namespace mapf
