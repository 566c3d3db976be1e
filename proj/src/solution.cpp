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

#include "mapf/solution.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mapf/errors.hpp"

namespace mapf {

int Solution::makespan_steps() const
{
  int m = 0;
  for (const auto& plan : plans) m = std::max(m, plan.length());
  return m;
}

CostSummary cost_summary(const Solution& sol)
{
  const double step_s = to_seconds(sol.step_duration);
  CostSummary cost;
  for (const auto& plan : sol.plans) {
    const double len = plan.length() * step_s;
    cost.soc += len;
    cost.makespan = std::max(cost.makespan, len);
  }
  return cost;
}

std::string to_solution_text(const Solution& sol)
{
  std::ostringstream out;
  for (const auto& plan : sol.plans) {
    out << plan.start;
    for (const auto& a : plan.actions) out << ' ' << a.to;
    out << '\n';
  }
  return out.str();
}

Solution parse_solution_text(const std::string& text, const GridMap& map)
{
  Solution sol;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<Vertex> verts;
    long long v;
    while (ls >> v) verts.push_back(static_cast<Vertex>(v));
    if (!ls.eof())
      throw ParseError("solution line contains a non-integer token", line_no);
    if (verts.empty())
      throw ParseError("empty solution line", line_no);

    AgentPlan plan;
    plan.start = verts.front();
    const int agent = static_cast<int>(sol.plans.size());
    for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
      const Vertex from = verts[i];
      const Vertex to = verts[i + 1];
      if (!map.free(from) || !map.free(to))
        throw ParseError("solution visits a blocked or out-of-bounds cell", line_no);
      const int manhattan = std::abs(map.x_of(from) - map.x_of(to)) +
                            std::abs(map.y_of(from) - map.y_of(to));
      if (manhattan > 1)
        throw ParseError("solution step is not a wait or a 4-neighbor move", line_no);
      plan.actions.push_back(Action{agent, static_cast<int>(i) + 1, from, to});
    }
    if (!map.free(plan.start))
      throw ParseError("solution start is blocked or out of bounds", line_no);
    sol.plans.push_back(std::move(plan));
  }
  return sol;
}

Solution load_solution_file(const std::string& path, const GridMap& map)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError("cannot open solution file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_solution_text(buf.str(), map);
}

void save_solution_file(const std::string& path, const Solution& sol)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ParseError("cannot write solution file: " + path);
  out << to_solution_text(sol);
}

}  // namespace mapf
