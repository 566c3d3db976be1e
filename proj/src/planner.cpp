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

#include "mapf/planner.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <optional>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "mapf/errors.hpp"

namespace mapf {

namespace {

/// A forbidden (vertex, step) pair for one agent, kept sorted per agent.
using ConstraintSet = std::vector<std::pair<Vertex, int>>;

bool has_constraint(const ConstraintSet& set, Vertex v, int t)
{
  return std::binary_search(set.begin(), set.end(), std::make_pair(v, t));
}

enum class SearchStatus { found, infeasible, budget };

struct SearchOutcome
{
  SearchStatus status = SearchStatus::infeasible;
  std::vector<Vertex> path;  // positions at steps 0..T
};

std::int64_t state_key(Vertex v, int t)
{
  return (static_cast<std::int64_t>(v) << 24) | static_cast<std::int64_t>(t);
}

/// Time-expanded best-first search for one agent. Every move and every wait
/// advances time by one step, so the cost of a state equals its step index
/// and the true-distance table to the goal gives an admissible estimate of
/// the remainder. A state at the goal only counts as terminal when no later
/// constraint ever forces the agent off the goal again.
SearchOutcome low_level_search(
  const GridMap& map,
  Vertex start,
  Vertex goal,
  const std::vector<int>& dist_to_goal,
  const ConstraintSet& constraints,
  std::int64_t& expansions,
  std::int64_t expansion_limit)
{
  SearchOutcome out;
  if (dist_to_goal[static_cast<std::size_t>(start)] < 0)
    return out;
  if (has_constraint(constraints, start, 0))
    return out;

  int latest_constraint = -1;
  int latest_goal_constraint = -1;
  for (const auto& [v, t] : constraints) {
    latest_constraint = std::max(latest_constraint, t);
    if (v == goal)
      latest_goal_constraint = std::max(latest_goal_constraint, t);
  }
  int eccentricity = 0;
  for (int d : dist_to_goal)
    eccentricity = std::max(eccentricity, d);
  const int horizon = latest_constraint + eccentricity + 2;

  struct Node
  {
    int f;
    int h;
    Vertex v;
    int t;
  };
  auto worse = [](const Node& a, const Node& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    if (a.v != b.v) return a.v > b.v;
    return a.t > b.t;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);
  std::unordered_set<std::int64_t> seen;
  std::unordered_map<std::int64_t, std::int64_t> came_from;

  const int h0 = dist_to_goal[static_cast<std::size_t>(start)];
  open.push({h0, h0, start, 0});
  seen.insert(state_key(start, 0));

  std::vector<Vertex> moves;
  while (!open.empty()) {
    const Node node = open.top();
    open.pop();
    if (++expansions > expansion_limit) {
      out.status = SearchStatus::budget;
      return out;
    }
    if (node.v == goal && node.t > latest_goal_constraint) {
      out.status = SearchStatus::found;
      out.path.resize(static_cast<std::size_t>(node.t) + 1);
      std::int64_t key = state_key(node.v, node.t);
      for (int t = node.t; t >= 0; --t) {
        out.path[static_cast<std::size_t>(t)] = static_cast<Vertex>(key >> 24);
        if (t > 0)
          key = came_from.at(key);
      }
      return out;
    }
    if (node.t >= horizon)
      continue;

    map.free_neighbors(node.v, moves);
    moves.push_back(node.v);  // waiting in place is always a candidate
    const int nt = node.t + 1;
    for (Vertex nv : moves) {
      if (has_constraint(constraints, nv, nt))
        continue;
      const std::int64_t key = state_key(nv, nt);
      if (!seen.insert(key).second)
        continue;
      came_from.emplace(key, state_key(node.v, node.t));
      const int h = dist_to_goal[static_cast<std::size_t>(nv)];
      if (h < 0)
        continue;
      open.push({nt + h, h, nv, nt});
    }
  }
  return out;
}

AgentPlan to_agent_plan(int agent, const std::vector<Vertex>& path)
{
  AgentPlan plan;
  plan.start = path.front();
  plan.actions.reserve(path.size() - 1);
  for (std::size_t i = 1; i < path.size(); ++i)
    plan.actions.push_back(
      {agent, static_cast<int>(i), path[i - 1], path[i]});
  return plan;
}

struct Collision
{
  // Agent a occupies the vertex at step_a, agent b at step_b, with
  // step_b either equal to step_a or one later.
  int a = -1;
  int b = -1;
  Vertex v = -1;
  int step_a = 0;
  int step_b = 0;
  bool found() const { return a >= 0; }
};

/// Scans the joint plan step by step and reports the earliest collision plus
/// the total number of them. Agents hold their final vertex once done, so the
/// scan runs to the longest plan.
std::pair<Collision, int> scan_collisions(const Solution& sol)
{
  Collision first;
  int count = 0;
  const int n = sol.agent_count();
  const int horizon = sol.makespan_steps();
  for (int t = 0; t <= horizon; ++t) {
    for (int a = 0; a < n; ++a) {
      const AgentPlan& pa = sol.plans[static_cast<std::size_t>(a)];
      const Vertex va = pa.position(t);
      const Vertex va1 = pa.position(t + 1);
      for (int b = a + 1; b < n; ++b) {
        const AgentPlan& pb = sol.plans[static_cast<std::size_t>(b)];
        const Vertex vb = pb.position(t);
        const Vertex vb1 = pb.position(t + 1);
        if (va == vb) {
          ++count;
          if (!first.found())
            first = {a, b, va, t, t};
        }
        if (va == vb1 && vb1 != vb) {
          ++count;
          if (!first.found())
            first = {a, b, va, t, t + 1};
        }
        if (vb == va1 && va1 != va) {
          ++count;
          if (!first.found())
            first = {b, a, vb, t, t + 1};
        }
      }
    }
  }
  return {first, count};
}

struct CtNode
{
  std::vector<ConstraintSet> constraints;
  Solution solution;
  int cost = 0;
  int collision_count = 0;
  std::int64_t seq = 0;
};

struct CtOrder
{
  bool operator()(const std::shared_ptr<CtNode>& a, const std::shared_ptr<CtNode>& b) const
  {
    if (a->cost != b->cost) return a->cost > b->cost;
    if (a->collision_count != b->collision_count)
      return a->collision_count > b->collision_count;
    return a->seq > b->seq;
  }
};

}  // namespace

PlanResult solve_from_state(
  const GridMap& map,
  const std::vector<Vertex>& starts,
  const std::vector<Vertex>& goals,
  const PlannerConfig& cfg)
{
  if (starts.size() != goals.size())
    throw PlannerError("start and goal lists differ in length");
  if (starts.empty())
    throw PlannerError("cannot plan for zero agents");
  const int n = static_cast<int>(starts.size());
  for (int k = 0; k < n; ++k) {
    if (!map.in_bounds(starts[static_cast<std::size_t>(k)]) ||
        !map.free(starts[static_cast<std::size_t>(k)]))
      throw PlannerError("start of agent " + std::to_string(k) + " is not a free cell");
    if (!map.in_bounds(goals[static_cast<std::size_t>(k)]) ||
        !map.free(goals[static_cast<std::size_t>(k)]))
      throw PlannerError("goal of agent " + std::to_string(k) + " is not a free cell");
  }

  const auto t0 = std::chrono::steady_clock::now();
  PlanResult result;
  auto wall = [&t0]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  auto finish = [&](bool ok, std::string reason) {
    result.ok = ok;
    result.failure_reason = std::move(reason);
    result.stats.wall_s = wall();
    return result;
  };

  std::vector<std::vector<int>> dist(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    dist[static_cast<std::size_t>(k)] = map.bfs_distances(goals[static_cast<std::size_t>(k)]);

  auto plan_agent = [&](int k, const ConstraintSet& cs) {
    return low_level_search(
      map, starts[static_cast<std::size_t>(k)], goals[static_cast<std::size_t>(k)],
      dist[static_cast<std::size_t>(k)], cs,
      result.stats.low_level_expanded, cfg.low_level_expansion_limit);
  };

  auto root = std::make_shared<CtNode>();
  root->constraints.resize(static_cast<std::size_t>(n));
  root->solution.plans.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const SearchOutcome found = plan_agent(k, root->constraints[static_cast<std::size_t>(k)]);
    if (found.status == SearchStatus::budget) {
      result.stats.hit_limit = true;
      return finish(false, "expansion budget exhausted");
    }
    if (found.status == SearchStatus::infeasible)
      return finish(false, "goal of agent " + std::to_string(k) + " is unreachable");
    root->solution.plans[static_cast<std::size_t>(k)] = to_agent_plan(k, found.path);
    root->cost += root->solution.plans[static_cast<std::size_t>(k)].length();
  }
  auto [root_collision, root_count] = scan_collisions(root->solution);
  root->collision_count = root_count;

  std::priority_queue<std::shared_ptr<CtNode>, std::vector<std::shared_ptr<CtNode>>, CtOrder>
    open;
  std::int64_t next_seq = 0;
  root->seq = next_seq++;
  open.push(root);

  while (!open.empty()) {
    if (wall() > cfg.timeout_s)
      return finish(false, "timeout");
    auto node = open.top();
    open.pop();

    const auto [collision, count] = scan_collisions(node->solution);
    if (!collision.found()) {
      result.solution = node->solution;
      return finish(true, "");
    }
    ++result.stats.high_level_expanded;

    // Either the first agent avoids the vertex at its step or the second
    // avoids it at its own step; every collision-free joint plan does one of
    // the two, so both children together lose no solutions.
    const std::pair<int, std::pair<Vertex, int>> branches[2] = {
      {collision.a, {collision.v, collision.step_a}},
      {collision.b, {collision.v, collision.step_b}},
    };
    for (const auto& [agent, forbidden] : branches) {
      auto child = std::make_shared<CtNode>();
      child->constraints = node->constraints;
      ConstraintSet& cs = child->constraints[static_cast<std::size_t>(agent)];
      const auto where = std::lower_bound(cs.begin(), cs.end(), forbidden);
      if (where != cs.end() && *where == forbidden)
        throw PlannerError("collision split repeated a constraint");
      cs.insert(where, forbidden);

      const SearchOutcome found = plan_agent(agent, cs);
      if (found.status == SearchStatus::budget) {
        result.stats.hit_limit = true;
        return finish(false, "expansion budget exhausted");
      }
      if (found.status == SearchStatus::infeasible)
        continue;

      child->solution = node->solution;
      child->solution.plans[static_cast<std::size_t>(agent)] = to_agent_plan(agent, found.path);
      child->cost = 0;
      for (const AgentPlan& p : child->solution.plans)
        child->cost += p.length();
      child->collision_count = scan_collisions(child->solution).second;
      child->seq = next_seq++;
      open.push(std::move(child));
    }
  }
  return finish(false, "no collision-free solution exists");
}

PlanResult solve_1robust(const MapfInstance& instance, const PlannerConfig& cfg)
{
  instance.validate();
  std::vector<Vertex> starts, goals;
  starts.reserve(instance.agents.size());
  goals.reserve(instance.agents.size());
  for (const AgentTask& task : instance.agents) {
    starts.push_back(task.start);
    goals.push_back(task.goal);
  }
  return solve_from_state(instance.map, starts, goals, cfg);
}

}  // namespace mapf
