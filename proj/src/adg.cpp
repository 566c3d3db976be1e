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

#include "mapf/adg.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

#include "mapf/errors.hpp"

namespace mapf {

bool Adg::executable(int id) const
{
  const AdgNode& n = nodes_[static_cast<std::size_t>(id)];
  if (n.status != NodeStatus::pending)
    return false;
  for (int p : preds_[static_cast<std::size_t>(id)]) {
    if (nodes_[static_cast<std::size_t>(p)].status != NodeStatus::completed)
      return false;
  }
  return true;
}

std::vector<int> Adg::executable_actions() const
{
  std::vector<int> out;
  for (int id = 0; id < node_count(); ++id) {
    if (executable(id))
      out.push_back(id);
  }
  return out;
}

void Adg::record_started(int id, Tick time)
{
  AdgNode& n = nodes_[static_cast<std::size_t>(id)];
  if (!executable(id))
    throw SimulationError(
      "action " + std::to_string(n.action.index) + " of agent " +
      std::to_string(n.action.agent) + " started out of order");
  if (time < last_event_)
    throw SimulationError("event time moved backwards");
  last_event_ = time;
  n.status = NodeStatus::running;
  n.actual_start = time;
  n.est_start = time;
  n.est_complete = time + n.duration;
  ++started_count_[static_cast<std::size_t>(n.action.agent)];
  propagate();
}

void Adg::record_completed(int id, Tick time)
{
  AdgNode& n = nodes_[static_cast<std::size_t>(id)];
  if (n.status != NodeStatus::running)
    throw SimulationError(
      "action " + std::to_string(n.action.index) + " of agent " +
      std::to_string(n.action.agent) + " completed without running");
  if (time < *n.actual_start)
    throw SimulationError("action completed before it started");
  if (time < last_event_)
    throw SimulationError("event time moved backwards");
  last_event_ = time;
  n.status = NodeStatus::completed;
  n.actual_complete = time;
  n.est_complete = time;
  ++completed_count_[static_cast<std::size_t>(n.action.agent)];
  ++completed_total_;
  propagate();
}

void Adg::refresh_estimates(Tick now)
{
  if (now > last_event_)
    last_event_ = now;
  bool stale = false;
  for (AdgNode& n : nodes_) {
    if (n.status == NodeStatus::running && n.est_complete < now) {
      n.est_complete = now + 1;
      stale = true;
    }
    // A pending action can also go stale: an obstacle may hold an otherwise
    // executable action back, so nothing re-propagates its estimate.
    if (n.status == NodeStatus::pending && n.est_complete <= now)
      stale = true;
  }
  if (stale)
    propagate();
}

void Adg::propagate()
{
  for (int id : topo_) {
    AdgNode& n = nodes_[static_cast<std::size_t>(id)];
    if (n.status != NodeStatus::pending)
      continue;
    Tick start = n.planned_start;
    for (int p : preds_[static_cast<std::size_t>(id)])
      start = std::max(start, nodes_[static_cast<std::size_t>(p)].est_complete);
    n.est_start = start;
    // Estimates never sit in the past: an action still pending at the last
    // observed instant cannot complete before the next tick.
    n.est_complete = std::max(start + n.duration, last_event_ + 1);
  }
}

bool Adg::satisfied(int edge_index) const
{
  const AdgEdge& e = edges_[static_cast<std::size_t>(edge_index)];
  return nodes_[static_cast<std::size_t>(e.from)].status == NodeStatus::completed;
}

std::vector<EdgeSlack> Adg::edge_slacks() const
{
  std::vector<EdgeSlack> out;
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    const AdgEdge& e = edges_[static_cast<std::size_t>(i)];
    if (e.kind != EdgeKind::type2)
      continue;
    const AdgNode& src = nodes_[static_cast<std::size_t>(e.from)];
    const AdgNode& dst = nodes_[static_cast<std::size_t>(e.to)];
    // Completion of the dependent agent's action just before its entering
    // action; the virtual action before the plan is the execution start.
    Tick before_planned = origin_;
    Tick before_expected = origin_;
    if (dst.action.index > 1) {
      const int before =
        node_id(dst.action.agent, dst.action.index - 1);
      before_planned = nodes_[static_cast<std::size_t>(before)].planned_complete;
      before_expected = nodes_[static_cast<std::size_t>(before)].est_complete;
    }
    out.push_back(
      {i, src.planned_complete - before_planned, src.est_complete - before_expected});
  }
  return out;
}

std::string Adg::dump() const
{
  std::ostringstream out;
  auto opt = [](const std::optional<Tick>& t) {
    return t ? format_ticks(*t) : std::string("-");
  };
  for (const AdgNode& n : nodes_) {
    const char* status = n.status == NodeStatus::pending ? "pending"
      : n.status == NodeStatus::running                  ? "running"
                                                         : "completed";
    out << n.action.agent << ' ' << n.action.index << ' ' << n.action.from << ' '
        << n.action.to << ' ' << status << ' ' << format_ticks(n.planned_start) << ' '
        << format_ticks(n.planned_complete) << ' ' << format_ticks(n.est_start) << ' '
        << format_ticks(n.est_complete) << ' ' << opt(n.actual_start) << ' '
        << opt(n.actual_complete) << '\n';
  }
  for (const AdgEdge& e : edges_) {
    out << (e.kind == EdgeKind::type1 ? "type1" : "type2") << ' ' << e.from << ' '
        << e.to << '\n';
  }
  return out.str();
}

namespace {

struct Visit
{
  int enter_step;   // plan step at which the agent reaches the vertex
  int agent;
  int enter_action; // 0 when the agent begins the plan here
  int leave_action; // -1 when the agent never leaves
};

}  // namespace

Adg build_adg(const Solution& sol, Tick time_origin)
{
  if (sol.step_duration <= 0)
    throw InvalidInput("action duration must be positive");

  Adg adg;
  adg.origin_ = time_origin;
  adg.last_event_ = time_origin;

  const int n_agents = sol.agent_count();
  adg.first_.resize(static_cast<std::size_t>(n_agents));
  adg.lengths_.resize(static_cast<std::size_t>(n_agents));
  adg.completed_count_.assign(static_cast<std::size_t>(n_agents), 0);
  adg.started_count_.assign(static_cast<std::size_t>(n_agents), 0);

  for (int k = 0; k < n_agents; ++k) {
    const AgentPlan& plan = sol.plans[static_cast<std::size_t>(k)];
    adg.first_[static_cast<std::size_t>(k)] = adg.node_count();
    adg.lengths_[static_cast<std::size_t>(k)] = plan.length();
    for (const Action& a : plan.actions) {
      AdgNode node;
      node.action = a;
      node.duration = sol.step_duration;
      node.planned_start = time_origin + (a.index - 1) * sol.step_duration;
      node.planned_complete = time_origin + a.index * sol.step_duration;
      node.est_start = node.planned_start;
      node.est_complete = node.planned_complete;
      adg.nodes_.push_back(node);
    }
  }

  for (int k = 0; k < n_agents; ++k) {
    for (int i = 1; i < adg.lengths_[static_cast<std::size_t>(k)]; ++i)
      adg.edges_.push_back({EdgeKind::type1, adg.node_id(k, i), adg.node_id(k, i + 1)});
  }

  // Vertex visit lists. A visit spans waits: it opens when the agent arrives
  // (or begins the plan) and closes with the first action moving elsewhere.
  std::map<Vertex, std::vector<Visit>> visits;
  for (int k = 0; k < n_agents; ++k) {
    const AgentPlan& plan = sol.plans[static_cast<std::size_t>(k)];
    Visit open{0, k, 0, -1};
    Vertex at = plan.start;
    for (const Action& a : plan.actions) {
      if (a.to == a.from)
        continue;
      open.leave_action = a.index;
      visits[at].push_back(open);
      at = a.to;
      open = Visit{a.index, k, a.index, -1};
    }
    visits[at].push_back(open);
  }

  for (auto& [vertex, list] : visits) {
    std::sort(list.begin(), list.end(), [](const Visit& a, const Visit& b) {
      if (a.enter_step != b.enter_step) return a.enter_step < b.enter_step;
      return a.agent < b.agent;
    });
    for (std::size_t i = 1; i < list.size(); ++i) {
      const Visit& prev = list[i - 1];
      const Visit& next = list[i];
      if (prev.agent == next.agent)
        continue;
      if (prev.leave_action < 0)
        throw InvalidInput(
          "vertex " + std::to_string(vertex) + " is revisited after agent " +
          std::to_string(prev.agent) + " parks on it");
      if (next.enter_action == 0)
        throw InvalidInput(
          "agent " + std::to_string(next.agent) + " starts on vertex " +
          std::to_string(vertex) + " after another agent's visit");
      adg.edges_.push_back(
        {EdgeKind::type2, adg.node_id(prev.agent, prev.leave_action),
         adg.node_id(next.agent, next.enter_action)});
    }
  }

  // Prune Type-2 edges already implied by a chain of other edges; the chain
  // enforces at least as much separation, so reachability is preserved.
  {
    std::vector<std::vector<int>> out_edges(static_cast<std::size_t>(adg.node_count()));
    for (std::size_t i = 0; i < adg.edges_.size(); ++i)
      out_edges[static_cast<std::size_t>(adg.edges_[i].from)].push_back(
        static_cast<int>(i));
    std::vector<char> dead(adg.edges_.size(), 0);
    std::vector<int> stamp(static_cast<std::size_t>(adg.node_count()), -1);
    std::vector<int> stack;
    for (std::size_t i = 0; i < adg.edges_.size(); ++i) {
      if (adg.edges_[i].kind != EdgeKind::type2)
        continue;
      const int dst = adg.edges_[i].to;
      stack.assign(1, adg.edges_[i].from);
      stamp[static_cast<std::size_t>(adg.edges_[i].from)] = static_cast<int>(i);
      bool found = false;
      while (!stack.empty() && !found) {
        const int v = stack.back();
        stack.pop_back();
        for (int ei : out_edges[static_cast<std::size_t>(v)]) {
          if (ei == static_cast<int>(i) || dead[static_cast<std::size_t>(ei)])
            continue;
          const int w = adg.edges_[static_cast<std::size_t>(ei)].to;
          if (w == dst) {
            found = true;
            break;
          }
          if (stamp[static_cast<std::size_t>(w)] != static_cast<int>(i)) {
            stamp[static_cast<std::size_t>(w)] = static_cast<int>(i);
            stack.push_back(w);
          }
        }
      }
      if (found)
        dead[i] = 1;
    }
    std::vector<AdgEdge> kept;
    kept.reserve(adg.edges_.size());
    for (std::size_t i = 0; i < adg.edges_.size(); ++i) {
      if (!dead[i])
        kept.push_back(adg.edges_[i]);
    }
    adg.edges_ = std::move(kept);
  }

  adg.preds_.resize(static_cast<std::size_t>(adg.node_count()));
  adg.succs_.resize(static_cast<std::size_t>(adg.node_count()));
  for (const AdgEdge& e : adg.edges_) {
    adg.preds_[static_cast<std::size_t>(e.to)].push_back(e.from);
    adg.succs_[static_cast<std::size_t>(e.from)].push_back(e.to);
  }

  std::vector<int> indegree(static_cast<std::size_t>(adg.node_count()), 0);
  for (const AdgEdge& e : adg.edges_)
    ++indegree[static_cast<std::size_t>(e.to)];
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int id = 0; id < adg.node_count(); ++id) {
    if (indegree[static_cast<std::size_t>(id)] == 0)
      ready.push(id);
  }
  while (!ready.empty()) {
    const int id = ready.top();
    ready.pop();
    adg.topo_.push_back(id);
    for (int s : adg.succs_[static_cast<std::size_t>(id)]) {
      if (--indegree[static_cast<std::size_t>(s)] == 0)
        ready.push(s);
    }
  }
  if (static_cast<int>(adg.topo_.size()) != adg.node_count())
    throw InvalidInput("action dependencies contain a cycle");

  return adg;
}

}  // namespace mapf
