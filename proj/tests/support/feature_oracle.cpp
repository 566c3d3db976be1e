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

#include "feature_oracle.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>

namespace mapf::test {

namespace {

struct ReplayNode
{
  int agent = -1;
  int index = 0;
  Tick planned_complete = 0;
  std::optional<Tick> actual_start;
  std::optional<Tick> actual_complete;
  Tick est_start = 0;
  Tick est_complete = 0;
  bool pending = true;
};

struct ReplayEdge
{
  bool type2 = false;
  int from = -1;
  int to = -1;
};

struct Visit
{
  int enter_step = 0;
  int agent = -1;
  int enter_action = 0;
  int leave_action = -1;
};

[[noreturn]] void bad_trace(const char* what)
{
  throw std::logic_error(std::string("replay oracle: ") + what);
}

}  // namespace

FeatureVector replay_features(const ReplayInput& in)
{
  const Solution& sol = *in.solution;
  const Tick d = in.action_duration;
  const Tick t = in.snapshot;
  const int n_agents = sol.agent_count();

  std::vector<int> first(static_cast<std::size_t>(n_agents), 0);
  std::vector<int> length(static_cast<std::size_t>(n_agents), 0);
  std::vector<ReplayNode> nodes;
  for (int k = 0; k < n_agents; ++k) {
    const AgentPlan& plan = sol.plans[static_cast<std::size_t>(k)];
    first[static_cast<std::size_t>(k)] = static_cast<int>(nodes.size());
    length[static_cast<std::size_t>(k)] = plan.length();
    for (int i = 1; i <= plan.length(); ++i) {
      ReplayNode node;
      node.agent = k;
      node.index = i;
      node.planned_complete = static_cast<Tick>(i) * d;
      nodes.push_back(node);
    }
  }
  auto id_of = [&](int agent, int index) {
    return first[static_cast<std::size_t>(agent)] + index - 1;
  };

  // Events of the replaced plan are exactly those before the snapshot:
  // the replacement plan cannot start anything earlier than the snapshot
  // instant, and the snapshot is taken after that instant's completions
  // but before its starts.
  for (const TraceEvent& e : in.trace) {
    if (e.kind == TraceEvent::Kind::start && e.time < t)
      nodes[static_cast<std::size_t>(id_of(e.agent, e.action_index))].actual_start = e.time;
    if (e.kind == TraceEvent::Kind::complete && e.time <= t)
      nodes[static_cast<std::size_t>(id_of(e.agent, e.action_index))].actual_complete = e.time;
  }

  std::vector<int> done(static_cast<std::size_t>(n_agents), 0);
  std::vector<int> started(static_cast<std::size_t>(n_agents), 0);
  for (int k = 0; k < n_agents; ++k) {
    int& p = done[static_cast<std::size_t>(k)];
    int& e = started[static_cast<std::size_t>(k)];
    for (int i = 1; i <= length[static_cast<std::size_t>(k)]; ++i) {
      const ReplayNode& node = nodes[static_cast<std::size_t>(id_of(k, i))];
      if (node.actual_complete) {
        if (p != i - 1 || !node.actual_start)
          bad_trace("completions out of order");
        p = i;
      }
      if (node.actual_start) {
        if (e != i - 1)
          bad_trace("starts out of order");
        e = i;
      }
    }
    if (e < p || e > p + 1)
      bad_trace("agent runs more than one action");
  }

  // Instants at which the simulation loop woke up and refreshed estimates.
  // Every wakeup either logged an event or was one of the obstacle's
  // scheduled edges (a deferred appearance and a vacuous disappearance log
  // nothing); the snapshot instant itself always refreshes.
  std::set<Tick> wakeups;
  for (const TraceEvent& e : in.trace) {
    if (e.time <= t)
      wakeups.insert(e.time);
  }
  if (in.obstacle) {
    if (in.obstacle->appear <= t)
      wakeups.insert(in.obstacle->appear);
    if (in.obstacle->disappear <= t)
      wakeups.insert(in.obstacle->disappear);
  }
  wakeups.insert(t);

  for (ReplayNode& node : nodes) {
    if (node.actual_complete) {
      node.pending = false;
      node.est_start = *node.actual_start;
      node.est_complete = *node.actual_complete;
    } else if (node.actual_start) {
      node.pending = false;
      node.est_start = *node.actual_start;
      Tick est = *node.actual_start + d;
      for (Tick tick : wakeups) {
        if (tick > *node.actual_start && est < tick)
          est = tick + 1;
      }
      node.est_complete = est;
    }
  }

  std::vector<ReplayEdge> edges;
  for (int k = 0; k < n_agents; ++k) {
    for (int i = 1; i < length[static_cast<std::size_t>(k)]; ++i)
      edges.push_back({false, id_of(k, i), id_of(k, i + 1)});
  }

  // Vertex visits recovered from the position sequences: a visit is a
  // maximal run of steps spent on one vertex, entered by the action whose
  // step index opens the run.
  std::map<Vertex, std::vector<Visit>> visits;
  for (int k = 0; k < n_agents; ++k) {
    const AgentPlan& plan = sol.plans[static_cast<std::size_t>(k)];
    std::vector<Vertex> pos(static_cast<std::size_t>(plan.length()) + 1);
    pos[0] = plan.start;
    for (int s = 1; s <= plan.length(); ++s)
      pos[static_cast<std::size_t>(s)] = plan.actions[static_cast<std::size_t>(s) - 1].to;
    int s = 0;
    while (s <= plan.length()) {
      int end = s;
      while (end + 1 <= plan.length() && pos[static_cast<std::size_t>(end) + 1] == pos[static_cast<std::size_t>(s)])
        ++end;
      Visit v;
      v.enter_step = s;
      v.agent = k;
      v.enter_action = s;
      v.leave_action = end < plan.length() ? end + 1 : -1;
      visits[pos[static_cast<std::size_t>(s)]].push_back(v);
      s = end + 1;
    }
  }
  for (auto& [vertex, list] : visits) {
    (void)vertex;
    std::sort(list.begin(), list.end(), [](const Visit& a, const Visit& b) {
      if (a.enter_step != b.enter_step) return a.enter_step < b.enter_step;
      return a.agent < b.agent;
    });
    for (std::size_t i = 1; i < list.size(); ++i) {
      const Visit& prev = list[i - 1];
      const Visit& next = list[i];
      if (prev.agent == next.agent)
        continue;
      if (prev.leave_action < 0 || next.enter_action == 0)
        bad_trace("plan visit order is not 1-robust");
      edges.push_back({true, id_of(prev.agent, prev.leave_action),
                       id_of(next.agent, next.enter_action)});
    }
  }

  std::vector<std::vector<int>> preds(nodes.size());
  std::vector<std::vector<int>> out_edges(nodes.size());
  std::vector<int> indegree(nodes.size(), 0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    preds[static_cast<std::size_t>(edges[i].to)].push_back(edges[i].from);
    out_edges[static_cast<std::size_t>(edges[i].from)].push_back(static_cast<int>(i));
    ++indegree[static_cast<std::size_t>(edges[i].to)];
  }

  std::queue<int> ready;
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    if (indegree[id] == 0)
      ready.push(static_cast<int>(id));
  }
  int visited = 0;
  while (!ready.empty()) {
    const int id = ready.front();
    ready.pop();
    ++visited;
    ReplayNode& node = nodes[static_cast<std::size_t>(id)];
    if (node.pending) {
      Tick start = static_cast<Tick>(node.index - 1) * d;
      for (int p : preds[static_cast<std::size_t>(id)])
        start = std::max(start, nodes[static_cast<std::size_t>(p)].est_complete);
      node.est_start = start;
      node.est_complete = start + d;
    }
    for (int ei : out_edges[static_cast<std::size_t>(id)]) {
      if (--indegree[static_cast<std::size_t>(edges[static_cast<std::size_t>(ei)].to)] == 0)
        ready.push(edges[static_cast<std::size_t>(ei)].to);
    }
  }
  if (visited != static_cast<int>(nodes.size()))
    bad_trace("dependency cycle");

  // An explicit reachability check marks the redundant inter-agent edges:
  // an edge already implied by some other path adds no ordering.
  auto reachable_without = [&](int skip_edge, int src, int dst) {
    std::vector<char> seen(nodes.size(), 0);
    std::vector<int> stack{src};
    seen[static_cast<std::size_t>(src)] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int ei : out_edges[static_cast<std::size_t>(v)]) {
        if (ei == skip_edge)
          continue;
        const int w = edges[static_cast<std::size_t>(ei)].to;
        if (w == dst)
          return true;
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          stack.push_back(w);
        }
      }
    }
    return false;
  };

  FeatureVector x{};
  int at = 0;
  auto put = [&x, &at](double v) { x[static_cast<std::size_t>(at++)] = v; };

  put(in.map->height());
  put(in.map->width());
  put(n_agents);

  Tick planned_soc = 0;
  Tick planned_makespan = 0;
  for (int k = 0; k < n_agents; ++k) {
    const Tick cost = static_cast<Tick>(length[static_cast<std::size_t>(k)]) * d;
    planned_soc += cost;
    planned_makespan = std::max(planned_makespan, cost);
  }
  put(to_seconds(planned_soc));
  put(to_seconds(planned_makespan));
  put(to_seconds(t));

  int unfinished = 0;
  int progress_min = n_agents > 0 ? done[0] : 0;
  int progress_max = progress_min;
  int waiting = 0;
  for (int k = 0; k < n_agents; ++k) {
    const int p = done[static_cast<std::size_t>(k)];
    if (p != length[static_cast<std::size_t>(k)])
      ++unfinished;
    progress_min = std::min(progress_min, p);
    progress_max = std::max(progress_max, p);
    if (started[static_cast<std::size_t>(k)] == p)
      ++waiting;
  }
  put(unfinished);
  put(progress_max - progress_min);

  Tick highest_plan = 0;
  Tick highest_exp_plan = 0;
  Tick total_plan = 0;
  Tick total_exp_plan = 0;
  for (int k = 0; k < n_agents; ++k) {
    const int p = done[static_cast<std::size_t>(k)];
    if (p >= 1) {
      const ReplayNode& node = nodes[static_cast<std::size_t>(id_of(k, p))];
      const Tick delay = *node.actual_complete - node.planned_complete;
      highest_plan = std::max(highest_plan, delay);
      total_plan += delay;
    }
    const int e = started[static_cast<std::size_t>(k)];
    if (e >= 1) {
      const ReplayNode& node = nodes[static_cast<std::size_t>(id_of(k, e))];
      const Tick delay = node.est_complete - node.planned_complete;
      highest_exp_plan = std::max(highest_exp_plan, delay);
      total_exp_plan += delay;
    }
  }
  put(to_seconds(highest_plan));
  put(to_seconds(highest_exp_plan));
  put(to_seconds(total_plan));
  put(to_seconds(total_exp_plan));

  auto window_sum = [&](int agent, int last, int n, bool estimated) {
    Tick sum = 0;
    for (int i = std::max(1, last - n + 1); i <= last; ++i) {
      const ReplayNode& node = nodes[static_cast<std::size_t>(id_of(agent, i))];
      const Tick dur = estimated ? node.est_complete - node.est_start
                                 : *node.actual_complete - *node.actual_start;
      sum += dur - d;
    }
    return sum;
  };
  for (const bool estimated : {false, true}) {
    for (int n : kDelayWindows) {
      Tick highest = 0;
      for (int k = 0; k < n_agents; ++k) {
        const int last =
          estimated ? started[static_cast<std::size_t>(k)] : done[static_cast<std::size_t>(k)];
        if (last >= 1)
          highest = std::max(highest, window_sum(k, last, n, estimated));
      }
      put(to_seconds(highest));
    }
  }
  for (const bool estimated : {false, true}) {
    for (int n : kDelayWindows) {
      Tick total = 0;
      for (int k = 0; k < n_agents; ++k) {
        const int last =
          estimated ? started[static_cast<std::size_t>(k)] : done[static_cast<std::size_t>(k)];
        if (last >= 1)
          total += window_sum(k, last, n, estimated);
      }
      put(to_seconds(total));
    }
  }

  Tick highest_slack = 0;
  for (std::size_t ei = 0; ei < edges.size(); ++ei) {
    const ReplayEdge& e = edges[ei];
    if (!e.type2)
      continue;
    if (reachable_without(static_cast<int>(ei), e.from, e.to))
      continue;
    const ReplayNode& src = nodes[static_cast<std::size_t>(e.from)];
    if (src.actual_complete)
      continue;
    const ReplayNode& dst = nodes[static_cast<std::size_t>(e.to)];
    Tick before_planned = 0;
    Tick before_expected = 0;
    if (dst.index > 1) {
      const ReplayNode& before =
        nodes[static_cast<std::size_t>(id_of(dst.agent, dst.index - 1))];
      before_planned = before.planned_complete;
      before_expected = before.est_complete;
    }
    const Tick increase =
      (src.est_complete - before_expected) - (src.planned_complete - before_planned);
    highest_slack = std::max(highest_slack, increase);
  }
  put(to_seconds(highest_slack));

  put(waiting);
  return x;
}

}  // namespace mapf::test
