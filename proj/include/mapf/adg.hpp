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

#ifndef MAPF__ADG_HPP
#define MAPF__ADG_HPP

#include <optional>
#include <string>
#include <vector>

#include "mapf/sim_time.hpp"
#include "mapf/solution.hpp"

namespace mapf {

enum class NodeStatus { pending, running, completed };

/// Type-1 edges chain the consecutive actions of one agent. Type-2 edges
/// order actions of different agents through a shared vertex: the action
/// that vacates the vertex must complete before the next visitor's entering
/// action may start.
enum class EdgeKind { type1, type2 };

struct AdgNode
{
  Action action;
  Tick duration = 0;

  Tick planned_start = 0;
  Tick planned_complete = 0;

  /// Live estimates. They start equal to the planned times and are pushed
  /// forward as actual events and dependency delays propagate.
  Tick est_start = 0;
  Tick est_complete = 0;

  /// Unset until the corresponding event is recorded.
  std::optional<Tick> actual_start;
  std::optional<Tick> actual_complete;

  NodeStatus status = NodeStatus::pending;
};

struct AdgEdge
{
  EdgeKind kind;
  int from = -1;
  int to = -1;
};

/// Planned and currently expected slack of one Type-2 edge. The slack is the
/// gap between the source action's completion and the completion of the
/// action just before the dependent agent's entering action; when it shrinks
/// relative to plan, the dependent agent is headed for extra waiting.
struct EdgeSlack
{
  int edge = -1;
  Tick planned = 0;
  Tick expected = 0;
};

class Adg
{
public:
  Adg() = default;

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const AdgNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const std::vector<AdgEdge>& edges() const { return edges_; }
  const std::vector<int>& predecessors(int id) const
  {
    return preds_[static_cast<std::size_t>(id)];
  }
  const std::vector<int>& successors(int id) const
  {
    return succs_[static_cast<std::size_t>(id)];
  }

  int agent_count() const { return static_cast<int>(lengths_.size()); }
  int plan_length(int agent) const { return lengths_[static_cast<std::size_t>(agent)]; }
  /// Node of action `index` (1-based) of the agent.
  int node_id(int agent, int index) const
  {
    return first_[static_cast<std::size_t>(agent)] + index - 1;
  }
  Tick time_origin() const { return origin_; }

  bool all_completed() const { return completed_total_ == node_count(); }

  /// A pending action whose predecessors have all completed may start.
  bool executable(int id) const;
  std::vector<int> executable_actions() const;

  /// Marks the action running at `time`. The start estimate collapses to the
  /// actual time and the completion estimate becomes start plus planned
  /// duration; downstream estimates are re-propagated.
  void record_started(int id, Tick time);

  /// Marks the action completed at `time` and re-propagates. Throws if the
  /// action is not running, if it would complete before it started, or if
  /// `time` precedes an already recorded event.
  void record_completed(int id, Tick time);

  /// Pushes the completion estimate of any running action that is already
  /// overdue to one tick past `now`, then re-propagates. Keeps estimates out
  /// of the past while an action is stuck longer than planned.
  void refresh_estimates(Tick now);

  /// True when the Type-2 edge's source action has completed, i.e. the
  /// dependency is already met.
  bool satisfied(int edge_index) const;

  /// Slack of every Type-2 edge, in edge order.
  std::vector<EdgeSlack> edge_slacks() const;

  /// Index of the agent's last completed action; 0 when none finished yet.
  int last_completed_index(int agent) const
  {
    return completed_count_[static_cast<std::size_t>(agent)];
  }
  /// Index of the agent's last started action; 0 when none started yet.
  int last_started_index(int agent) const
  {
    return started_count_[static_cast<std::size_t>(agent)];
  }

  /// One line per node `agent idx from to status t_s t_c est_s est_c act_s
  /// act_c` in node-id order, then one line per edge `kind src dst`. Unset
  /// actual times print as "-".
  std::string dump() const;

  friend Adg build_adg(const Solution& sol, Tick time_origin);

private:
  void propagate();

  std::vector<AdgNode> nodes_;
  std::vector<AdgEdge> edges_;
  std::vector<std::vector<int>> preds_;
  std::vector<std::vector<int>> succs_;
  std::vector<int> first_;
  std::vector<int> lengths_;
  std::vector<int> completed_count_;
  std::vector<int> started_count_;
  std::vector<int> topo_;
  int completed_total_ = 0;
  Tick origin_ = 0;
  Tick last_event_ = 0;
};

/// Builds the dependency graph of a 1-robust solution. Planned times place
/// action i of every agent at [origin + (i-1)·step, origin + i·step]. Type-2
/// edges follow each vertex's visit order; edges implied by a chain of other
/// edges are pruned. Throws InvalidInput if the visit structure is
/// inconsistent with a 1-robust plan or the result has a cycle.
Adg build_adg(const Solution& sol, Tick time_origin = 0);

}  // namespace mapf

#endif  // MAPF__ADG_HPP
