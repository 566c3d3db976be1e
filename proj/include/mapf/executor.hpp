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

#ifndef MAPF__EXECUTOR_HPP
#define MAPF__EXECUTOR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mapf/adg.hpp"
#include "mapf/grid_map.hpp"
#include "mapf/planner.hpp"
#include "mapf/sim_time.hpp"
#include "mapf/solution.hpp"

namespace mapf {

/// One vertex blocked during [appear, disappear). Agents starting an action
/// into the vertex in that window stand still until it clears.
struct ObstacleEvent
{
  Vertex vertex = -1;
  Tick appear = 0;
  Tick disappear = 0;
};

/// Test-only hook: stretches action durations by a deterministic,
/// per-action extra drawn from [0, max_extra] ticks. Used to probe gating
/// safety under delays the obstacle model alone cannot produce.
struct JitterConfig
{
  std::uint64_t seed = 0;
  Tick max_extra = 0;
};

struct ScenarioConfig
{
  GridMap map;
  Solution solution;
  std::optional<ObstacleEvent> obstacle;
  std::optional<Tick> replan_time;
  PlannerConfig planner;
  Tick action_duration = kTicksPerSecond;
  JitterConfig jitter;
};

struct TraceEvent
{
  enum class Kind { start, complete, blocked, obstacle_appear, obstacle_disappear, replan };
  Tick time = 0;
  Kind kind = Kind::start;
  int agent = -1;
  int action_index = -1;
  Vertex from = -1;
  Vertex to = -1;
};

struct ScenarioResult
{
  bool failed = false;
  std::string failure_reason;

  /// Sum over agents of the tick at which each completed its last action.
  Tick executed_soc = 0;
  std::vector<Tick> finish_ticks;
  Tick makespan = 0;

  std::vector<TraceEvent> trace;

  /// Deterministic stand-in for the replan solver's runtime, derived from
  /// its search effort. Zero when no replanning happened.
  double replan_runtime_s = 0.0;
  int unfinished_at_replan = 0;

  /// Snapshot of the original dependency graph at the replan instant, with
  /// estimates refreshed to that time. Feature extraction reads this.
  std::optional<Adg> adg_at_replan;
  std::optional<Tick> replan_tick;

  /// Count of vertex-occupancy overlaps between agents observed by the
  /// independent monitor. Always zero unless gating is broken.
  int occupancy_violations = 0;

  /// The obstacle's appearance had to wait for its vertex to clear.
  bool obstacle_deferred = false;
  /// The obstacle never found its vertex free before its disappear time.
  bool obstacle_never_materialized = false;
};

/// Draws an obstacle for the solution: it appears exactly 3 s before some
/// agent is planned to enter a vertex that is unoccupied at the appearance
/// instant, and disappears at a uniform tick between 3 s later and the
/// planned makespan. Throws InvalidInput when the makespan is under 6 s and
/// SimulationError when no (vertex, time) candidate exists.
ObstacleEvent sample_obstacle(const Solution& sol, std::uint64_t seed);

/// Runs the gated execution to completion. Fully deterministic: equal
/// configs give equal results, byte for byte.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Executed cost plus the solver-runtime penalty paid by every agent that
/// was still unfinished when replanning triggered, in seconds.
double overhead_adjusted_soc(const ScenarioResult& result);

std::string to_trace_text(const std::vector<TraceEvent>& trace);

}  // namespace mapf

#endif  // MAPF__EXECUTOR_HPP
