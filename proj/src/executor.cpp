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

#include "mapf/executor.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

#include "mapf/errors.hpp"
#include "mapf/rng.hpp"

namespace mapf {

namespace {

constexpr std::uint64_t kObstacleStream = 0x6f627374;
constexpr std::uint64_t kJitterStream = 0x6a697474;

constexpr Tick kForever = std::numeric_limits<Tick>::max();

/// Time an agent physically occupied one vertex: from the instant it fully
/// arrived to the instant it began moving away. An agent entering while the
/// previous visitor's interval is still open, or exactly as it closes, means
/// the one-step safety margin was lost.
struct Presence
{
  Vertex vertex;
  Tick arrive;
  Tick depart;
  int agent;
};

double solver_runtime_proxy(const PlanStats& stats)
{
  return 1e-6 * static_cast<double>(stats.low_level_expanded) +
    1e-4 * static_cast<double>(stats.high_level_expanded);
}

class Simulation
{
public:
  explicit Simulation(const ScenarioConfig& cfg)
  : cfg_(cfg)
  {
  }

  ScenarioResult run()
  {
    const int n = cfg_.solution.agent_count();
    Solution sol = cfg_.solution;
    sol.step_duration = cfg_.action_duration;

    adg_ = build_adg(sol, 0);
    positions_.resize(static_cast<std::size_t>(n));
    goals_.resize(static_cast<std::size_t>(n));
    open_since_.assign(static_cast<std::size_t>(n), 0);
    running_.assign(static_cast<std::size_t>(n), -1);
    result_.finish_ticks.assign(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n; ++k) {
      positions_[static_cast<std::size_t>(k)] =
        sol.plans[static_cast<std::size_t>(k)].start;
      goals_[static_cast<std::size_t>(k)] =
        sol.plans[static_cast<std::size_t>(k)].final_vertex();
    }

    if (cfg_.obstacle)
      obstacle_ = ObstacleState::waiting;
    bool replan_pending = cfg_.replan_time.has_value();

    while (true) {
      Tick now = kForever;
      if (bootstrap_)
        now = 0;
      if (!completions_.empty())
        now = std::min(now, completions_.top().first);
      if (cfg_.obstacle) {
        if (obstacle_ == ObstacleState::waiting && !appear_tick_visited_)
          now = std::min(now, cfg_.obstacle->appear);
        if (obstacle_ == ObstacleState::waiting || obstacle_ == ObstacleState::active)
          now = std::min(now, cfg_.obstacle->disappear);
      }
      if (replan_pending && !draining_)
        now = std::min(now, *cfg_.replan_time);
      if (now == kForever) {
        if (!adg_.all_completed() || draining_) {
          result_.failed = true;
          result_.failure_reason = "gating deadlock: unfinished actions with no event pending";
        }
        break;
      }
      bootstrap_ = false;

      adg_.refresh_estimates(now);

      while (!completions_.empty() && completions_.top().first == now) {
        const int id = completions_.top().second;
        completions_.pop();
        complete_action(id, now);
      }

      if (cfg_.obstacle && obstacle_ != ObstacleState::done &&
          now >= cfg_.obstacle->disappear) {
        if (obstacle_ == ObstacleState::active) {
          trace(now, TraceEvent::Kind::obstacle_disappear, -1, -1, cfg_.obstacle->vertex,
                cfg_.obstacle->vertex);
        } else {
          result_.obstacle_never_materialized = true;
        }
        obstacle_ = ObstacleState::done;
      }
      if (cfg_.obstacle && obstacle_ == ObstacleState::waiting &&
          now >= cfg_.obstacle->appear) {
        appear_tick_visited_ = true;
        if (!vertex_occupied(cfg_.obstacle->vertex)) {
          obstacle_ = ObstacleState::active;
          result_.obstacle_deferred = now > cfg_.obstacle->appear;
          trace(now, TraceEvent::Kind::obstacle_appear, -1, -1, cfg_.obstacle->vertex,
                cfg_.obstacle->vertex);
        }
      }

      if (replan_pending && !draining_ && now >= *cfg_.replan_time) {
        adg_.refresh_estimates(now);
        result_.adg_at_replan = adg_;
        result_.replan_tick = now;
        for (int k = 0; k < n; ++k) {
          if (adg_.last_completed_index(k) != adg_.plan_length(k))
            ++result_.unfinished_at_replan;
        }
        draining_ = true;
        replan_pending = false;
        trace(now, TraceEvent::Kind::replan, -1, -1, -1, -1);
      }

      if (draining_ && no_action_running()) {
        if (!handover(now))
          break;
      }

      if (!draining_)
        start_pass(now);

      if (adg_.all_completed() && !draining_ && !replan_pending &&
          obstacle_at_rest())
        break;
    }

    finalize();
    return std::move(result_);
  }

private:
  enum class ObstacleState { none, waiting, active, done };

  void trace(Tick t, TraceEvent::Kind kind, int agent, int idx, Vertex from, Vertex to)
  {
    result_.trace.push_back({t, kind, agent, idx, from, to});
  }

  bool obstacle_at_rest() const
  {
    return !cfg_.obstacle || obstacle_ == ObstacleState::done;
  }

  bool no_action_running() const
  {
    return std::all_of(running_.begin(), running_.end(), [](int id) { return id < 0; });
  }

  bool vertex_occupied(Vertex v) const
  {
    for (std::size_t k = 0; k < positions_.size(); ++k) {
      if (positions_[k] == v)
        return true;
      if (running_[k] >= 0 && adg_.node(running_[k]).action.to == v)
        return true;
    }
    return false;
  }

  Tick jitter_extra(int agent, int index) const
  {
    if (cfg_.jitter.max_extra <= 0)
      return 0;
    Rng rng(mix_seed(cfg_.jitter.seed ^ kJitterStream,
                     static_cast<std::uint64_t>(phase_),
                     static_cast<std::uint64_t>(agent),
                     static_cast<std::uint64_t>(index)));
    return static_cast<Tick>(
      rng.below(static_cast<std::uint64_t>(cfg_.jitter.max_extra) + 1));
  }

  void start_pass(Tick now)
  {
    for (int id : adg_.executable_actions()) {
      const AdgNode& node = adg_.node(id);
      const int agent = node.action.agent;

      // An action whose destination holds the obstacle does not start; the
      // agent stays parked on its current vertex and the start is retried at
      // the next event (the disappearance at the latest).
      if (obstacle_ == ObstacleState::active &&
          node.action.to == cfg_.obstacle->vertex) {
        if (blocked_traced_.insert(id).second) {
          trace(now, TraceEvent::Kind::blocked, agent, node.action.index,
                node.action.from, node.action.to);
        }
        continue;
      }

      adg_.record_started(id, now);
      trace(now, TraceEvent::Kind::start, agent, node.action.index, node.action.from,
            node.action.to);
      const Tick complete_at =
        now + node.duration + jitter_extra(agent, node.action.index);

      if (node.action.to != node.action.from) {
        presences_.push_back({node.action.from,
                              open_since_[static_cast<std::size_t>(agent)], now,
                              agent});
      }
      running_[static_cast<std::size_t>(agent)] = id;
      completions_.push({complete_at, id});
    }
  }

  void complete_action(int id, Tick now)
  {
    const AdgNode& node = adg_.node(id);
    const int agent = node.action.agent;
    adg_.record_completed(id, now);
    trace(now, TraceEvent::Kind::complete, agent, node.action.index, node.action.from,
          node.action.to);
    running_[static_cast<std::size_t>(agent)] = -1;
    result_.finish_ticks[static_cast<std::size_t>(agent)] = now;
    if (node.action.to != node.action.from) {
      positions_[static_cast<std::size_t>(agent)] = node.action.to;
      open_since_[static_cast<std::size_t>(agent)] = now;
    }
  }

  bool handover(Tick now)
  {
    draining_ = false;
    const PlanResult replan =
      solve_from_state(cfg_.map, positions_, goals_, cfg_.planner);
    result_.replan_runtime_s = solver_runtime_proxy(replan.stats);
    if (!replan.ok) {
      result_.failed = true;
      result_.failure_reason = "replanning failed: " + replan.failure_reason;
      return false;
    }
    Solution fresh = replan.solution;
    fresh.step_duration = cfg_.action_duration;
    adg_ = build_adg(fresh, now);
    phase_ = 1;
    return true;
  }

  void finalize()
  {
    for (std::size_t k = 0; k < positions_.size(); ++k)
      presences_.push_back({positions_[k], open_since_[k], kForever, static_cast<int>(k)});

    std::stable_sort(presences_.begin(), presences_.end(),
                     [](const Presence& a, const Presence& b) {
                       if (a.vertex != b.vertex) return a.vertex < b.vertex;
                       if (a.arrive != b.arrive) return a.arrive < b.arrive;
                       return a.agent < b.agent;
                     });
    for (std::size_t i = 1; i < presences_.size(); ++i) {
      const Presence& prev = presences_[i - 1];
      const Presence& next = presences_[i];
      if (prev.vertex == next.vertex && prev.agent != next.agent &&
          next.arrive <= prev.depart)
        ++result_.occupancy_violations;
    }

    if (!result_.failed) {
      for (std::size_t k = 0; k < positions_.size(); ++k) {
        if (positions_[k] != goals_[k]) {
          result_.failed = true;
          result_.failure_reason =
            "agent " + std::to_string(k) + " ended away from its goal";
          break;
        }
      }
    }

    result_.executed_soc = 0;
    result_.makespan = 0;
    for (Tick f : result_.finish_ticks) {
      result_.executed_soc += f;
      result_.makespan = std::max(result_.makespan, f);
    }
  }

  const ScenarioConfig& cfg_;
  ScenarioResult result_;
  Adg adg_;
  std::vector<Vertex> positions_;
  std::vector<Vertex> goals_;
  std::vector<Tick> open_since_;
  std::vector<int> running_;
  std::vector<Presence> presences_;
  std::priority_queue<std::pair<Tick, int>, std::vector<std::pair<Tick, int>>,
                      std::greater<std::pair<Tick, int>>>
    completions_;
  ObstacleState obstacle_ = ObstacleState::none;
  bool appear_tick_visited_ = false;
  bool bootstrap_ = true;
  bool draining_ = false;
  int phase_ = 0;
};

}  // namespace

ObstacleEvent sample_obstacle(const Solution& sol, std::uint64_t seed)
{
  const int makespan = sol.makespan_steps();
  const Tick step = sol.step_duration;
  if (makespan < 6)
    throw InvalidInput("makespan below six steps leaves no room for an obstacle");

  struct Candidate
  {
    int appear_step;
    Vertex vertex;
  };
  std::vector<Candidate> candidates;
  for (const AgentPlan& plan : sol.plans) {
    for (const Action& a : plan.actions) {
      if (a.to == a.from || a.index < 3)
        continue;
      const int appear_step = a.index - 3;
      bool occupied = false;
      for (const AgentPlan& other : sol.plans) {
        if (other.position(appear_step) == a.to) {
          occupied = true;
          break;
        }
      }
      if (!occupied)
        candidates.push_back({appear_step, a.to});
    }
  }
  if (candidates.empty())
    throw SimulationError("no vertex qualifies for an obstacle in this solution");
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.appear_step != b.appear_step) return a.appear_step < b.appear_step;
              return a.vertex < b.vertex;
            });

  Rng rng(mix_seed(kObstacleStream, seed));
  const Candidate pick = candidates[static_cast<std::size_t>(
    rng.below(static_cast<std::uint64_t>(candidates.size())))];

  ObstacleEvent event;
  event.vertex = pick.vertex;
  event.appear = pick.appear_step * step;
  event.disappear = rng.range(event.appear + 3 * step, makespan * step);
  return event;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg)
{
  if (cfg.action_duration <= 0)
    throw InvalidInput("action duration must be positive");
  if (cfg.obstacle) {
    if (cfg.obstacle->disappear < cfg.obstacle->appear + 3 * cfg.action_duration)
      throw InvalidInput("obstacle must stay at least three actions long");
    if (cfg.obstacle->appear < 0)
      throw InvalidInput("obstacle cannot appear before execution starts");
  }
  if (cfg.replan_time && *cfg.replan_time < 0)
    throw InvalidInput("replan time cannot be negative");
  Simulation sim(cfg);
  return sim.run();
}

double overhead_adjusted_soc(const ScenarioResult& result)
{
  return to_seconds(result.executed_soc) +
    result.replan_runtime_s * result.unfinished_at_replan;
}

std::string to_trace_text(const std::vector<TraceEvent>& trace)
{
  std::ostringstream out;
  for (const TraceEvent& e : trace) {
    const char* kind = nullptr;
    switch (e.kind) {
      case TraceEvent::Kind::start: kind = "start"; break;
      case TraceEvent::Kind::complete: kind = "complete"; break;
      case TraceEvent::Kind::blocked: kind = "blocked"; break;
      case TraceEvent::Kind::obstacle_appear: kind = "obstacle_appear"; break;
      case TraceEvent::Kind::obstacle_disappear: kind = "obstacle_disappear"; break;
      case TraceEvent::Kind::replan: kind = "replan"; break;
    }
    out << format_ticks(e.time) << ' ' << kind << ' ' << e.agent << ' ' << e.action_index
        << ' ' << e.from << ' ' << e.to << '\n';
  }
  return out.str();
}

}  // namespace mapf
