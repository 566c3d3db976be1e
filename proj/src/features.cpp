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

#include "mapf/features.hpp"

#include <algorithm>

namespace mapf {

const std::vector<std::string>& feature_names()
{
  static const std::vector<std::string> names = [] {
    std::vector<std::string> list = {
      "map_height",
      "map_width",
      "agents_count",
      "planned_soc",
      "planned_makespan",
      "replan_time",
      "unfinished_agents",
      "progress_gap",
      "highest_plan_delay",
      "highest_exp_plan_delay",
      "total_plan_delay",
      "total_exp_plan_delay",
    };
    for (const char* base :
         {"highest_action_delay", "highest_exp_action_delay", "total_action_delay",
          "total_exp_action_delay"}) {
      for (int n : kDelayWindows)
        list.push_back(std::string(base) + "_n" + std::to_string(n));
    }
    list.push_back("highest_slack_increase");
    list.push_back("waiting_agents");
    return list;
  }();
  return names;
}

std::pair<int, int> action_window(int last_index, int n)
{
  if (last_index <= 0)
    return {1, 0};
  return {std::max(1, last_index - n + 1), last_index};
}

FeatureVector extract_features(const Adg& adg, const GridMap& map, Tick t)
{
  const int n_agents = adg.agent_count();
  FeatureVector x{};
  int at = 0;
  auto put = [&x, &at](double v) { x[static_cast<std::size_t>(at++)] = v; };

  put(map.height());
  put(map.width());
  put(n_agents);

  Tick planned_soc = 0;
  Tick planned_makespan = 0;
  for (int k = 0; k < n_agents; ++k) {
    const int len = adg.plan_length(k);
    const Tick cost = len > 0
      ? adg.node(adg.node_id(k, len)).planned_complete - adg.time_origin()
      : 0;
    planned_soc += cost;
    planned_makespan = std::max(planned_makespan, cost);
  }
  put(to_seconds(planned_soc));
  put(to_seconds(planned_makespan));

  put(to_seconds(t));

  int unfinished = 0;
  int progress_min = n_agents > 0 ? adg.last_completed_index(0) : 0;
  int progress_max = progress_min;
  int waiting = 0;
  for (int k = 0; k < n_agents; ++k) {
    const int p = adg.last_completed_index(k);
    if (p != adg.plan_length(k))
      ++unfinished;
    progress_min = std::min(progress_min, p);
    progress_max = std::max(progress_max, p);
    if (adg.last_started_index(k) == p)
      ++waiting;
  }
  put(unfinished);
  put(progress_max - progress_min);

  Tick highest_plan = 0;
  Tick highest_exp_plan = 0;
  Tick total_plan = 0;
  Tick total_exp_plan = 0;
  for (int k = 0; k < n_agents; ++k) {
    const int p = adg.last_completed_index(k);
    if (p >= 1) {
      const AdgNode& node = adg.node(adg.node_id(k, p));
      const Tick delay = *node.actual_complete - node.planned_complete;
      highest_plan = std::max(highest_plan, delay);
      total_plan += delay;
    }
    const int e = adg.last_started_index(k);
    if (e >= 1) {
      const AdgNode& node = adg.node(adg.node_id(k, e));
      const Tick delay = node.est_complete - node.planned_complete;
      highest_exp_plan = std::max(highest_exp_plan, delay);
      total_exp_plan += delay;
    }
  }
  put(to_seconds(highest_plan));
  put(to_seconds(highest_exp_plan));
  put(to_seconds(total_plan));
  put(to_seconds(total_exp_plan));

  // Per-window action-delay aggregates. The finished windows use actual
  // durations; the assigned windows use estimated durations, which collapse
  // to actuals once an action completes.
  auto window_sum = [&adg](int agent, int last_index, int n, bool estimated) {
    const auto [first, last] = action_window(last_index, n);
    Tick sum = 0;
    for (int i = first; i <= last; ++i) {
      const AdgNode& node = adg.node(adg.node_id(agent, i));
      const Tick actual_or_est = estimated
        ? node.est_complete - node.est_start
        : *node.actual_complete - *node.actual_start;
      sum += actual_or_est - node.duration;
    }
    return sum;
  };
  for (const bool estimated : {false, true}) {
    for (int n : kDelayWindows) {
      Tick highest = 0;
      for (int k = 0; k < n_agents; ++k) {
        const int last =
          estimated ? adg.last_started_index(k) : adg.last_completed_index(k);
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
          estimated ? adg.last_started_index(k) : adg.last_completed_index(k);
        if (last >= 1)
          total += window_sum(k, last, n, estimated);
      }
      put(to_seconds(total));
    }
  }

  Tick highest_slack = 0;
  for (const EdgeSlack& slack : adg.edge_slacks()) {
    if (!adg.satisfied(slack.edge))
      highest_slack = std::max(highest_slack, slack.expected - slack.planned);
  }
  put(to_seconds(highest_slack));

  put(waiting);
  return x;
}

}  // namespace mapf
