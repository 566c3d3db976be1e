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

#ifndef MAPF__FEATURES_HPP
#define MAPF__FEATURES_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "mapf/adg.hpp"
#include "mapf/grid_map.hpp"
#include "mapf/sim_time.hpp"

namespace mapf {

inline constexpr int kFeatureCount = 42;

/// Window sizes n over which the per-action delay features aggregate.
inline constexpr std::array<int, 7> kDelayWindows = {1, 3, 5, 7, 10, 15, 20};

using FeatureVector = std::array<double, kFeatureCount>;

/// Canonical feature names in vector order; also the dataset CSV header
/// prefix, so this order is a cross-module contract.
const std::vector<std::string>& feature_names();

/// Inclusive action-index range [first, last] of the up-to-n most recent
/// actions ending at `last_index`; {1, 0} (empty) when last_index is 0.
std::pair<int, int> action_window(int last_index, int n);

/// Reads the execution-state descriptors off a dependency-graph snapshot
/// taken at simulation time `t`. Maxima over empty sets are 0, and agents
/// with no finished (respectively assigned) action contribute nothing to the
/// plan-delay rows.
FeatureVector extract_features(const Adg& adg, const GridMap& map, Tick t);

}  // namespace mapf

#endif  // MAPF__FEATURES_HPP
