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

#ifndef MAPF__SIM_TIME_HPP
#define MAPF__SIM_TIME_HPP

#include <cmath>
#include <cstdint>
#include <string>

namespace mapf {

// Simulation time is kept as integer deciseconds. Every schedule quantity in
// the pipeline (1 s actions, 0.1 s sampling grid) lives on this grid, so all
// time arithmetic, event ordering and cost comparisons are exact.
using Tick = std::int64_t;

inline constexpr Tick kTicksPerSecond = 10;

constexpr double to_seconds(Tick t) { return static_cast<double>(t) / 10.0; }

constexpr Tick seconds_to_ticks(double s)
{
  // round-to-nearest; inputs are expected to already sit on the 0.1 s grid
  return static_cast<Tick>(s * 10.0 + (s >= 0 ? 0.5 : -0.5));
}

/// Exact decimal rendering of a tick count in seconds, e.g. 37 -> "3.7".
inline std::string format_ticks(Tick t)
{
  const bool neg = t < 0;
  const Tick a = neg ? -t : t;
  std::string out = neg ? "-" : "";
  out += std::to_string(a / 10);
  if (a % 10 != 0) {
    out += '.';
    out += static_cast<char>('0' + (a % 10));
  }
  return out;
}

}  // namespace mapf

#endif  // MAPF__SIM_TIME_HPP
