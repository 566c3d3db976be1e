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

#include "joint_oracle.hpp"

#include <queue>
#include <unordered_map>

#include "mapf/errors.hpp"

namespace mapf::test {

namespace {

// Positions in bits 0..47 (8 bits per agent), finish mask in bits 48..53.
std::uint64_t pack(const std::vector<Vertex>& pos, unsigned mask)
{
  std::uint64_t key = static_cast<std::uint64_t>(mask) << 48;
  for (std::size_t k = 0; k < pos.size(); ++k)
    key |= static_cast<std::uint64_t>(pos[k]) << (8 * k);
  return key;
}

void unpack(std::uint64_t key, int n, std::vector<Vertex>& pos, unsigned& mask)
{
  mask = static_cast<unsigned>(key >> 48);
  for (int k = 0; k < n; ++k)
    pos[static_cast<std::size_t>(k)] = static_cast<Vertex>((key >> (8 * k)) & 0xff);
}

}  // namespace

std::optional<long long> joint_optimal_soc(
  const GridMap& map,
  const std::vector<Vertex>& starts,
  const std::vector<Vertex>& goals)
{
  const int n = static_cast<int>(starts.size());
  if (n < 1 || n > 6)
    throw InvalidInput("joint oracle handles 1 to 6 agents");
  if (map.cell_count() > 256)
    throw InvalidInput("joint oracle handles maps up to 256 cells");
  if (goals.size() != starts.size())
    throw InvalidInput("starts and goals differ in length");

  const unsigned all = (1u << n) - 1;

  using Entry = std::pair<long long, std::uint64_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  std::unordered_map<std::uint64_t, long long> dist;

  const std::uint64_t start_key = pack(starts, 0);
  dist[start_key] = 0;
  open.push({0, start_key});

  std::vector<Vertex> at(static_cast<std::size_t>(n));
  std::vector<Vertex> next(static_cast<std::size_t>(n));
  std::vector<std::vector<Vertex>> choices(static_cast<std::size_t>(n));
  std::vector<Vertex> scratch;

  auto relax = [&](std::uint64_t key, long long cost) {
    auto it = dist.find(key);
    if (it == dist.end() || cost < it->second) {
      dist[key] = cost;
      open.push({cost, key});
    }
  };

  while (!open.empty()) {
    const auto [cost, key] = open.top();
    open.pop();
    if (dist[key] != cost)
      continue;
    unsigned mask = 0;
    unpack(key, n, at, mask);
    if (mask == all)
      return cost;

    // Zero-cost finish declarations for agents standing on their goals.
    for (int k = 0; k < n; ++k) {
      if (!(mask & (1u << k)) && at[static_cast<std::size_t>(k)] == goals[static_cast<std::size_t>(k)])
        relax(key | (1ull << (48 + k)), cost);
    }

    long long step_cost = 0;
    for (int k = 0; k < n; ++k) {
      if (mask & (1u << k)) {
        choices[static_cast<std::size_t>(k)].assign(1, at[static_cast<std::size_t>(k)]);
      } else {
        map.free_neighbors(at[static_cast<std::size_t>(k)], scratch);
        scratch.push_back(at[static_cast<std::size_t>(k)]);
        choices[static_cast<std::size_t>(k)] = scratch;
        ++step_cost;
      }
    }

    // Cartesian product over per-agent moves, pruned by the 1-robust rule:
    // destinations pairwise distinct and never equal to another agent's
    // current vertex.
    std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
    while (true) {
      bool ok = true;
      for (int k = 0; k < n && ok; ++k) {
        next[static_cast<std::size_t>(k)] =
          choices[static_cast<std::size_t>(k)][pick[static_cast<std::size_t>(k)]];
        for (int j = 0; j < k && ok; ++j) {
          if (next[static_cast<std::size_t>(k)] == next[static_cast<std::size_t>(j)])
            ok = false;
        }
        for (int j = 0; j < n && ok; ++j) {
          if (j != k && next[static_cast<std::size_t>(k)] == at[static_cast<std::size_t>(j)])
            ok = false;
        }
      }
      if (ok)
        relax(pack(next, mask), cost + step_cost);

      int carry = 0;
      while (carry < n) {
        auto& p = pick[static_cast<std::size_t>(carry)];
        if (++p < choices[static_cast<std::size_t>(carry)].size())
          break;
        p = 0;
        ++carry;
      }
      if (carry == n)
        break;
    }
  }
  return std::nullopt;
}

}  // namespace mapf::test
