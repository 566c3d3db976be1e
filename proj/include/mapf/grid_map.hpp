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

#ifndef MAPF__GRID_MAP_HPP
#define MAPF__GRID_MAP_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace mapf {

/// Cell id in row-major order: v = y * width + x.
using Vertex = std::int32_t;

/// 4-connected grid environment. Cells are either free or blocked.
class GridMap {
public:
  GridMap() = default;
  GridMap(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  int cell_count() const { return width_ * height_; }

  bool in_bounds(int x, int y) const
  {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }
  bool in_bounds(Vertex v) const { return v >= 0 && v < cell_count(); }

  bool blocked(int x, int y) const { return blocked_[static_cast<std::size_t>(y) * width_ + x]; }
  bool blocked(Vertex v) const { return blocked_[static_cast<std::size_t>(v)]; }
  bool free(Vertex v) const { return in_bounds(v) && !blocked(v); }

  void set_blocked(int x, int y, bool b)
  {
    blocked_[static_cast<std::size_t>(y) * width_ + x] = b ? 1 : 0;
  }

  Vertex vertex(int x, int y) const { return static_cast<Vertex>(y * width_ + x); }
  int x_of(Vertex v) const { return static_cast<int>(v % width_); }
  int y_of(Vertex v) const { return static_cast<int>(v / width_); }

  /// Appends the free 4-neighbors of v to out (cleared first). Deterministic
  /// order: up, left, right, down.
  void free_neighbors(Vertex v, std::vector<Vertex>& out) const;

  int free_cell_count() const;
  std::vector<Vertex> free_cells() const;

  /// True if a path of free cells connects a and b.
  bool connected(Vertex a, Vertex b) const;

  /// BFS distance from every free cell to the target; -1 where unreachable.
  std::vector<int> bfs_distances(Vertex target) const;

  bool operator==(const GridMap& other) const = default;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> blocked_;
};

/// Parses the MovingAI grid format: `type`, `height H`, `width W`, `map`
/// header lines followed by H rows of W glyphs. `.` and `G` are free;
/// `@`, `O` and `T` are blocked. Anything else is a ParseError.
GridMap parse_movingai_map(const std::string& text);

/// Inverse of parse_movingai_map (emits `.` / `@`).
std::string to_movingai_map(const GridMap& map);

GridMap load_map_file(const std::string& path);

}  // namespace mapf

#endif  // MAPF__GRID_MAP_HPP
