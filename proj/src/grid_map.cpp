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

#include "mapf/grid_map.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "mapf/errors.hpp"

namespace mapf {

GridMap::GridMap(int width, int height)
: width_(width), height_(height)
{
  if (width < 1 || height < 1)
    throw InvalidInput("grid dimensions must be at least 1x1");
  blocked_.assign(static_cast<std::size_t>(width) * height, 0);
}

void GridMap::free_neighbors(Vertex v, std::vector<Vertex>& out) const
{
  out.clear();
  const int x = x_of(v);
  const int y = y_of(v);
  if (y > 0 && !blocked(x, y - 1)) out.push_back(vertex(x, y - 1));
  if (x > 0 && !blocked(x - 1, y)) out.push_back(vertex(x - 1, y));
  if (x + 1 < width_ && !blocked(x + 1, y)) out.push_back(vertex(x + 1, y));
  if (y + 1 < height_ && !blocked(x, y + 1)) out.push_back(vertex(x, y + 1));
}

int GridMap::free_cell_count() const
{
  return static_cast<int>(std::count(blocked_.begin(), blocked_.end(), 0));
}

std::vector<Vertex> GridMap::free_cells() const
{
  std::vector<Vertex> cells;
  cells.reserve(blocked_.size());
  for (Vertex v = 0; v < cell_count(); ++v)
    if (!blocked(v)) cells.push_back(v);
  return cells;
}

bool GridMap::connected(Vertex a, Vertex b) const
{
  if (!free(a) || !free(b)) return false;
  if (a == b) return true;
  return bfs_distances(b)[static_cast<std::size_t>(a)] >= 0;
}

std::vector<int> GridMap::bfs_distances(Vertex target) const
{
  std::vector<int> dist(static_cast<std::size_t>(cell_count()), -1);
  if (!free(target)) return dist;
  std::deque<Vertex> queue{target};
  dist[static_cast<std::size_t>(target)] = 0;
  std::vector<Vertex> nbrs;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    free_neighbors(v, nbrs);
    for (Vertex n : nbrs) {
      if (dist[static_cast<std::size_t>(n)] < 0) {
        dist[static_cast<std::size_t>(n)] = dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(n);
      }
    }
  }
  return dist;
}

namespace {

std::vector<std::string> split_lines(const std::string& text)
{
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

GridMap parse_movingai_map(const std::string& text)
{
  const auto lines = split_lines(text);
  if (lines.size() < 4)
    throw ParseError("map file too short for a MovingAI header", 1);

  auto expect_key = [&](std::size_t idx, const std::string& key) -> std::string {
    if (idx >= lines.size())
      throw ParseError("missing `" + key + "` header line", static_cast<int>(idx) + 1);
    std::istringstream in(lines[idx]);
    std::string k, rest;
    in >> k;
    if (k != key)
      throw ParseError("expected `" + key + "` header line, got `" + lines[idx] + "`",
                       static_cast<int>(idx) + 1);
    std::getline(in, rest);
    // strip leading whitespace
    const auto pos = rest.find_first_not_of(" \t");
    return pos == std::string::npos ? std::string() : rest.substr(pos);
  };

  expect_key(0, "type");
  int height = 0;
  int width = 0;
  try {
    height = std::stoi(expect_key(1, "height"));
    width = std::stoi(expect_key(2, "width"));
  } catch (const std::logic_error&) {
    throw ParseError("height/width header is not an integer", 2);
  }
  if (height < 1 || width < 1)
    throw ParseError("height/width must be positive", 2);
  expect_key(3, "map");

  if (lines.size() < 4 + static_cast<std::size_t>(height))
    throw ParseError("map body has fewer rows than the header announces",
                     static_cast<int>(lines.size()) + 1);

  GridMap map(width, height);
  for (int y = 0; y < height; ++y) {
    const std::string& row = lines[4 + static_cast<std::size_t>(y)];
    const int line_no = 5 + y;
    if (static_cast<int>(row.size()) != width)
      throw ParseError("row has " + std::to_string(row.size()) + " glyphs, expected " +
                       std::to_string(width), line_no);
    for (int x = 0; x < width; ++x) {
      switch (row[static_cast<std::size_t>(x)]) {
        case '.':
        case 'G':
          break;
        case '@':
        case 'O':
        case 'T':
          map.set_blocked(x, y, true);
          break;
        default:
          throw ParseError(std::string("unknown map glyph `") + row[static_cast<std::size_t>(x)] + "`",
                           line_no);
      }
    }
  }
  // extra non-empty content after the body is a formatting error
  for (std::size_t i = 4 + static_cast<std::size_t>(height); i < lines.size(); ++i) {
    if (!lines[i].empty())
      throw ParseError("unexpected content after map body", static_cast<int>(i) + 1);
  }
  return map;
}

std::string to_movingai_map(const GridMap& map)
{
  std::ostringstream out;
  out << "type octile\n";
  out << "height " << map.height() << "\n";
  out << "width " << map.width() << "\n";
  out << "map\n";
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x)
      out << (map.blocked(x, y) ? '@' : '.');
    out << "\n";
  }
  return out.str();
}

GridMap load_map_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError("cannot open map file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_movingai_map(buf.str());
}

}  // namespace mapf
