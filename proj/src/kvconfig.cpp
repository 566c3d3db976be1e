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

#include "mapf/kvconfig.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mapf/errors.hpp"

namespace mapf {

namespace {

std::string trim(const std::string& s)
{
  const std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

KvConfig KvConfig::load(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

KvConfig KvConfig::parse(const std::string& text, const std::string& origin)
{
  KvConfig cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#')
      continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin + ": expected key = value", line_no);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ParseError(origin + ": empty key", line_no);
    for (const auto& [k, v] : cfg.entries_) {
      if (k == key)
        throw ParseError(origin + ": duplicate key '" + key + "'", line_no);
    }
    cfg.entries_.emplace_back(key, value);
  }
  return cfg;
}

bool KvConfig::has(const std::string& key) const
{
  for (const auto& [k, v] : entries_) {
    if (k == key)
      return true;
  }
  return false;
}

const std::string& KvConfig::get(const std::string& key) const
{
  for (const auto& [k, v] : entries_) {
    if (k == key)
      return v;
  }
  throw ParseError(origin_ + ": missing required key '" + key + "'");
}

std::string KvConfig::get_or(const std::string& key, const std::string& fallback) const
{
  return has(key) ? get(key) : fallback;
}

std::int64_t KvConfig::get_int(const std::string& key) const
{
  const std::string& raw = get(key);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc() || ptr != raw.data() + raw.size())
    throw ParseError(origin_ + ": key '" + key + "' is not an integer: " + raw);
  return value;
}

std::int64_t KvConfig::get_int_or(const std::string& key, std::int64_t fallback) const
{
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t KvConfig::get_u64_or(const std::string& key, std::uint64_t fallback) const
{
  if (!has(key))
    return fallback;
  const std::string& raw = get(key);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc() || ptr != raw.data() + raw.size())
    throw ParseError(origin_ + ": key '" + key + "' is not an unsigned integer: " + raw);
  return value;
}

double KvConfig::get_double_or(const std::string& key, double fallback) const
{
  if (!has(key))
    return fallback;
  const std::string& raw = get(key);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc() || ptr != raw.data() + raw.size())
    throw ParseError(origin_ + ": key '" + key + "' is not a number: " + raw);
  return value;
}

std::vector<std::pair<std::string, std::string>> KvConfig::with_prefix(
  const std::string& prefix) const
{
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& entry : entries_) {
    if (entry.first.rfind(prefix, 0) == 0)
      out.push_back(entry);
  }
  return out;
}

}  // namespace mapf
