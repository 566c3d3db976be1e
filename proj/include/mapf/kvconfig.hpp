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

#ifndef MAPF__KVCONFIG_HPP
#define MAPF__KVCONFIG_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mapf {

/// Flat `key = value` configuration file. Lines starting with '#' and blank
/// lines are skipped; keys keep their file order and must be unique.
class KvConfig
{
public:
  static KvConfig load(const std::string& path);
  static KvConfig parse(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) const;
  double get_double_or(const std::string& key, double fallback) const;

  /// Entries whose key starts with `prefix`, in file order.
  std::vector<std::pair<std::string, std::string>> with_prefix(
    const std::string& prefix) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const
  {
    return entries_;
  }

private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::string origin_;
};

}  // namespace mapf

#endif  // MAPF__KVCONFIG_HPP
