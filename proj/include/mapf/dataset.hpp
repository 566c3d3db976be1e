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

#ifndef MAPF__DATASET_HPP
#define MAPF__DATASET_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mapf/features.hpp"
#include "mapf/kvconfig.hpp"
#include "mapf/planner.hpp"

namespace mapf {

/// One labeled experiment: execution-state features at the replanning time
/// plus the cost outcomes of the scenario family they were measured in.
/// All costs and times are in seconds.
struct LabeledRecord
{
  FeatureVector features{};
  double y = 0.0;  // soc_ei - soc_eir
  double soc_e = 0.0;
  double soc_ei = 0.0;
  double soc_eir = 0.0;
  double soc_eirp = 0.0;
  std::string map_name;
  int agents = 0;
  std::uint64_t inst_seed = 0;
  std::uint64_t obs_seed = 0;
  std::uint64_t replan_seed = 0;
  double replan_t = 0.0;
};

struct MapJob
{
  std::string name;
  std::string path;
  std::vector<int> agent_counts;
};

struct GenerationConfig
{
  std::vector<MapJob> maps;
  int instances_per_count = 1;
  int obstacle_seeds = 1;
  int replan_seeds = 1;
  std::uint64_t seed = 0;
  PlannerConfig planner;
  int jobs = 1;
};

/// Reads the generation keys out of a flat config: `seed`,
/// `instances_per_count`, `obstacle_seeds`, `replan_seeds`,
/// `planner_timeout_s`, `planner_node_limit`, and per map
/// `map.<name> = <path>` with `map.<name>.agents = <comma list>`.
GenerationConfig parse_generation_config(const KvConfig& kv);

/// A combination that was skipped instead of producing records.
struct SkipEntry
{
  std::string context;  // key=value pairs identifying the combination
  std::string reason;
};

struct DatasetResult
{
  std::vector<LabeledRecord> records;
  std::vector<SkipEntry> skipped;
};

/// Runs the whole experiment grid. For every admitted instance one baseline
/// scenario gives soc_e, per obstacle seed one disturbed scenario gives
/// soc_ei, and per replan seed one replanned scenario gives soc_eir plus the
/// features captured when the replan triggered. Instance seeds that fail
/// admission (unsolvable in budget, too short for an obstacle) are skipped
/// and the seed sequence continues. Deterministic for a given config,
/// including across jobs values.
DatasetResult generate_dataset(const GenerationConfig& cfg);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);
double parse_double(const std::string& text);

/// Writes via a temp file and rename so readers never see partial output.
void write_text_atomic(const std::string& path, const std::string& text);

const std::string& csv_header();

void write_csv(const std::string& path, const std::vector<LabeledRecord>& records);
std::vector<LabeledRecord> read_csv(const std::string& path);
void write_skip_log(const std::string& path, const std::vector<SkipEntry>& skipped);

/// Deterministic shuffle, then the first floor(n * train_fraction) records
/// form the training split.
std::pair<std::vector<LabeledRecord>, std::vector<LabeledRecord>> split_dataset(
  const std::vector<LabeledRecord>& records, double train_fraction,
  std::uint64_t seed);

}  // namespace mapf

#endif  // MAPF__DATASET_HPP
