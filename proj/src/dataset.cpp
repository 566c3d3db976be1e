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

#include "mapf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mapf/errors.hpp"
#include "mapf/executor.hpp"
#include "mapf/instance.hpp"
#include "mapf/parallel.hpp"
#include "mapf/rng.hpp"

namespace mapf {

namespace {

constexpr std::uint64_t kInstanceStream = 0x696e7374;
constexpr std::uint64_t kObstacleSeedStream = 0x6f627365;
constexpr std::uint64_t kReplanSeedStream = 0x72706c6e;
constexpr std::uint64_t kReplanTimeStream = 0x7274696d;
constexpr std::uint64_t kSplitStream = 0x73706c74;

std::vector<int> parse_agent_list(const std::string& raw, const std::string& key)
{
  std::vector<int> counts;
  std::string token;
  std::istringstream in(raw);
  while (std::getline(in, token, ',')) {
    int value = 0;
    const char* begin = token.data();
    const char* end = token.data() + token.size();
    while (begin != end && *begin == ' ')
      ++begin;
    while (end != begin && end[-1] == ' ')
      --end;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || value < 1)
      throw ParseError("bad agent count in '" + key + "': " + token);
    counts.push_back(value);
  }
  if (counts.empty())
    throw ParseError("empty agent list in '" + key + "'");
  return counts;
}

}  // namespace

GenerationConfig parse_generation_config(const KvConfig& kv)
{
  GenerationConfig cfg;
  cfg.seed = kv.get_u64_or("seed", 0);
  cfg.instances_per_count = static_cast<int>(kv.get_int("instances_per_count"));
  cfg.obstacle_seeds = static_cast<int>(kv.get_int("obstacle_seeds"));
  cfg.replan_seeds = static_cast<int>(kv.get_int("replan_seeds"));
  cfg.planner.timeout_s = kv.get_double_or("planner_timeout_s", cfg.planner.timeout_s);
  cfg.planner.low_level_expansion_limit =
    kv.get_int_or("planner_node_limit", cfg.planner.low_level_expansion_limit);
  if (cfg.instances_per_count < 1 || cfg.obstacle_seeds < 1 || cfg.replan_seeds < 1)
    throw InvalidInput("generation counts must all be at least 1");

  for (const auto& [key, value] : kv.with_prefix("map.")) {
    if (key.size() > 7 && key.compare(key.size() - 7, 7, ".agents") == 0)
      continue;
    MapJob job;
    job.name = key.substr(4);
    if (job.name.empty() || job.name.find(',') != std::string::npos)
      throw ParseError("bad map name in key '" + key + "'");
    job.path = value;
    job.agent_counts = parse_agent_list(kv.get(key + ".agents"), key + ".agents");
    cfg.maps.push_back(std::move(job));
  }
  if (cfg.maps.empty())
    throw InvalidInput("config defines no maps");
  return cfg;
}

namespace {

struct AdmittedInstance
{
  std::size_t map_index = 0;
  int agents = 0;
  std::uint64_t inst_seed = 0;
  Solution solution;
  Tick soc_e_ticks = 0;
};

struct PairOutput
{
  std::vector<AdmittedInstance> admitted;
  std::vector<SkipEntry> skipped;
  std::string fatal;
};

std::string instance_context(const std::string& map_name, int agents, std::uint64_t seed)
{
  return "map=" + map_name + " agents=" + std::to_string(agents) +
    " inst_seed=" + std::to_string(seed);
}

/// Scans the instance-seed sequence for one (map, agent count) cell until
/// enough admitted instances were found. An instance is admitted when the
/// planner solves it within budget, the plan is long enough to host an
/// obstacle, and the undisturbed execution succeeds.
PairOutput admit_instances(
  const GenerationConfig& cfg, const GridMap& map, std::size_t map_index, int agents)
{
  PairOutput out;
  const std::string& map_name = cfg.maps[map_index].name;
  const std::uint64_t scan_limit =
    static_cast<std::uint64_t>(cfg.instances_per_count) * 50 + 200;
  std::uint64_t ordinal = 0;
  while (out.admitted.size() < static_cast<std::size_t>(cfg.instances_per_count)) {
    if (ordinal >= scan_limit) {
      out.fatal = "exhausted the instance seed scan for map=" + map_name +
        " agents=" + std::to_string(agents) + " after " + std::to_string(ordinal) +
        " candidates";
      return out;
    }
    const std::uint64_t inst_seed = mix_seed(
      cfg.seed ^ kInstanceStream, map_index, static_cast<std::uint64_t>(agents),
      ordinal);
    ++ordinal;
    const std::string context = instance_context(map_name, agents, inst_seed);

    MapfInstance instance;
    try {
      instance = generate_instance(map, agents, inst_seed);
    } catch (const std::exception& e) {
      out.fatal = context + ": " + e.what();
      return out;
    }
    PlanResult plan = solve_1robust(instance, cfg.planner);
    if (!plan.ok) {
      out.skipped.push_back({context, "planner: " + plan.failure_reason});
      continue;
    }
    if (plan.solution.makespan_steps() < 6) {
      out.skipped.push_back({context, "plan too short to host an obstacle"});
      continue;
    }
    try {
      sample_obstacle(plan.solution, 0);  // placement feasibility is seed-independent
    } catch (const std::exception& e) {
      out.skipped.push_back({context, e.what()});
      continue;
    }
    ScenarioConfig baseline;
    baseline.map = map;
    baseline.solution = plan.solution;
    baseline.planner = cfg.planner;
    const ScenarioResult result = run_scenario(baseline);
    if (result.failed) {
      out.skipped.push_back({context, "baseline run: " + result.failure_reason});
      continue;
    }
    out.admitted.push_back(
      {map_index, agents, inst_seed, std::move(plan.solution), result.executed_soc});
  }
  return out;
}

struct UnitOutput
{
  std::vector<LabeledRecord> records;
  std::vector<SkipEntry> skipped;
  std::string fatal;
};

Tick sample_replan_tick(const ObstacleEvent& obs, Tick ei_makespan, int replan_index,
                        std::uint64_t replan_seed)
{
  Rng rng(mix_seed(kReplanTimeStream, replan_seed));
  if (replan_index == 0) {
    if (obs.appear > kTicksPerSecond)
      return rng.range(kTicksPerSecond, obs.appear - 1);
    if (obs.appear > 0)
      return rng.range(0, obs.appear - 1);
    return 0;
  }
  const Tick hi = std::max(
    obs.appear, std::min(obs.disappear + 3 * kTicksPerSecond, ei_makespan));
  return rng.range(obs.appear, hi);
}

/// Runs one (instance, obstacle seed) unit: the disturbed scenario once,
/// then one replanned scenario per replan seed.
UnitOutput run_unit(
  const GenerationConfig& cfg, const GridMap& map, const AdmittedInstance& inst,
  int obstacle_index)
{
  UnitOutput out;
  const std::string& map_name = cfg.maps[inst.map_index].name;
  const std::uint64_t obs_seed = mix_seed(
    inst.inst_seed ^ kObstacleSeedStream, static_cast<std::uint64_t>(obstacle_index));
  const std::string context = instance_context(map_name, inst.agents, inst.inst_seed) +
    " obs_seed=" + std::to_string(obs_seed);

  const ObstacleEvent obstacle = sample_obstacle(inst.solution, obs_seed);

  ScenarioConfig ei_cfg;
  ei_cfg.map = map;
  ei_cfg.solution = inst.solution;
  ei_cfg.obstacle = obstacle;
  ei_cfg.planner = cfg.planner;
  const ScenarioResult ei = run_scenario(ei_cfg);
  if (ei.failed) {
    out.skipped.push_back({context, "disturbed run: " + ei.failure_reason});
    return out;
  }

  for (int r = 0; r < cfg.replan_seeds; ++r) {
    const std::uint64_t replan_seed = mix_seed(
      inst.inst_seed ^ kReplanSeedStream, static_cast<std::uint64_t>(obstacle_index),
      static_cast<std::uint64_t>(r));
    const Tick t = sample_replan_tick(obstacle, ei.makespan, r, replan_seed);

    ScenarioConfig eir_cfg = ei_cfg;
    eir_cfg.replan_time = t;
    const ScenarioResult eir = run_scenario(eir_cfg);
    const std::string rcontext =
      context + " replan_seed=" + std::to_string(replan_seed);
    if (eir.failed) {
      out.skipped.push_back({rcontext, "replanned run: " + eir.failure_reason});
      continue;
    }
    if (!eir.adg_at_replan) {
      out.skipped.push_back({rcontext, "replanned run recorded no graph snapshot"});
      continue;
    }

    LabeledRecord rec;
    rec.features = extract_features(*eir.adg_at_replan, map, t);
    rec.soc_e = to_seconds(inst.soc_e_ticks);
    rec.soc_ei = to_seconds(ei.executed_soc);
    rec.soc_eir = to_seconds(eir.executed_soc);
    rec.soc_eirp = overhead_adjusted_soc(eir);
    rec.y = rec.soc_ei - rec.soc_eir;
    rec.map_name = map_name;
    rec.agents = inst.agents;
    rec.inst_seed = inst.inst_seed;
    rec.obs_seed = obs_seed;
    rec.replan_seed = replan_seed;
    rec.replan_t = to_seconds(t);
    out.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

DatasetResult generate_dataset(const GenerationConfig& cfg)
{
  if (cfg.maps.empty())
    throw InvalidInput("generation config has no maps");
  if (cfg.instances_per_count < 1 || cfg.obstacle_seeds < 1 || cfg.replan_seeds < 1)
    throw InvalidInput("generation counts must all be at least 1");

  std::vector<GridMap> maps;
  maps.reserve(cfg.maps.size());
  for (const MapJob& job : cfg.maps)
    maps.push_back(load_map_file(job.path));

  struct Cell
  {
    std::size_t map_index;
    int agents;
  };
  std::vector<Cell> cells;
  for (std::size_t m = 0; m < cfg.maps.size(); ++m) {
    for (int agents : cfg.maps[m].agent_counts)
      cells.push_back({m, agents});
  }

  std::vector<PairOutput> cell_out(cells.size());
  parallel_for(cells.size(), cfg.jobs, [&](std::size_t i) {
    try {
      cell_out[i] = admit_instances(cfg, maps[cells[i].map_index], cells[i].map_index,
                                    cells[i].agents);
    } catch (const std::exception& e) {
      cell_out[i].fatal = e.what();
    }
  });

  DatasetResult result;
  std::vector<AdmittedInstance> admitted;
  for (PairOutput& out : cell_out) {
    if (!out.fatal.empty())
      throw SimulationError(out.fatal);
    for (AdmittedInstance& inst : out.admitted)
      admitted.push_back(std::move(inst));
    for (SkipEntry& skip : out.skipped)
      result.skipped.push_back(std::move(skip));
  }

  struct Unit
  {
    std::size_t instance;
    int obstacle_index;
  };
  std::vector<Unit> units;
  for (std::size_t i = 0; i < admitted.size(); ++i) {
    for (int o = 0; o < cfg.obstacle_seeds; ++o)
      units.push_back({i, o});
  }

  std::vector<UnitOutput> unit_out(units.size());
  parallel_for(units.size(), cfg.jobs, [&](std::size_t i) {
    const AdmittedInstance& inst = admitted[units[i].instance];
    try {
      unit_out[i] = run_unit(cfg, maps[inst.map_index], inst, units[i].obstacle_index);
    } catch (const std::exception& e) {
      unit_out[i].fatal = e.what();
    }
  });

  for (UnitOutput& out : unit_out) {
    if (!out.fatal.empty())
      throw SimulationError(out.fatal);
    for (LabeledRecord& rec : out.records)
      result.records.push_back(std::move(rec));
    for (SkipEntry& skip : out.skipped)
      result.skipped.push_back(std::move(skip));
  }
  return result;
}

std::string format_double(double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc())
    throw InvalidInput("unformattable number");
  return std::string(buf, ptr);
}

double parse_double(const std::string& text)
{
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError("not a number: " + text);
  return v;
}

const std::string& csv_header()
{
  static const std::string header = [] {
    std::string h;
    for (const std::string& name : feature_names()) {
      h += name;
      h += ',';
    }
    h += "y,soc_e,soc_ei,soc_eir,soc_eirp,map,agents,inst_seed,obs_seed,replan_seed,replan_t";
    return h;
  }();
  return header;
}

void write_text_atomic(const std::string& path, const std::string& text)
{
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IoError("cannot write " + tmp);
    out << text;
    if (!out.flush())
      throw IoError("failed writing " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw IoError("cannot move " + tmp + " to " + path + ": " + ec.message());
}

namespace {

std::vector<std::string> split_fields(const std::string& line)
{
  std::vector<std::string> fields;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(begin));
      return fields;
    }
    fields.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
}

std::uint64_t parse_u64_field(const std::string& text)
{
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError("not an unsigned integer: " + text);
  return v;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<LabeledRecord>& records)
{
  std::string text = csv_header();
  text += '\n';
  for (const LabeledRecord& rec : records) {
    for (double f : rec.features) {
      text += format_double(f);
      text += ',';
    }
    text += format_double(rec.y);
    text += ',';
    text += format_double(rec.soc_e);
    text += ',';
    text += format_double(rec.soc_ei);
    text += ',';
    text += format_double(rec.soc_eir);
    text += ',';
    text += format_double(rec.soc_eirp);
    text += ',';
    text += rec.map_name;
    text += ',';
    text += std::to_string(rec.agents);
    text += ',';
    text += std::to_string(rec.inst_seed);
    text += ',';
    text += std::to_string(rec.obs_seed);
    text += ',';
    text += std::to_string(rec.replan_seed);
    text += ',';
    text += format_double(rec.replan_t);
    text += '\n';
  }
  write_text_atomic(path, text);
}

std::vector<LabeledRecord> read_csv(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path + ": empty file");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != csv_header())
    throw ParseError(path + ": unexpected header");

  std::vector<LabeledRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != static_cast<std::size_t>(kFeatureCount) + 11)
      throw ParseError(path + ": wrong column count", line_no);
    LabeledRecord rec;
    for (int f = 0; f < kFeatureCount; ++f)
      rec.features[static_cast<std::size_t>(f)] =
        parse_double(fields[static_cast<std::size_t>(f)]);
    std::size_t at = kFeatureCount;
    rec.y = parse_double(fields[at++]);
    rec.soc_e = parse_double(fields[at++]);
    rec.soc_ei = parse_double(fields[at++]);
    rec.soc_eir = parse_double(fields[at++]);
    rec.soc_eirp = parse_double(fields[at++]);
    rec.map_name = fields[at++];
    rec.agents = static_cast<int>(parse_u64_field(fields[at++]));
    rec.inst_seed = parse_u64_field(fields[at++]);
    rec.obs_seed = parse_u64_field(fields[at++]);
    rec.replan_seed = parse_u64_field(fields[at++]);
    rec.replan_t = parse_double(fields[at++]);
    records.push_back(std::move(rec));
  }
  return records;
}

void write_skip_log(const std::string& path, const std::vector<SkipEntry>& skipped)
{
  std::string text;
  for (const SkipEntry& skip : skipped) {
    text += skip.context;
    text += " reason=";
    text += skip.reason;
    text += '\n';
  }
  write_text_atomic(path, text);
}

std::pair<std::vector<LabeledRecord>, std::vector<LabeledRecord>> split_dataset(
  const std::vector<LabeledRecord>& records, double train_fraction, std::uint64_t seed)
{
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
    throw InvalidInput("train fraction must be strictly between 0 and 1");
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  Rng rng(mix_seed(kSplitStream, seed));
  rng.shuffle(order);
  const std::size_t train_n = static_cast<std::size_t>(
    static_cast<double>(records.size()) * train_fraction);
  std::pair<std::vector<LabeledRecord>, std::vector<LabeledRecord>> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i < train_n)
      out.first.push_back(records[order[i]]);
    else
      out.second.push_back(records[order[i]]);
  }
  return out;
}

}  // namespace mapf
