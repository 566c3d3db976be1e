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

// Compares the serial (jobs = 1) and OpenMP paths of the parallel kernels:
// the matrix products behind the network and whole-corpus dataset
// generation. Fails loudly if the two paths disagree anywhere, since every
// reproducibility guarantee rests on them being bit-identical.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>

#include "mapf/dataset.hpp"
#include "mapf/grid_map.hpp"
#include "mapf/instance.hpp"
#include "mapf/kvconfig.hpp"
#include "mapf/matrix.hpp"
#include "mapf/parallel.hpp"
#include "mapf/rng.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
    .count();
}

mapf::Matrix random_matrix(int rows, int cols, std::uint64_t seed)
{
  mapf::Matrix m(rows, cols);
  mapf::Rng rng(seed);
  for (double& v : m.a)
    v = rng.uniform() * 2.0 - 1.0;
  return m;
}

int bench_matmul(int jobs)
{
  const mapf::Matrix a = random_matrix(384, 256, 11);
  const mapf::Matrix b = random_matrix(192, 256, 22);
  const mapf::Matrix c = random_matrix(384, 192, 33);
  constexpr int kRounds = 20;

  mapf::Matrix serial_nt, serial_tn, serial_nn;
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < kRounds; ++i) {
    mapf::matmul_nt(a, b, serial_nt, 1);
    mapf::matmul_tn(c, a, serial_tn, 1);
    mapf::matmul_nn(c, b, serial_nn, 1);
  }
  const double serial_s = seconds_since(start);

  mapf::Matrix parallel_nt, parallel_tn, parallel_nn;
  start = std::chrono::steady_clock::now();
  for (int i = 0; i < kRounds; ++i) {
    mapf::matmul_nt(a, b, parallel_nt, jobs);
    mapf::matmul_tn(c, a, parallel_tn, jobs);
    mapf::matmul_nn(c, b, parallel_nn, jobs);
  }
  const double parallel_s = seconds_since(start);

  if (!(serial_nt == parallel_nt) || !(serial_tn == parallel_tn) ||
      !(serial_nn == parallel_nn)) {
    std::cerr << "matmul: serial and parallel results differ\n";
    return 1;
  }
  std::cout << "matmul serial_s: " << serial_s << "\n"
            << "matmul parallel_s (jobs=" << jobs << "): " << parallel_s << "\n"
            << "matmul speedup: " << serial_s / parallel_s << "\n";
  return 0;
}

int bench_dataset(int jobs)
{
  // A small open map keeps the planner fast while still producing a grid of
  // (instance, obstacle, replan) units worth parallelizing.
  mapf::GridMap map(12, 12);
  for (int y = 2; y < 10; y += 3) {
    for (int x = 2; x < 10; ++x) {
      if (x != 5)
        map.set_blocked(x, y, true);
    }
  }
  const std::string map_path = "bench_map.tmp.map";
  mapf::write_text_atomic(map_path, mapf::to_movingai_map(map));

  mapf::GenerationConfig cfg;
  cfg.maps.push_back({"bench", map_path, {4}});
  cfg.instances_per_count = 3;
  cfg.obstacle_seeds = 2;
  cfg.replan_seeds = 3;
  cfg.seed = 5;

  cfg.jobs = 1;
  auto start = std::chrono::steady_clock::now();
  const mapf::DatasetResult serial = mapf::generate_dataset(cfg);
  const double serial_s = seconds_since(start);

  cfg.jobs = jobs;
  start = std::chrono::steady_clock::now();
  const mapf::DatasetResult parallel = mapf::generate_dataset(cfg);
  const double parallel_s = seconds_since(start);

  std::remove(map_path.c_str());

  if (serial.records.size() != parallel.records.size()) {
    std::cerr << "dataset: record counts differ across jobs\n";
    return 1;
  }
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    const mapf::LabeledRecord& lhs = serial.records[i];
    const mapf::LabeledRecord& rhs = parallel.records[i];
    if (lhs.features != rhs.features || lhs.y != rhs.y || lhs.soc_e != rhs.soc_e ||
        lhs.soc_ei != rhs.soc_ei || lhs.soc_eir != rhs.soc_eir ||
        lhs.soc_eirp != rhs.soc_eirp || lhs.inst_seed != rhs.inst_seed ||
        lhs.obs_seed != rhs.obs_seed || lhs.replan_seed != rhs.replan_seed ||
        lhs.replan_t != rhs.replan_t) {
      std::cerr << "dataset: record " << i << " differs across jobs\n";
      return 1;
    }
  }
  std::cout << "dataset records: " << serial.records.size() << "\n"
            << "dataset serial_s: " << serial_s << "\n"
            << "dataset parallel_s (jobs=" << jobs << "): " << parallel_s << "\n";
  return 0;
}

}  // namespace

int main()
{
  const int jobs = std::max(2, mapf::hardware_jobs());
  std::cout << "hardware jobs: " << mapf::hardware_jobs() << "\n";
  const int matmul_rc = bench_matmul(jobs);
  const int dataset_rc = bench_dataset(jobs);
  if (matmul_rc == 0 && dataset_rc == 0) {
    std::cout << "serial and parallel paths agree\n";
    return 0;
  }
  return 1;
}
