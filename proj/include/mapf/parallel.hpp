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

#ifndef MAPF__PARALLEL_HPP
#define MAPF__PARALLEL_HPP

#include <cstdint>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace mapf {

inline int hardware_jobs()
{
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Runs f(i) for i in [0, n). jobs <= 1 is the serial reference path; any
// jobs value must produce identical results, so callers may only write to
// disjoint, preallocated slots from inside f.
template <typename F>
void parallel_for(std::int64_t n, int jobs, F&& f)
{
  if (jobs <= 1) {
    for (std::int64_t i = 0; i < n; ++i) f(i);
    return;
  }
#if defined(_OPENMP)
  #pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
  for (std::int64_t i = 0; i < n; ++i) f(i);
#else
  for (std::int64_t i = 0; i < n; ++i) f(i);
#endif
}

}  // namespace mapf

#endif  // MAPF__PARALLEL_HPP
