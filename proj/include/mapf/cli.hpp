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

#ifndef MAPF__CLI_HPP
#define MAPF__CLI_HPP

namespace mapf {

/// Command-line front end. Exit codes: 0 success, 1 usage, 2 file I/O or
/// parse, 3 planner, 4 scenario/simulation, 5 training.
int run_cli(int argc, char** argv);

}  // namespace mapf

#endif  // MAPF__CLI_HPP
