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

#ifndef MAPF__ERRORS_HPP
#define MAPF__ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mapf {

/// Malformed input text (map files, instance files, solutions, configs).
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, int line = -1)
  : std::runtime_error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
    line_(line)
  {}

  int line() const { return line_; }

private:
  int line_;
};

/// Structurally invalid domain objects (out-of-bounds vertices, broken plans).
class InvalidInput : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Planner gave up: timeout, node limit, or infeasible instance.
class PlannerError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Simulation invariant broke (deadlock, out-of-order events).
class SimulationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Training or model file problems.
class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace mapf

#endif  // MAPF__ERRORS_HPP
