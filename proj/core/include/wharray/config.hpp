// SPDX-License-Identifier: Apache-2.0

#ifndef WHARRAY_CONFIG_HPP
#define WHARRAY_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "wharray/field.hpp"
#include "wharray/solver.hpp"

namespace wharray
{

struct OutputPaths
{
  std::string coefficients;
  std::string diagnostics;
  std::string field;
  std::string compare;
};

struct RunConfig
{
  std::string preset;
  ProblemSpec problem;
  SolverOptions solver;
  GridSpec grid;
  std::optional<Disk> spl_region;
  int lsc_points = 8;
  OutputPaths output;
};

bool operator==(const RunConfig &a, const RunConfig &b);

// The six standard cases plus the doubly infinite line and a single semi-infinite array.
std::vector<std::string> preset_names();
std::string preset_description(const std::string &name);

// Throws ValidationError for unknown names.
RunConfig preset_config(const std::string &name);

// Reals written as numbers or as multiples of pi: "pi", "-5pi/6", "2.5pi", "3/4", "0.3".
double parse_angle(const std::string &text);

// Structured-text (JSON) configuration. A "preset" key, if present, is applied first and the
// remaining keys override it. Throws ValidationError naming the offending line or field.
RunConfig parse_config(const std::string &text);
RunConfig load_config(const std::string &path);

std::string write_config(const RunConfig &c);

} // namespace wharray

#endif
