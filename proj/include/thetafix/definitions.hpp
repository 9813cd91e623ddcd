#pragma once

// JSON definition files for maps and fractional problems, plus the bundled
// examples built directly in code.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thetafix/contraction.hpp"
#include "thetafix/inclusion.hpp"
#include "thetafix/metric.hpp"

namespace thetafix {

/// A published value for H (and optionally the max of the five distances) at
/// one pair; mismatches are reported as discrepancies.
struct ReferenceValue {
  std::string label;
  double x = 0.0;
  double y = 0.0;
  double H = 0.0;
  std::optional<double> u;
  std::string H_text;
};

struct MapDefinition {
  std::string name;
  MetricSpace space;
  MultiMap map;
  SamplingConfig sampling;
  std::vector<std::pair<double, double>> pairs;  ///< explicit domain; sampling is used when empty
  std::vector<ReferenceValue> reference_values;
};

/// Throws std::invalid_argument with a field path on malformed input.
MapDefinition parse_map_definition(const std::string& json_text);
MapDefinition load_map_definition(const std::string& path);

FdeProblem parse_problem_definition(const std::string& json_text);
FdeProblem load_problem_definition(const std::string& path);

// ------------------------------------------------------------- builtins

/// X = [0,2] U {4,6,8,...} with the core-max metric; T0 = {8/9},
/// Tx = [0,1] on (0,2], Tx = {0,2,...,x-2} for x >= 4.
MapDefinition example3_definition();

/// T(x) = [0, x/2] on [0,1] with |x-y|.
MapDefinition halving_definition();

/// Case number 1..6 of a pair of the example-3 map after ordering x > y
/// (0 when H = 0 or the pair is outside every case).
int example3_case(double x, double y);

/// beta = 6.7 on [0,1], alpha = 0.5, a_k = 1, g_k = t^k e^-x / (3(k+1)),
/// F = [0, t|x| / (8(1+|x|))], m = t/8, p_k = t^k/(3(k+1)), tau = 1/6.
FdeProblem example5_problem();

/// beta = 1.5 on [0,1], alpha = 0.5, F = {x/4}, g = 0, a = (1, 0).
FdeProblem desk_problem();

/// beta = 1.5, F = {0}, g = 0, a = (1, 0.5).
FdeProblem trivial_problem();

}  // namespace thetafix
