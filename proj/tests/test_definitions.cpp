#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "thetafix/contraction.hpp"
#include "thetafix/definitions.hpp"
#include "thetafix/expression.hpp"

using namespace thetafix;

namespace {

std::string data(const std::string& name) { return std::string(THETAFIX_DATA_DIR) + "/" + name; }

void expect_same_map(const MapDefinition& a, const MapDefinition& b, const std::vector<double>& xs) {
  for (double x : xs) {
    EXPECT_EQ(a.map.image(a.space, x), b.map.image(b.space, x)) << x;
    EXPECT_EQ(a.map.stratum_of(x), b.map.stratum_of(x)) << x;
    for (double y : xs) EXPECT_EQ(dist(a.space, x, y), dist(b.space, x, y));
  }
}

void expect_same_problem(const FdeProblem& a, const FdeProblem& b) {
  EXPECT_EQ(a.beta, b.beta);
  EXPECT_EQ(a.t0, b.t0);
  EXPECT_EQ(a.T, b.T);
  EXPECT_EQ(a.alpha, b.alpha);
  EXPECT_EQ(a.a, b.a);
  EXPECT_EQ(a.M, b.M);
  EXPECT_DOUBLE_EQ(a.tau, b.tau);
  EXPECT_EQ(a.state_range, b.state_range);
  ASSERT_EQ(a.g.size(), b.g.size());
  for (double t : {0.0, 0.25, 0.7, 1.0}) {
    for (double x : {-1.0, 0.0, 0.5, 3.0}) {
      EXPECT_NEAR(a.lo(t, x), b.lo(t, x), 1e-15);
      EXPECT_NEAR(a.hi(t, x), b.hi(t, x), 1e-15);
      for (std::size_t k = 0; k < a.g.size(); ++k) {
        EXPECT_NEAR(a.g[k](t, x), b.g[k](t, x), 1e-15);
        EXPECT_NEAR(a.p[k](t, x), b.p[k](t, x), 1e-15);
      }
    }
    EXPECT_NEAR(a.m(t, 0.0), b.m(t, 0.0), 1e-15);
  }
}

}  // namespace

TEST(BundledData, Example3MatchesBuiltin) {
  const MapDefinition f = load_map_definition(data("example3_map.json"));
  const MapDefinition b = example3_definition();
  expect_same_map(f, b, {0.0, 0.001, 0.5, 1.0, 1.999, 2.0, 4.0, 6.0, 8.0, 50.0});
  ASSERT_EQ(f.reference_values.size(), b.reference_values.size());
  for (std::size_t i = 0; i < f.reference_values.size(); ++i) {
    EXPECT_EQ(f.reference_values[i].label, b.reference_values[i].label);
    EXPECT_DOUBLE_EQ(f.reference_values[i].H, b.reference_values[i].H);
    EXPECT_EQ(f.reference_values[i].u, b.reference_values[i].u);
  }
  EXPECT_EQ(f.sampling.interval_nodes, b.sampling.interval_nodes);
  EXPECT_EQ(f.sampling.lattice_ceiling, b.sampling.lattice_ceiling);
}

TEST(BundledData, HalvingMatchesBuiltin) {
  expect_same_map(load_map_definition(data("halving_map.json")), halving_definition(), {0.0, 0.1, 0.5, 1.0});
}

TEST(BundledData, ProblemsMatchBuiltins) {
  expect_same_problem(load_problem_definition(data("example5_problem.json")), example5_problem());
  expect_same_problem(load_problem_definition(data("desk_problem.json")), desk_problem());
  expect_same_problem(load_problem_definition(data("trivial_problem.json")), trivial_problem());
}

TEST(ExampleCases, Classification) {
  EXPECT_EQ(example3_case(0.5, 0.0), 1);
  EXPECT_EQ(example3_case(4.0, 0.0), 2);
  EXPECT_EQ(example3_case(0.0, 10.0), 3);
  EXPECT_EQ(example3_case(4.0, 1.0), 4);
  EXPECT_EQ(example3_case(6.0, 1.0), 5);
  EXPECT_EQ(example3_case(8.0, 6.0), 6);
  EXPECT_EQ(example3_case(0.5, 1.0), 0);
}

TEST(MapParser, Errors) {
  EXPECT_THROW(parse_map_definition("{"), std::invalid_argument);
  EXPECT_THROW(parse_map_definition(R"({"metric": {"kind": "nope"}, "carrier": "real-line", "pieces": []})"),
               std::invalid_argument);
  EXPECT_THROW(parse_map_definition(R"({"metric": {"kind": "absolute-difference"}, "carrier": "real-line"})"),
               std::invalid_argument);
  EXPECT_THROW(load_map_definition(data("missing.json")), std::invalid_argument);
}

TEST(MapParser, TableMap) {
  const MapDefinition d = parse_map_definition(R"({
    "metric": {"kind": "absolute-difference"},
    "carrier": {"points": [0, 1, 2]},
    "table": [{"x": 0, "image": {"points": [0]}}, {"x": 1, "image": {"points": [0, 2]}},
              {"x": 2, "image": {"points": [1]}}],
    "pairs": [[1, 0], [2, 1]]
  })");
  EXPECT_EQ(d.map.image(d.space, 1.0), CompactSet::finite({0.0, 2.0}));
  EXPECT_EQ(d.pairs.size(), 2u);
}

TEST(ProblemParser, Errors) {
  const std::string base = R"({"beta": 1.5, "t0": 0, "T": 1, "alpha": 0.5, "a": [1, 0], "g": ["0", "0"],
    "F": {"lo": "0", "hi": "0"}, "m": "0", "p": ["0", "0"], "tau": 1)";
  EXPECT_NO_THROW(parse_problem_definition(base + "}"));
  EXPECT_THROW(parse_problem_definition(R"({"beta": 2, "t0": 0, "T": 1, "alpha": 0.5, "a": [1, 0], "g": ["0", "0"],
    "F": {"lo": "0", "hi": "0"}, "m": "0", "p": ["0", "0"], "tau": 1})"),
               std::invalid_argument);
  EXPECT_THROW(parse_problem_definition(base + R"(, "m": "x"})"), std::invalid_argument);
  EXPECT_THROW(parse_problem_definition(R"({"beta": 1.5})"), std::invalid_argument);
  EXPECT_THROW(parse_problem_definition("[]"), std::invalid_argument);
}

TEST(Expression, Grammar) {
  const Expression e = Expression::parse("t*|x|/(8*(1+|x|))");
  EXPECT_DOUBLE_EQ(e(1.0, -1.0), 1.0 / 16.0);
  EXPECT_TRUE(e.uses_t());
  EXPECT_TRUE(e.uses_x());
  EXPECT_DOUBLE_EQ(parse_real("8/9"), 8.0 / 9.0);
  EXPECT_DOUBLE_EQ(parse_real("exp(-1)"), std::exp(-1.0));
  EXPECT_DOUBLE_EQ(Expression::parse("t^2/(3*3)*exp(-x)")(2.0, 0.0), 4.0 / 9.0);
  EXPECT_THROW(Expression::parse("1+"), std::invalid_argument);
  EXPECT_THROW(parse_real("x+1"), std::invalid_argument);
}
