#include <cstdio>

#include "thetafix/definitions.hpp"

namespace thetafix {

MapDefinition example3_definition() {
  MapDefinition def;
  def.name = "example-3";
  def.space.carrier.intervals = {{0.0, 2.0}};
  def.space.carrier.lattice = Lattice{4.0, 2.0};
  def.space.rule = MetricRule::core_max(0.0, 2.0);
  def.map.name = def.name;
  def.map.rule = [](double x) {
    if (x == 0.0) return CompactSet::point(8.0 / 9.0);
    if (x <= 2.0) return CompactSet::interval(0.0, 1.0);
    std::vector<double> pts;
    for (double p = 0.0; p <= x - 2.0; p += 2.0) pts.push_back(p);
    return CompactSet::finite(std::move(pts));
  };
  def.map.stratum = [](double x) -> std::string {
    if (x == 0.0) return "zero";
    if (x <= 2.0) return "core";
    return "lattice";
  };
  def.sampling.interval_nodes = 201;
  def.sampling.lattice_ceiling = 100.0;
  def.reference_values = {
      {"case-1", 0.5, 0.0, 1.0 / 9.0, std::nullopt, "1/9"},
      {"case-2", 4.0, 0.0, 10.0 / 9.0, 4.0, "10/9"},
      {"case-3", 6.0, 0.0, 4.0, 6.0, "x-2"},
      {"case-4", 4.0, 1.0, 1.0, 4.0, "1"},
      {"case-5", 6.0, 1.0, 4.0, 6.0, "x-2"},
      {"case-6", 8.0, 6.0, 6.0, 8.0, "x-2"},
  };
  return def;
}

MapDefinition halving_definition() {
  MapDefinition def;
  def.name = "halving";
  def.space.carrier = Carrier::interval(0.0, 1.0);
  def.space.rule = MetricRule::absolute_difference();
  def.map.name = def.name;
  def.map.rule = [](double x) { return CompactSet::interval(0.0, x / 2.0); };
  def.map.stratum = [](double) { return std::string("all"); };
  return def;
}

int example3_case(double x, double y) {
  if (x < y) std::swap(x, y);
  if (x == y) return 0;
  const bool y_core = y > 0.0 && y <= 2.0;
  if (y == 0.0) {
    if (x <= 2.0) return 1;
    return x == 4.0 ? 2 : 3;
  }
  if (y_core) {
    if (x <= 2.0) return 0;
    return x == 4.0 ? 4 : 5;
  }
  return 6;
}

FdeProblem example5_problem() {
  FdeProblem pb;
  pb.name = "example-5";
  pb.beta = 6.7;
  pb.t0 = 0.0;
  pb.T = 1.0;
  pb.alpha = 0.5;
  pb.F_lo = Expression::parse("0");
  pb.F_hi = Expression::parse("t*|x|/(8*(1+|x|))");
  pb.m = Expression::parse("t/8");
  char buf[96];
  for (int k = 0; k <= 6; ++k) {
    pb.a.push_back(1.0);
    std::snprintf(buf, sizeof buf, "t^%d/(3*%d)*exp(-x)", k, k + 1);
    pb.g.push_back(Expression::parse(buf));
    std::snprintf(buf, sizeof buf, "t^%d/(3*%d)", k, k + 1);
    pb.p.push_back(Expression::parse(buf));
  }
  pb.tau = 1.0 / 6.0;
  pb.M = 1000;
  pb.state_range = {0.0, 4.0};
  return pb;
}

FdeProblem desk_problem() {
  FdeProblem pb;
  pb.name = "desk";
  pb.beta = 1.5;
  pb.alpha = 0.5;
  pb.a = {1.0, 0.0};
  pb.g = {Expression::parse("0"), Expression::parse("0")};
  pb.F_lo = Expression::parse("x/4");
  pb.F_hi = Expression::parse("x/4");
  pb.m = Expression::parse("1/4");
  pb.p = {Expression::parse("0"), Expression::parse("0")};
  pb.tau = 0.25;
  pb.state_range = {-2.0, 2.0};
  return pb;
}

FdeProblem trivial_problem() {
  FdeProblem pb;
  pb.name = "trivial";
  pb.beta = 1.5;
  pb.alpha = 0.5;
  pb.a = {1.0, 0.5};
  pb.g = {Expression::parse("0"), Expression::parse("0")};
  pb.F_lo = Expression::parse("0");
  pb.F_hi = Expression::parse("0");
  pb.m = Expression::parse("0");
  pb.p = {Expression::parse("0"), Expression::parse("0")};
  pb.tau = 1.0;
  return pb;
}

}  // namespace thetafix
