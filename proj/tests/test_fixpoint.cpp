#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "thetafix/definitions.hpp"
#include "thetafix/fixpoint.hpp"

using namespace thetafix;

namespace {

MetricSpace line() {
  MetricSpace s;
  s.carrier = Carrier::real_line();
  s.rule = MetricRule::absolute_difference();
  return s;
}

MultiMap scale_map(double c) {
  MultiMap m;
  m.rule = [c](double x) { return CompactSet::point(c * x); };
  return m;
}

}  // namespace

TEST(PicardCompact, HalvingClosedForm) {
  const MapDefinition def = halving_definition();
  const IterationTrace tr = picard_compact(def.space, def.map, 1.0);
  EXPECT_EQ(tr.termination, Termination::FixedPointFound);
  for (std::size_t n = 0; n < tr.points.size(); ++n) EXPECT_DOUBLE_EQ(tr.points[n], std::ldexp(1.0, -static_cast<int>(n)));
  EXPECT_LE(tr.residual, 1e-9);
}

TEST(PicardCompact, AlreadyFixed) {
  const MapDefinition def = halving_definition();
  const IterationTrace tr = picard_compact(def.space, def.map, 0.0);
  EXPECT_EQ(tr.steps(), 0u);
  EXPECT_EQ(tr.termination, Termination::FixedPointFound);
}

TEST(PicardCompact, ExampleFromFour) {
  const MapDefinition def = example3_definition();
  const IterationTrace tr = picard_compact(def.space, def.map, 4.0);
  ASSERT_EQ(tr.points.size(), 3u);
  EXPECT_EQ(tr.points[1], 0.0);
  EXPECT_DOUBLE_EQ(tr.points[2], 8.0 / 9.0);
  EXPECT_EQ(tr.termination, Termination::FixedPointFound);
}

TEST(PicardCompact, DivergingMapStagnates) {
  SolverConfig cfg;
  cfg.max_iter = 50;
  const IterationTrace tr = picard_compact(line(), scale_map(2.0), 1.0, cfg);
  EXPECT_EQ(tr.termination, Termination::Stagnation);
  EXPECT_LT(tr.steps(), 50u);
}

TEST(PicardCompact, BudgetExhausted) {
  SolverConfig cfg;
  cfg.max_iter = 5;
  const IterationTrace tr = picard_compact(line(), scale_map(0.5), 1.0, cfg);
  EXPECT_EQ(tr.termination, Termination::MaxIter);
  EXPECT_EQ(tr.steps(), 5u);
}

TEST(PicardCb, MatchesCompactOnHalving) {
  const MapDefinition def = halving_definition();
  const IterationTrace a = picard_compact(def.space, def.map, 1.0);
  const IterationTrace b = picard_cb(def.space, def.map, 1.0);
  EXPECT_EQ(a.points, b.points);
}

TEST(PicardCb, TieBreakDeterministic) {
  MetricSpace s;
  s.carrier = Carrier::finite({0, 1, 2, 3});
  s.rule = MetricRule::absolute_difference();
  MultiMap m;
  m.rule = [](double x) {
    if (x == 1.0) return CompactSet::finite({0.0, 2.0});
    if (x == 2.0) return CompactSet::finite({1.0, 3.0});
    return CompactSet::point(0.0);
  };
  const IterationTrace a = picard_cb(s, m, 1.0);
  const IterationTrace b = picard_cb(s, m, 1.0);
  EXPECT_EQ(a.points, b.points);
  EXPECT_EQ(a.points[1], 0.0);
}

TEST(SigmaDecay, HalfMap) {
  IterationTrace tr = picard_compact(line(), scale_map(0.5), 1.0);
  const ThetaSpec th = ThetaSpec::exp_sqrt();
  annotate(tr, th, 0.8);
  const SigmaDecayReport rep = verify_sigma_decay(tr, th, 0.8);
  EXPECT_TRUE(rep.pass) << rep.reason;
  for (std::size_t n = 0; n < 10; ++n) EXPECT_DOUBLE_EQ(tr.sigma[n], std::ldexp(1.0, -static_cast<int>(n) - 1));
}

TEST(SigmaDecay, VacuousAndFailing) {
  const MapDefinition def = halving_definition();
  const IterationTrace fixed = picard_compact(def.space, def.map, 0.0);
  EXPECT_TRUE(verify_sigma_decay(fixed, ThetaSpec::exp_sqrt(), 0.5).pass);
  SolverConfig cfg;
  cfg.max_iter = 5;
  const IterationTrace up = picard_compact(line(), scale_map(2.0), 1.0, cfg);
  const SigmaDecayReport rep = verify_sigma_decay(up, ThetaSpec::exp_sqrt(), 0.5);
  EXPECT_FALSE(rep.pass);
  ASSERT_TRUE(rep.first_failure.has_value());
  EXPECT_EQ(*rep.first_failure, 0u);
}

TEST(TailBound, Cases) {
  IterationTrace tr;
  for (int n = 0; n <= 30; ++n) tr.sigma.push_back(std::ldexp(1.0, -n));
  tr.points.assign(tr.sigma.size() + 1, 0.0);
  // sigma_n with n counted from 1 in the scan; the scan oracle is below
  std::size_t oracle = 0;
  for (std::size_t n1 = 1; n1 <= tr.sigma.size() && !oracle; ++n1) {
    bool ok = true;
    for (std::size_t n = n1; n <= tr.sigma.size() - 1 && ok; ++n) ok = tr.sigma[n] <= std::pow(double(n), -2.0);
    if (ok) oracle = n1;
  }
  const TailBoundReport rep = tail_bound_check(tr, 0.5);
  EXPECT_TRUE(rep.found);
  EXPECT_EQ(rep.n1, oracle);

  IterationTrace flat;
  flat.sigma.assign(10, 1.0);
  flat.points.assign(11, 0.0);
  EXPECT_FALSE(tail_bound_check(flat, 0.5).found);

  IterationTrace one;
  one.sigma = {0.5};
  one.points = {1.0, 0.5};
  EXPECT_THROW(tail_bound_check(one, 0.5), PreconditionError);
}

TEST(CauchyTail, BoundsPartialSums) {
  auto tail = [](double r, long n) {
    double s = 0.0;
    for (long k = n; k < n + 1000000; ++k) s += std::pow(double(k), -1.0 / r);
    return s;
  };
  EXPECT_NEAR(cauchy_tail_estimate(0.5, 10), 1.0 / 9.0, 1e-15);
  EXPECT_GE(cauchy_tail_estimate(0.5, 10), tail(0.5, 10));
  const double b = cauchy_tail_estimate(0.9, 100);
  EXPECT_TRUE(std::isfinite(b));
  EXPECT_GE(b, tail(0.9, 100));
  EXPECT_LT(cauchy_tail_estimate(0.5, 1000000), 1e-5);
  EXPECT_THROW(cauchy_tail_estimate(1.0, 10), DomainError);
}

TEST(TraceCsv, Header) {
  const MapDefinition def = halving_definition();
  IterationTrace tr = picard_compact(def.space, def.map, 1.0);
  annotate(tr, ThetaSpec::exp_sqrt(), 0.75);
  std::ostringstream os;
  write_trace_csv(os, tr);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "n,x_n,sigma_n,theta_sigma_n,bound_n");
}

TEST(SolverConfig, Validation) {
  SolverConfig cfg;
  cfg.tol = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  SolverConfig c2;
  EXPECT_DOUBLE_EQ(c2.h(1), 1.5);
}
