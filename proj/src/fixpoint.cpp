#include "thetafix/fixpoint.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace thetafix {

double SolverConfig::h(int n) const {
  const double v = h_schedule ? h_schedule(n) : 1.0 + std::ldexp(1.0, -n);
  if (!(v > 1.0)) throw std::invalid_argument("h-schedule must stay above 1; h(" + std::to_string(n) + ") = " + format_real(v));
  return v;
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("max-iter must be positive");
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("r must lie in (0, 1)");
  if (stagnation_window < 1) throw std::invalid_argument("stagnation window must be positive");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::FixedPointFound: return "fixed-point-found";
    case Termination::MaxIter: return "max-iter";
    case Termination::Stagnation: return "stagnation";
  }
  return "?";
}

namespace {

template <typename Select>
IterationTrace iterate(const MetricSpace& space, const MultiMap& T, double x0, const SolverConfig& cfg,
                       Select select) {
  cfg.validate();
  space.require_member(x0);
  IterationTrace tr;
  tr.points.push_back(x0);
  double x = x0;
  CompactSet tx = T.image(space, x);
  std::optional<CompactSet> prev;
  int non_decreasing = 0;
  for (int n = 0; n < cfg.max_iter; ++n) {
    const double gap = dist_to_set(space, x, tx);
    if (gap <= cfg.tol) {
      tr.termination = Termination::FixedPointFound;
      tr.residual = gap;
      return tr;
    }
    const double next = select(n, x, prev, tx);
    tr.sigma.push_back(dist(space, x, next));
    tr.points.push_back(next);
    const std::size_t s = tr.sigma.size();
    non_decreasing = (s >= 2 && tr.sigma[s - 1] >= tr.sigma[s - 2]) ? non_decreasing + 1 : 0;
    prev = std::move(tx);
    x = next;
    tx = T.image(space, x);
    if (non_decreasing >= cfg.stagnation_window) {
      tr.termination = Termination::Stagnation;
      tr.residual = dist_to_set(space, x, tx);
      return tr;
    }
  }
  tr.residual = dist_to_set(space, x, tx);
  tr.termination = tr.residual <= cfg.tol ? Termination::FixedPointFound : Termination::MaxIter;
  return tr;
}

}  // namespace

IterationTrace picard_compact(const MetricSpace& space, const MultiMap& T, double x0, const SolverConfig& cfg) {
  if (!T.compact_valued) throw PreconditionError("picard_compact needs a compact-valued map");
  return iterate(space, T, x0, cfg, [&](int, double x, const std::optional<CompactSet>&, const CompactSet& tx) {
    return nearest_point(space, x, tx);
  });
}

IterationTrace picard_cb(const MetricSpace& space, const MultiMap& T, double x0, const SolverConfig& cfg) {
  return iterate(space, T, x0, cfg, [&](int n, double x, const std::optional<CompactSet>& prev, const CompactSet& tx) {
    if (!prev) return nearest_point(space, x, tx);
    return h_relaxed_select(space, x, *prev, tx, cfg.h(n));
  });
}

void annotate(IterationTrace& trace, const ThetaSpec& theta, double k) {
  trace.theta_sigma.clear();
  trace.bound.clear();
  if (trace.sigma.empty()) return;
  const double log0 = theta.log_eval(trace.sigma.front());
  for (std::size_t n = 0; n < trace.sigma.size(); ++n) {
    trace.theta_sigma.push_back(trace.sigma[n] > 0.0 ? theta.eval(trace.sigma[n]) : std::nan(""));
    trace.bound.push_back(std::exp(std::pow(k, static_cast<double>(n)) * log0));
  }
}

SigmaDecayReport verify_sigma_decay(const IterationTrace& trace, const ThetaSpec& theta, double k) {
  SigmaDecayReport rep;
  const auto& s = trace.sigma;
  if (s.size() < 2) return rep;
  auto fail = [&](std::size_t n, std::string why) {
    if (!rep.first_failure || n < *rep.first_failure) {
      rep.first_failure = n;
      rep.reason = std::move(why);
    }
    rep.pass = false;
  };
  for (std::size_t n = 0; n + 1 < s.size(); ++n) {
    if (!(s[n + 1] < s[n])) {
      rep.strictly_decreasing = false;
      fail(n, "sigma_" + std::to_string(n + 1) + " = " + format_real(s[n + 1]) + " >= sigma_" + std::to_string(n) +
                  " = " + format_real(s[n]));
      break;
    }
  }
  if (!(s[0] > 0.0)) {
    rep.bound_holds = false;
    fail(0, "sigma_0 = 0");
    return rep;
  }
  const double log0 = theta.log_eval(s[0]);
  for (std::size_t n = 1; n < s.size(); ++n) {
    const double lhs = s[n] > 0.0 ? theta.log_eval(s[n]) : -kUnbounded;
    const double rhs = std::pow(k, static_cast<double>(n)) * log0;
    if (lhs > rhs) {
      rep.bound_holds = false;
      fail(n, "ln theta(sigma_" + std::to_string(n) + ") = " + format_real(lhs) + " > " + format_real(rhs));
      break;
    }
  }
  return rep;
}

TailBoundReport tail_bound_check(const IterationTrace& trace, double r) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("r must lie in (0, 1)");
  const auto& s = trace.sigma;
  if (s.size() < 5) throw PreconditionError("tail_bound_check needs at least 5 steps; got " + std::to_string(s.size()));
  TailBoundReport rep;
  std::size_t last_fail = 0;
  for (std::size_t n = 1; n < s.size(); ++n) {
    ++rep.checked;
    if (s[n] > std::pow(static_cast<double>(n), -1.0 / r)) last_fail = n;
  }
  if (last_fail == s.size() - 1) return rep;
  rep.found = true;
  rep.n1 = last_fail + 1;
  return rep;
}

double cauchy_tail_estimate(double r, long n) {
  if (!(r > 0.0)) throw std::invalid_argument("r must be > 0");
  if (r >= 1.0) throw DomainError("sum of k^(-1/r) diverges for r >= 1");
  if (n < 2) throw std::invalid_argument("cauchy_tail_estimate needs n >= 2");
  const double p = 1.0 / r;
  return std::pow(static_cast<double>(n - 1), 1.0 - p) / (p - 1.0);
}

void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::string(buf);
  };
  os << "n,x_n,sigma_n,theta_sigma_n,bound_n\n";
  for (std::size_t n = 0; n < trace.points.size(); ++n) {
    os << n << ',' << num(trace.points[n]) << ',';
    if (n < trace.sigma.size()) os << num(trace.sigma[n]);
    os << ',';
    if (n < trace.theta_sigma.size()) os << num(trace.theta_sigma[n]);
    os << ',';
    if (n < trace.bound.size()) os << num(trace.bound[n]);
    os << '\n';
  }
}

}  // namespace thetafix
