#pragma once

// Picard-type iterations x_{n+1} in T x_n with proof diagnostics.

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "thetafix/metric.hpp"
#include "thetafix/theta_rho.hpp"

namespace thetafix {

struct SolverConfig {
  double tol = 1e-9;
  int max_iter = 1000;
  /// n -> h_n > 1; default 1 + 2^-n.
  std::function<double(int)> h_schedule;
  double r = 0.5;
  int stagnation_window = 10;

  double h(int n) const;
  void validate() const;
};

enum class Termination { FixedPointFound, MaxIter, Stagnation };

std::string to_string(Termination t);

struct IterationTrace {
  std::vector<double> points;  ///< x_0 .. x_N
  std::vector<double> sigma;   ///< sigma_n = d(x_n, x_{n+1})
  /// Filled by annotate(): theta(sigma_n) and theta(sigma_0)^(k^n).
  std::vector<double> theta_sigma;
  std::vector<double> bound;
  Termination termination = Termination::MaxIter;
  double residual = 0.0;  ///< d(x_N, T x_N)

  std::size_t steps() const { return sigma.size(); }
  double final_point() const { return points.back(); }
};

/// x_{n+1} = nearest point of T x_n to x_n. Membership x_n in T x_n (within tol)
/// is tested before every selection.
IterationTrace picard_compact(const MetricSpace& space, const MultiMap& T, double x0, const SolverConfig& cfg = {});

/// x_{n+1} in T x_n with d(x_n, x_{n+1}) < h_n H(T x_{n-1}, T x_n); the first
/// step uses the nearest point.
IterationTrace picard_cb(const MetricSpace& space, const MultiMap& T, double x0, const SolverConfig& cfg = {});

void annotate(IterationTrace& trace, const ThetaSpec& theta, double k);

struct SigmaDecayReport {
  bool pass = true;
  bool strictly_decreasing = true;
  bool bound_holds = true;
  std::optional<std::size_t> first_failure;
  std::string reason;
};

/// sigma strictly decreasing and theta(sigma_n) <= theta(sigma_0)^(k^n), compared
/// as ln theta(sigma_n) <= k^n ln theta(sigma_0). Vacuous below two steps.
SigmaDecayReport verify_sigma_decay(const IterationTrace& trace, const ThetaSpec& theta, double k);

struct TailBoundReport {
  bool found = false;
  std::size_t n1 = 0;
  std::size_t checked = 0;
};

/// Smallest n1 >= 1 with sigma_n <= n^(-1/r) for every recorded n >= n1.
/// Throws PreconditionError below five steps.
TailBoundReport tail_bound_check(const IterationTrace& trace, double r);

/// Integral bound (n-1)^(1-1/r) / (1/r - 1) on sum_{k>=n} k^(-1/r).
double cauchy_tail_estimate(double r, long n);

/// Columns n, x_n, sigma_n, theta_sigma_n, bound_n. Diagnostic columns are empty
/// when the trace was not annotated.
void write_trace_csv(std::ostream& os, const IterationTrace& trace);

}  // namespace thetafix
