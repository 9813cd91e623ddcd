#pragma once

// Caputo fractional inclusion D^beta x(t) in F(t, x(t)) on [t0, T] with
// nonlocal data x^(k)(alpha) = a_k + int_{t0}^{alpha} g_k(s, x(s)) ds.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "thetafix/expression.hpp"
#include "thetafix/fractional.hpp"

namespace thetafix {

struct FdeProblem {
  std::string name;
  double beta = 1.5;
  double t0 = 0.0;
  double T = 1.0;
  double alpha = 0.5;
  std::vector<double> a;
  std::vector<Expression> g;
  Expression F_lo;
  Expression F_hi;
  Expression m;
  std::vector<Expression> p;
  double tau = 0.1;
  int M = 1000;
  /// x-range sampled by the envelope and contraction checks.
  std::pair<double, double> state_range{-1.0, 1.0};

  int n() const;
  UniformGrid grid() const;
  /// Throws std::invalid_argument on inconsistent data (integer beta, alpha not
  /// interior, list sizes not n, ...).
  void validate() const;

  double lo(double t, double x) const { return F_lo(t, x); }
  double hi(double t, double x) const { return F_hi(t, x); }
};

enum class Gamma1Variant { StrictD, PaperExample };

std::string to_string(Gamma1Variant v);
Gamma1Variant gamma1_variant_from(const std::string& name);

/// (T-t0)^beta [2/Gamma(beta+1) + sum_{k=1}^{n-1} c_k / Gamma(beta-k+1)],
/// c_k = 1/k! for StrictD and 1 for PaperExample.
double gamma1(const FdeProblem& pb, Gamma1Variant variant);

/// sum_k (T-t0)^k ||p_k|| / k!, norms as grid sups.
double gamma2(const FdeProblem& pb);

/// Grid sup of |m| and |p_k|.
double m_norm(const FdeProblem& pb);
std::vector<double> p_norms(const FdeProblem& pb);

struct ConditionDReport {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double m_norm = 0.0;
  double lhs = 0.0;
  double tau = 0.0;
  double bound = 0.0;  ///< e^-tau
  bool satisfied = false;
  std::optional<double> tau_max;
};

ConditionDReport condition_d_check(const FdeProblem& pb, Gamma1Variant variant, std::optional<double> tau = {});

/// max(|a - c|, |b - d|)
double interval_hausdorff(double a, double b, double c, double d);

struct EnvelopeReport {
  bool pass = true;
  bool f_lipschitz = true;
  bool f_origin = true;
  bool g_lipschitz = true;
  bool f_ordered = true;
  std::size_t samples = 0;
  std::vector<std::string> witnesses;
};

/// Samples t on the problem grid and x, x~ in the state range.
EnvelopeReport lipschitz_envelope_check(const FdeProblem& pb, std::size_t budget = 10000, std::uint64_t seed = 11);

GridFunction boundary_polynomial(const FdeProblem& pb);
GridFunction midpoint_selection(const FdeProblem& pb, const GridFunction& x);
/// Clamp of w_prev(t_i) into [lo(t_i, x_i), hi(t_i, x_i)].
GridFunction proximal_selection(const FdeProblem& pb, const GridFunction& x, const GridFunction& w_prev);

/// Index of the first node where w leaves F(t, x) beyond a 1e-12 relative slack.
std::optional<std::size_t> selection_violation(const FdeProblem& pb, const GridFunction& x, const GridFunction& w);

struct LambdaResult {
  GridFunction output;
  GridFunction selection;
  std::optional<double> residual;
};

/// I^beta w(t) + sum_k (t-alpha)^k/k! (a_k + int_{t0}^{alpha} g_k(s, x(s)) ds - I^(beta-k) w(alpha)).
/// Throws PreconditionError naming the node when w leaves F(t, x).
LambdaResult lambda_apply(const FdeProblem& pb, const GridFunction& x, const GridFunction& w,
                          bool with_residual = false);

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::vector<double> steps)
      : std::runtime_error(what), steps_(std::move(steps)) {}
  const std::vector<double>& steps() const { return steps_; }

 private:
  std::vector<double> steps_;
};

struct InclusionConfig {
  double tol = 1e-12;
  int max_iter = 200;
};

struct InclusionSolution {
  GridFunction solution;
  GridFunction selection;
  std::vector<double> steps;  ///< sup |x_{j+1} - x_j|
  bool converged = false;
  double residual = 0.0;      ///< sup |x - Lambda(x, w)|
  double max_step_ratio = 0.0;
  bool inclusion_ok = false;
  bool condition_d = false;
};

/// x_{j+1} = Lambda(x_j, w_j), w_j the proximal selection seeded by the midpoint
/// of F(t, x_0). Starts from the boundary polynomial unless x0 is given.
InclusionSolution solve_inclusion(const FdeProblem& pb, std::optional<GridFunction> x0 = {},
                                  const InclusionConfig& cfg = {});

struct ContractionEstimate {
  std::size_t pairs = 0;
  double sup_ratio = 0.0;
  std::vector<double> ratios;
};

/// ||Lambda(x, w) - Lambda(x~, w~)|| / ||x - x~|| over random smooth pairs in the
/// state range, w a random selection at x and w~ its proximal image at x~.
ContractionEstimate contraction_estimate(const FdeProblem& pb, std::size_t pairs = 50, std::uint64_t seed = 5);

}  // namespace thetafix
