#pragma once

// Gauge functions theta: (0, inf) -> (1, inf) and five-argument combiners rho,
// with sampling-based checks of their defining conditions.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace thetafix {

enum class ThetaKind { ExpSqrt, ExpSqrtTexp, ExpSqrtShift, LogShift, Custom };

class ThetaSpec {
 public:
  /// e^sqrt(t)
  static ThetaSpec exp_sqrt();
  /// e^sqrt(t e^t)
  static ThetaSpec exp_sqrt_texp();
  /// e^sqrt(t + 1)
  static ThetaSpec exp_sqrt_shift();
  /// a + ln sqrt(t + 1), a > 1
  static ThetaSpec log_shift(double a);
  /// Value table with piecewise-linear interpolation, constant beyond the ends.
  /// Not right-continuous by claim.
  static ThetaSpec sampled(std::string name, std::vector<double> t, std::vector<double> v);
  static ThetaSpec from_function(std::string name, std::function<double(double)> fn,
                                 bool right_continuous = true);
  /// Builtin by stable name: exp-sqrt, exp-sqrt-texp, exp-sqrt-shift,
  /// log-shift[:a] (default a = 2).
  static ThetaSpec by_name(const std::string& name);

  ThetaKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double parameter() const { return a_; }

  /// Throw DomainError unless t > 0.
  double eval(double t) const;
  /// theta(t) - 1 without cancellation for the builtins.
  double eval_minus_one(double t) const;
  /// ln theta(t), finite even when theta(t) overflows.
  double log_eval(double t) const;

  bool claimed_right_continuous = true;
  bool claimed_omega_member = true;

 private:
  ThetaKind kind_ = ThetaKind::ExpSqrt;
  std::string name_;
  double a_ = 0.0;
  std::function<double(double)> custom_;
};

/// Estimated limit of a sequence sampled at abscissae `t` tending to 0, by a
/// three-point fit v = L + c t^q on the tail. Falls back to the last value when
/// the tail is not a monotone power law.
double extrapolate_to_zero(std::span<const double> t, std::span<const double> v);

/// Geometric grid from `hi` down to `lo`, `per_decade` points per decade.
std::vector<double> geometric_grid(double hi, double lo, int per_decade);

bool check_theta1(const ThetaSpec& theta, std::span<const double> grid);
bool check_theta2(const ThetaSpec& theta, std::span<const double> sequence);

enum class LimitStatus { Finite, Infinite, Vanishing };

struct Theta3Estimate {
  double r = 0.5;
  LimitStatus status = LimitStatus::Finite;
  double lambda = 0.0;  ///< kUnbounded when status is Infinite
  std::vector<double> grid;
  std::vector<double> ratios;
  bool pass() const { return status != LimitStatus::Vanishing && lambda > 0.0; }
};

/// Limit of (theta(t) - 1) / t^r along a grid decreasing to 0.
Theta3Estimate check_theta3(const ThetaSpec& theta, double r, std::span<const double> grid);
Theta3Estimate check_theta3(const ThetaSpec& theta, double r);

struct ThetaPropertyReport {
  bool theta1 = false;
  bool theta2 = false;
  Theta3Estimate theta3;
  std::size_t theta1_samples = 0;
  std::size_t theta2_samples = 0;
  bool omega_member() const { return theta1 && theta3.pass(); }
};

/// Default grids: theta1 on a log grid [1e-6, 1e3], theta2 along t_n = 1/n at
/// n = 10^j, theta3 on 1e-2 .. 1e-12.
ThetaPropertyReport theta_properties(const ThetaSpec& theta, double r = 0.5);

// ------------------------------------------------------------------ rho

enum class RhoKind {
  Nadler,
  Kannan,
  Chatterjea,
  Reich,
  Berinde,
  HardyRogers,
  Ciric1,
  Ciric2,
  Zamfirescu,
  Custom,
};

using RhoArgs = std::array<double, 5>;

class RhoSpec {
 public:
  /// nadler
  RhoSpec() = default;

  static RhoSpec nadler();
  static RhoSpec kannan();
  static RhoSpec chatterjea();
  /// alpha x1 + beta x2 + gamma x3, coefficients >= 0 with sum <= 1.
  static RhoSpec reich(double alpha, double beta, double gamma);
  /// alpha x1 + L x5, alpha in (0, 1], L >= 0.
  static RhoSpec berinde(double alpha, double L);
  /// alpha x1 + beta x2 + gamma x3 + delta x4 + L x5 with alpha+beta+gamma+2 delta <= 1.
  static RhoSpec hardy_rogers(double alpha, double beta, double gamma, double delta, double L);
  static RhoSpec ciric1();
  static RhoSpec ciric2();
  static RhoSpec zamfirescu();
  /// sum c_i x_i with c_i >= 0.
  static RhoSpec custom_coefficients(const RhoArgs& c);
  /// Stable name with optional `:c1,c2,...` parameters, e.g. "reich:0.5,0.25,0.25".
  static RhoSpec by_name(const std::string& name);
  static std::vector<RhoSpec> builtins();

  RhoKind kind() const { return kind_; }
  std::string name() const;
  std::span<const double> coefficients() const { return coeff_; }
  /// Invariant under swapping (x2, x3) together with (x4, x5).
  bool symmetric() const;

  double operator()(const RhoArgs& v) const;

 private:
  explicit RhoSpec(RhoKind kind, std::vector<double> c = {}) : kind_(kind), coeff_(std::move(c)) {}

  RhoKind kind_ = RhoKind::Nadler;
  std::vector<double> coeff_;
};

struct RhoAxiomReport {
  std::array<double, 3> rho1_values{};
  bool rho1 = false;
  bool rho2 = false;
  bool rho3_monotone = false;
  bool rho3_strict_first = false;
  bool rho3_strict_second = false;
  std::size_t samples = 0;
  std::vector<std::string> witnesses;
  bool rho3() const { return rho3_monotone && rho3_strict_first && rho3_strict_second; }
  bool all() const { return rho1 && rho2 && rho3(); }
};

RhoAxiomReport check_rho_axioms(const RhoSpec& rho, std::size_t budget = 10000, std::uint64_t seed = 1);

struct LemmaL2Result {
  bool hypothesis = false;
  bool conclusion = false;
};

/// Hypothesis: u < max{rho(v,v,u,v+u,0), rho(v,v,u,0,v+u), rho(v,u,v,v+u,0),
/// rho(v,u,v,0,v+u)}. Conclusion: u < v.
LemmaL2Result lemma_l2_property(const RhoSpec& rho, double u, double v);

}  // namespace thetafix
