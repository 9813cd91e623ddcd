#pragma once

// Gamma function, Riemann-Liouville integrals of grid functions by product
// trapezoid quadrature, and Caputo derivatives built on them.

#include <functional>
#include <ostream>
#include <vector>

namespace thetafix {

struct UniformGrid {
  double t0 = 0.0;
  double T = 1.0;
  int M = 1000;

  UniformGrid() = default;
  /// Throws std::invalid_argument unless t0 < T and M >= 2.
  UniformGrid(double t0, double T, int M);

  double h() const { return (T - t0) / M; }
  double node(int i) const { return i == M ? T : t0 + i * h(); }
  std::size_t size() const { return static_cast<std::size_t>(M) + 1; }
  bool operator==(const UniformGrid&) const = default;
};

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(UniformGrid grid, std::vector<double> values);
  static GridFunction sample(const UniformGrid& grid, const std::function<double(double)>& f);
  static GridFunction constant(const UniformGrid& grid, double v);

  const UniformGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double sup_norm() const;
  /// Piecewise-linear interpolant at any t in [t0, T].
  double interpolate(double t) const;

  /// Columns t, value; 15 significant digits.
  void write_csv(std::ostream& os) const;

 private:
  UniformGrid grid_;
  std::vector<double> values_;
};

/// sup |a - b| over matching grids.
double sup_distance(const GridFunction& a, const GridFunction& b);

/// Gamma(z) for z > 0; DomainError otherwise.
double gamma_fn(double z);

/// I^beta f at every node of f's grid (origin t0).
std::vector<double> rl_integral_all(const GridFunction& f, double beta);

/// I^beta f at node i.
double rl_integral(const GridFunction& f, double beta, int i);

/// I^beta f at any t in [t0, T] from closed-form kernel moments against the
/// piecewise-linear interpolant of f.
double rl_integral_at(const GridFunction& f, double beta, double t);

/// Caputo derivative of order beta at t from the analytic n-th derivative of f,
/// n = floor(beta) + 1, using M subintervals of [t0, t]. Integer beta throws
/// DomainError.
double caputo_deriv(const std::function<double(double)>& nth_derivative, double beta, double t0, double t,
                    int M = 1000);

/// Caputo derivative at node i of a dense grid function, with f^(n) from
/// repeated second-order finite differences.
double caputo_deriv(const GridFunction& f, double beta, int i);

/// Second-order finite-difference derivative on the grid (one-sided at the ends).
GridFunction fd_derivative(const GridFunction& f);

}  // namespace thetafix
