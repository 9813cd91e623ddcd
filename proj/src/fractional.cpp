#include "thetafix/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "thetafix/metric.hpp"

namespace thetafix {

UniformGrid::UniformGrid(double t0_, double T_, int M_) : t0(t0_), T(T_), M(M_) {
  if (!(t0 < T) || !std::isfinite(t0) || !std::isfinite(T)) throw std::invalid_argument("grid needs t0 < T");
  if (M < 2) throw std::invalid_argument("grid needs M >= 2");
}

GridFunction::GridFunction(UniformGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("grid function needs M + 1 values");
}

GridFunction GridFunction::sample(const UniformGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (int i = 0; i <= grid.M; ++i) v[i] = f(grid.node(i));
  return GridFunction(grid, std::move(v));
}

GridFunction GridFunction::constant(const UniformGrid& grid, double v) {
  return GridFunction(grid, std::vector<double>(grid.size(), v));
}

double GridFunction::sup_norm() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::fabs(v));
  return s;
}

double GridFunction::interpolate(double t) const {
  if (t < grid_.t0 || t > grid_.T) throw DomainError("t = " + format_real(t) + " outside the grid");
  const double pos = (t - grid_.t0) / grid_.h();
  const int i = std::min(static_cast<int>(pos), grid_.M - 1);
  const double w = pos - i;
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

void GridFunction::write_csv(std::ostream& os) const {
  char buf[80];
  os << "t,value\n";
  for (int i = 0; i <= grid_.M; ++i) {
    std::snprintf(buf, sizeof buf, "%.15g,%.15g\n", grid_.node(i), values_[i]);
    os << buf;
  }
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("grid functions live on different grids");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::fabs(a[i] - b[i]));
  return s;
}

double gamma_fn(double z) {
  if (!(z > 0.0)) throw DomainError("gamma_fn needs z > 0; got " + format_real(z));
  return std::tgamma(z);
}

namespace {

void require_order(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("fractional order must be > 0; got " + format_real(beta));
}

}  // namespace

std::vector<double> rl_integral_all(const GridFunction& f, double beta) {
  require_order(beta);
  const int M = f.grid().M;
  const long double b = beta;
  std::vector<long double> p1(M + 2), p0(M + 2);
  for (int m = 0; m <= M + 1; ++m) {
    p1[m] = std::pow(static_cast<long double>(m), b + 1);
    p0[m] = std::pow(static_cast<long double>(m), b);
  }
  // interior weights depend only on j - i
  std::vector<long double> mid(M + 1, 0.0L);
  for (int m = 1; m < M; ++m) mid[m] = p1[m + 1] - 2 * p1[m] + p1[m - 1];

  const long double scale = std::pow(static_cast<long double>(f.grid().h()), b) / std::tgamma(b + 2);
  const auto& v = f.values();
  std::vector<double> out(M + 1, 0.0);
  for (int j = 1; j <= M; ++j) {
    long double acc = (p1[j - 1] - (j - 1 - b) * p0[j]) * v[0] + v[j];
    for (int i = 1; i < j; ++i) acc += mid[j - i] * v[i];
    out[j] = static_cast<double>(scale * acc);
  }
  return out;
}

double rl_integral(const GridFunction& f, double beta, int i) {
  if (i < 0 || i > f.grid().M) throw std::out_of_range("node index out of range");
  return rl_integral_at(f, beta, f.grid().node(i));
}

double rl_integral_at(const GridFunction& f, double beta, double t) {
  require_order(beta);
  const UniformGrid& g = f.grid();
  if (t < g.t0 || t > g.T) throw DomainError("t = " + format_real(t) + " outside the grid");
  const long double b = beta, h = g.h();
  long double acc = 0.0L;
  for (int i = 0; i < g.M; ++i) {
    const long double si = g.node(i);
    if (si >= t) break;
    const long double A = t - si;
    const long double B = std::max(0.0L, static_cast<long double>(t) - static_cast<long double>(g.node(i + 1)));
    const long double Ab = std::pow(A, b), Bb = std::pow(B, b);
    const long double m0 = (Ab - Bb) / b;
    const long double m1 = A * m0 - (Ab * A - Bb * B) / (b + 1);
    acc += f[i] * (m0 - m1 / h) + f[i + 1] * (m1 / h);
  }
  return static_cast<double>(acc / std::tgamma(b));
}

namespace {

int caputo_order(double beta) {
  require_order(beta);
  if (beta == std::floor(beta)) {
    throw DomainError("Caputo order " + format_real(beta) + " is an integer; use the classical derivative");
  }
  return static_cast<int>(std::floor(beta)) + 1;
}

}  // namespace

double caputo_deriv(const std::function<double(double)>& nth_derivative, double beta, double t0, double t, int M) {
  const int n = caputo_order(beta);
  if (t < t0) throw DomainError("caputo_deriv needs t >= t0");
  if (t == t0) return 0.0;
  const GridFunction dn = GridFunction::sample(UniformGrid(t0, t, M), nth_derivative);
  return rl_integral_at(dn, n - beta, t);
}

GridFunction fd_derivative(const GridFunction& f) {
  const UniformGrid& g = f.grid();
  const double h = g.h();
  const int M = g.M;
  std::vector<double> d(g.size());
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (int i = 1; i < M; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[M] = (3.0 * f[M] - 4.0 * f[M - 1] + f[M - 2]) / (2.0 * h);
  return GridFunction(g, std::move(d));
}

double caputo_deriv(const GridFunction& f, double beta, int i) {
  const int n = caputo_order(beta);
  GridFunction dn = f;
  for (int k = 0; k < n; ++k) dn = fd_derivative(dn);
  return rl_integral(dn, n - beta, i);
}

}  // namespace thetafix
