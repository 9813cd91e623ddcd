#include "thetafix/theta_rho.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "thetafix/expression.hpp"
#include "thetafix/metric.hpp"

namespace thetafix {

// ------------------------------------------------------------------ theta

ThetaSpec ThetaSpec::exp_sqrt() {
  ThetaSpec s;
  s.kind_ = ThetaKind::ExpSqrt;
  s.name_ = "exp-sqrt";
  return s;
}

ThetaSpec ThetaSpec::exp_sqrt_texp() {
  ThetaSpec s;
  s.kind_ = ThetaKind::ExpSqrtTexp;
  s.name_ = "exp-sqrt-texp";
  return s;
}

ThetaSpec ThetaSpec::exp_sqrt_shift() {
  ThetaSpec s;
  s.kind_ = ThetaKind::ExpSqrtShift;
  s.name_ = "exp-sqrt-shift";
  return s;
}

ThetaSpec ThetaSpec::log_shift(double a) {
  if (!(a > 1.0) || !std::isfinite(a)) throw std::invalid_argument("log-shift needs a > 1");
  ThetaSpec s;
  s.kind_ = ThetaKind::LogShift;
  s.a_ = a;
  std::ostringstream os;
  os << "log-shift:" << a;
  s.name_ = os.str();
  return s;
}

ThetaSpec ThetaSpec::sampled(std::string name, std::vector<double> t, std::vector<double> v) {
  if (t.size() < 2 || t.size() != v.size()) throw std::invalid_argument("sampled theta needs >= 2 matching nodes");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || (i && !(t[i] > t[i - 1]))) {
      throw std::invalid_argument("sampled theta nodes must be positive and strictly increasing");
    }
  }
  auto fn = [t = std::move(t), v = std::move(v)](double x) {
    if (x <= t.front()) return v.front();
    if (x >= t.back()) return v.back();
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
    const double w = (x - t[i]) / (t[i + 1] - t[i]);
    return v[i] + w * (v[i + 1] - v[i]);
  };
  return from_function(std::move(name), std::move(fn), false);
}

ThetaSpec ThetaSpec::from_function(std::string name, std::function<double(double)> fn, bool right_continuous) {
  ThetaSpec s;
  s.kind_ = ThetaKind::Custom;
  s.name_ = std::move(name);
  s.custom_ = std::move(fn);
  s.claimed_right_continuous = right_continuous;
  s.claimed_omega_member = false;
  return s;
}

ThetaSpec ThetaSpec::by_name(const std::string& name) {
  if (name == "exp-sqrt") return exp_sqrt();
  if (name == "exp-sqrt-texp") return exp_sqrt_texp();
  if (name == "exp-sqrt-shift") return exp_sqrt_shift();
  if (name == "log-shift") return log_shift(2.0);
  if (name.rfind("log-shift:", 0) == 0) return log_shift(parse_real(name.substr(10)));
  throw std::invalid_argument("unknown theta '" + name + "'");
}

namespace {

void require_positive(double t) {
  if (!(t > 0.0)) throw DomainError("theta is defined on (0, inf); got t = " + format_real(t));
}

// sqrt(t e^t) without overflowing e^t
double sqrt_t_exp_t(double t) { return t < 600.0 ? std::sqrt(t * std::exp(t)) : std::exp(0.5 * (std::log(t) + t)); }

}  // namespace

double ThetaSpec::eval(double t) const {
  require_positive(t);
  switch (kind_) {
    case ThetaKind::ExpSqrt: return std::exp(std::sqrt(t));
    case ThetaKind::ExpSqrtTexp: return std::exp(sqrt_t_exp_t(t));
    case ThetaKind::ExpSqrtShift: return std::exp(std::sqrt(t + 1.0));
    case ThetaKind::LogShift: return a_ + 0.5 * std::log1p(t);
    case ThetaKind::Custom: return custom_(t);
  }
  return 0.0;
}

double ThetaSpec::eval_minus_one(double t) const {
  require_positive(t);
  switch (kind_) {
    case ThetaKind::ExpSqrt: return std::expm1(std::sqrt(t));
    case ThetaKind::ExpSqrtTexp: return std::expm1(sqrt_t_exp_t(t));
    case ThetaKind::ExpSqrtShift: return std::expm1(std::sqrt(t + 1.0));
    case ThetaKind::LogShift: return (a_ - 1.0) + 0.5 * std::log1p(t);
    case ThetaKind::Custom: return custom_(t) - 1.0;
  }
  return 0.0;
}

double ThetaSpec::log_eval(double t) const {
  require_positive(t);
  switch (kind_) {
    case ThetaKind::ExpSqrt: return std::sqrt(t);
    case ThetaKind::ExpSqrtTexp: return sqrt_t_exp_t(t);
    case ThetaKind::ExpSqrtShift: return std::sqrt(t + 1.0);
    case ThetaKind::LogShift: return std::log(a_ + 0.5 * std::log1p(t));
    case ThetaKind::Custom: return std::log(custom_(t));
  }
  return 0.0;
}

double extrapolate_to_zero(std::span<const double> t, std::span<const double> v) {
  if (t.size() != v.size() || v.empty()) throw std::invalid_argument("extrapolation needs matching nonempty samples");
  const std::size_t n = v.size();
  if (n < 3) return v.back();
  const double t1 = t[n - 3], t2 = t[n - 2], t3 = t[n - 1];
  const double d1 = v[n - 3] - v[n - 2], d2 = v[n - 2] - v[n - 1];
  if (!(t1 > t2 && t2 > t3 && t3 > 0.0) || d2 == 0.0) return v.back();
  const double ratio = d1 / d2;
  if (!(ratio > 0.0) || !std::isfinite(ratio)) return v.back();

  // v = L + c t^q  =>  d1/d2 = (t2/t3)^q expm1(q a) / expm1(q b)
  const double a = std::log(t1 / t2), b = std::log(t2 / t3);
  auto log_phi = [&](double q) { return q * b + std::log(std::expm1(q * a)) - std::log(std::expm1(q * b)); };
  const double target = std::log(ratio);
  const double phi0 = std::log(a / b);
  if (target <= phi0) return v.back();
  double lo = 0.0, hi = 1.0;
  while (log_phi(hi) < target) {
    hi *= 2.0;
    if (hi > 64.0) return v.back();
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (log_phi(mid) < target ? lo : hi) = mid;
  }
  const double q = 0.5 * (lo + hi);
  return v.back() - d2 / std::expm1(q * b);
}

std::vector<double> geometric_grid(double hi, double lo, int per_decade) {
  if (!(hi > lo && lo > 0.0) || per_decade < 1) throw std::invalid_argument("geometric grid needs hi > lo > 0");
  std::vector<double> g;
  const int steps = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
  for (int i = 0; i <= steps; ++i) g.push_back(hi * std::pow(10.0, -static_cast<double>(i) / per_decade));
  return g;
}

bool check_theta1(const ThetaSpec& theta, std::span<const double> grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i && !(grid[i] > grid[i - 1]))) {
      throw std::invalid_argument("theta1 grid must be positive and strictly increasing");
    }
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    double prev = theta.eval(grid[i - 1]);
    double cur = theta.eval(grid[i]);
    if (std::isinf(prev) || std::isinf(cur)) {
      prev = theta.log_eval(grid[i - 1]);
      cur = theta.log_eval(grid[i]);
    }
    if (cur < prev) return false;
  }
  return true;
}

bool check_theta2(const ThetaSpec& theta, std::span<const double> sequence) {
  if (sequence.empty()) throw std::invalid_argument("theta2 needs a nonempty sequence");
  std::vector<double> v;
  v.reserve(sequence.size());
  for (double t : sequence) {
    if (!(t > 0.0)) throw std::invalid_argument("theta2 sequence must be positive");
    v.push_back(theta.eval_minus_one(t));
  }
  return std::fabs(extrapolate_to_zero(sequence, v)) <= 1e-6;
}

Theta3Estimate check_theta3(const ThetaSpec& theta, double r, std::span<const double> grid) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("theta3 needs r in (0, 1)");
  if (grid.size() < 3) throw std::invalid_argument("theta3 needs at least three grid points");
  Theta3Estimate est;
  est.r = r;
  est.grid.assign(grid.begin(), grid.end());
  std::sort(est.grid.begin(), est.grid.end(), std::greater<>());
  if (!(est.grid.back() > 0.0)) throw std::invalid_argument("theta3 grid must be positive");

  std::vector<double> numer;
  for (double t : est.grid) {
    numer.push_back(theta.eval_minus_one(t));
    est.ratios.push_back(numer.back() / std::pow(t, r));
  }
  const std::size_t n = est.ratios.size();
  const double last = est.ratios[n - 1], prev = est.ratios[n - 2], prev2 = est.ratios[n - 3];
  const bool increasing = last > prev && prev > prev2;
  const bool decreasing = last < prev && prev < prev2;
  const double slope = (last > 0.0 && prev > 0.0)
                           ? std::log(last / prev) / std::log(est.grid[n - 2] / est.grid[n - 1])
                           : 0.0;

  auto infinite = [&] {
    est.status = LimitStatus::Infinite;
    est.lambda = kUnbounded;
    return est;
  };
  constexpr double kCeiling = 1e12;
  constexpr double kSlopeTol = 0.05;
  // a numerator bounded away from 0 over t^r forces the ratio to infinity
  if (extrapolate_to_zero(est.grid, numer) > 1e-6 && increasing) return infinite();
  if (last > kCeiling && increasing) return infinite();
  if (slope > kSlopeTol && increasing) return infinite();
  if (slope < -kSlopeTol && decreasing) {
    est.status = LimitStatus::Vanishing;
    est.lambda = 0.0;
    return est;
  }
  est.lambda = extrapolate_to_zero(est.grid, est.ratios);
  est.status = est.lambda > 0.0 ? LimitStatus::Finite : LimitStatus::Vanishing;
  if (est.status == LimitStatus::Vanishing) est.lambda = 0.0;
  return est;
}

Theta3Estimate check_theta3(const ThetaSpec& theta, double r) {
  const auto grid = geometric_grid(1e-2, 1e-12, 2);
  return check_theta3(theta, r, grid);
}

ThetaPropertyReport theta_properties(const ThetaSpec& theta, double r) {
  ThetaPropertyReport rep;
  auto g1 = geometric_grid(1e3, 1e-6, 10);
  std::reverse(g1.begin(), g1.end());
  rep.theta1 = check_theta1(theta, g1);
  rep.theta1_samples = g1.size();
  std::vector<double> seq;
  for (int j = 0; j <= 12; ++j) seq.push_back(std::pow(10.0, -j));
  rep.theta2 = check_theta2(theta, seq);
  rep.theta2_samples = seq.size();
  rep.theta3 = check_theta3(theta, r);
  return rep;
}

// -------------------------------------------------------------------- rho

namespace {

void require_nonneg(std::span<const double> c, const char* what) {
  for (double x : c) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": coefficients must be finite and >= 0");
  }
}

}  // namespace

RhoSpec RhoSpec::nadler() { return RhoSpec(RhoKind::Nadler); }
RhoSpec RhoSpec::kannan() { return RhoSpec(RhoKind::Kannan); }
RhoSpec RhoSpec::chatterjea() { return RhoSpec(RhoKind::Chatterjea); }
RhoSpec RhoSpec::ciric1() { return RhoSpec(RhoKind::Ciric1); }
RhoSpec RhoSpec::ciric2() { return RhoSpec(RhoKind::Ciric2); }
RhoSpec RhoSpec::zamfirescu() { return RhoSpec(RhoKind::Zamfirescu); }

RhoSpec RhoSpec::reich(double alpha, double beta, double gamma) {
  std::vector<double> c{alpha, beta, gamma};
  require_nonneg(c, "reich");
  if (alpha + beta + gamma > 1.0) throw std::invalid_argument("reich needs alpha + beta + gamma <= 1");
  return RhoSpec(RhoKind::Reich, std::move(c));
}

RhoSpec RhoSpec::berinde(double alpha, double L) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("berinde needs alpha in (0, 1]");
  std::vector<double> c{alpha, L};
  require_nonneg(c, "berinde");
  return RhoSpec(RhoKind::Berinde, std::move(c));
}

RhoSpec RhoSpec::hardy_rogers(double alpha, double beta, double gamma, double delta, double L) {
  std::vector<double> c{alpha, beta, gamma, delta, L};
  require_nonneg(c, "hardy-rogers");
  if (alpha + beta + gamma + 2.0 * delta > 1.0) {
    throw std::invalid_argument("hardy-rogers needs alpha + beta + gamma + 2 delta <= 1");
  }
  return RhoSpec(RhoKind::HardyRogers, std::move(c));
}

RhoSpec RhoSpec::custom_coefficients(const RhoArgs& c) {
  require_nonneg(c, "custom-coefficients");
  return RhoSpec(RhoKind::Custom, std::vector<double>(c.begin(), c.end()));
}

RhoSpec RhoSpec::by_name(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::vector<double> p;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) p.push_back(parse_real(item));
  }
  auto arity = [&](std::size_t k) {
    if (!p.empty() && p.size() != k) {
      throw std::invalid_argument("rho '" + name + "' takes " + std::to_string(k) + " parameters");
    }
    return p.empty();
  };
  if (name == "nadler" && arity(0)) return nadler();
  if (name == "kannan" && arity(0)) return kannan();
  if (name == "chatterjea" && arity(0)) return chatterjea();
  if (name == "ciric-1" && arity(0)) return ciric1();
  if (name == "ciric-2" && arity(0)) return ciric2();
  if (name == "zamfirescu" && arity(0)) return zamfirescu();
  if (name == "reich") return arity(3) ? reich(0.5, 0.25, 0.25) : reich(p[0], p[1], p[2]);
  if (name == "berinde") return arity(2) ? berinde(0.5, 0.25) : berinde(p[0], p[1]);
  if (name == "hardy-rogers") {
    return arity(5) ? hardy_rogers(0.25, 0.25, 0.125, 0.125, 0.125) : hardy_rogers(p[0], p[1], p[2], p[3], p[4]);
  }
  if (name == "custom-coefficients") {
    if (p.size() != 5) throw std::invalid_argument("custom-coefficients takes 5 parameters");
    return custom_coefficients({p[0], p[1], p[2], p[3], p[4]});
  }
  throw std::invalid_argument("unknown rho '" + spec + "'");
}

std::vector<RhoSpec> RhoSpec::builtins() {
  return {nadler(), kannan(), chatterjea(), by_name("reich"), by_name("berinde"), by_name("hardy-rogers"),
          ciric1(), ciric2(), zamfirescu()};
}

std::string RhoSpec::name() const {
  std::string base;
  switch (kind_) {
    case RhoKind::Nadler: return "nadler";
    case RhoKind::Kannan: return "kannan";
    case RhoKind::Chatterjea: return "chatterjea";
    case RhoKind::Ciric1: return "ciric-1";
    case RhoKind::Ciric2: return "ciric-2";
    case RhoKind::Zamfirescu: return "zamfirescu";
    case RhoKind::Reich: base = "reich"; break;
    case RhoKind::Berinde: base = "berinde"; break;
    case RhoKind::HardyRogers: base = "hardy-rogers"; break;
    case RhoKind::Custom: base = "custom-coefficients"; break;
  }
  std::ostringstream os;
  os << base << ':';
  for (std::size_t i = 0; i < coeff_.size(); ++i) os << (i ? "," : "") << coeff_[i];
  return os.str();
}

bool RhoSpec::symmetric() const {
  switch (kind_) {
    case RhoKind::Reich: return coeff_[1] == coeff_[2];
    case RhoKind::Berinde: return coeff_[1] == 0.0;
    case RhoKind::HardyRogers: return coeff_[1] == coeff_[2] && coeff_[3] == coeff_[4];
    case RhoKind::Custom: return coeff_[1] == coeff_[2] && coeff_[3] == coeff_[4];
    default: return true;
  }
}

double RhoSpec::operator()(const RhoArgs& v) const {
  for (double x : v) {
    if (!(x >= 0.0)) throw DomainError("rho arguments must be >= 0; got " + format_real(x));
  }
  const auto& c = coeff_;
  switch (kind_) {
    case RhoKind::Nadler: return v[0];
    case RhoKind::Kannan: return v[1] + v[2];
    case RhoKind::Chatterjea: return v[3] + v[4];
    case RhoKind::Reich: return c[0] * v[0] + c[1] * v[1] + c[2] * v[2];
    case RhoKind::Berinde: return c[0] * v[0] + c[1] * v[4];
    case RhoKind::HardyRogers:
    case RhoKind::Custom: return c[0] * v[0] + c[1] * v[1] + c[2] * v[2] + c[3] * v[3] + c[4] * v[4];
    case RhoKind::Ciric1: return std::max({v[0], v[1], v[2], 0.5 * (v[3] + v[4])});
    case RhoKind::Ciric2: return std::max({v[0], v[1], v[2], v[3], v[4]});
    case RhoKind::Zamfirescu: return std::max({v[0], 0.5 * (v[1] + v[2]), 0.5 * (v[3] + v[4])});
  }
  return 0.0;
}

RhoAxiomReport check_rho_axioms(const RhoSpec& rho, std::size_t budget, std::uint64_t seed) {
  RhoAxiomReport rep;
  rep.samples = budget;
  rep.rho1_values = {rho({1, 1, 1, 2, 0}), rho({1, 1, 1, 0, 2}), rho({1, 1, 1, 1, 1})};
  rep.rho1 = std::all_of(rep.rho1_values.begin(), rep.rho1_values.end(), [](double v) { return v > 0.0 && v <= 1.0; });
  if (!rep.rho1) {
    rep.witnesses.push_back("rho1: values " + format_real(rep.rho1_values[0]) + ", " + format_real(rep.rho1_values[1]) +
                            ", " + format_real(rep.rho1_values[2]));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> comp(0.0, 10.0), scale(0.0, 5.0), bump(1e-3, 1.0);
  std::bernoulli_distribution zero(0.15);
  auto tuple = [&] {
    RhoArgs v{};
    for (double& x : v) x = zero(rng) ? 0.0 : comp(rng);
    return v;
  };
  auto slack = [](double v) { return 1e-12 * std::max(1.0, std::fabs(v)); };
  auto describe = [](const RhoArgs& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < 5; ++i) s += (i ? ", " : "") + format_real(v[i]);
    return s + ")";
  };

  rep.rho2 = rep.rho3_monotone = rep.rho3_strict_first = rep.rho3_strict_second = true;
  for (std::size_t i = 0; i < budget; ++i) {
    const RhoArgs v = tuple();
    const double alpha = zero(rng) ? 0.0 : scale(rng);
    RhoArgs av = v;
    for (double& x : av) x *= alpha;
    const double bound = alpha * rho(v);
    if (rep.rho2 && rho(av) > bound + slack(bound)) {
      rep.rho2 = false;
      rep.witnesses.push_back("rho2 at " + describe(v) + ", alpha = " + format_real(alpha));
    }

    RhoArgs y = v;
    for (double& x : y) x += zero(rng) ? 0.0 : bump(rng);
    if (rep.rho3_monotone && rho(v) > rho(y) + slack(rho(y))) {
      rep.rho3_monotone = false;
      rep.witnesses.push_back("rho3 monotone at " + describe(v) + " <= " + describe(y));
    }

    RhoArgs xs = v, ys{};
    for (std::size_t k = 0; k < 4; ++k) ys[k] = xs[k] + bump(rng);
    xs[4] = ys[4] = 0.0;
    if (rep.rho3_strict_first && !(rho(xs) < rho(ys))) {
      rep.rho3_strict_first = false;
      rep.witnesses.push_back("rho3 strict (fifth = 0) at " + describe(xs) + " < " + describe(ys));
    }
    // second strict clause: the fourth slot is pinned to 0, the last four
    // free arguments move
    const RhoArgs x2{xs[0], xs[1], xs[2], 0.0, xs[3]};
    const RhoArgs y2{ys[0], ys[1], ys[2], 0.0, ys[3]};
    if (rep.rho3_strict_second && !(rho(x2) < rho(y2))) {
      rep.rho3_strict_second = false;
      rep.witnesses.push_back("rho3 strict (fourth = 0) at " + describe(x2) + " < " + describe(y2));
    }
  }
  return rep;
}

LemmaL2Result lemma_l2_property(const RhoSpec& rho, double u, double v) {
  const double s = u + v;
  const double bound = std::max({rho({v, v, u, s, 0.0}), rho({v, v, u, 0.0, s}), rho({v, u, v, s, 0.0}),
                                 rho({v, u, v, 0.0, s})});
  return {u < bound, u < v};
}

}  // namespace thetafix
