#include "thetafix/inclusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "thetafix/metric.hpp"

namespace thetafix {

int FdeProblem::n() const { return static_cast<int>(std::floor(beta)) + 1; }

UniformGrid FdeProblem::grid() const { return UniformGrid(t0, T, M); }

void FdeProblem::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be a finite positive number");
  if (beta == std::floor(beta)) throw std::invalid_argument("beta must not be an integer; got " + format_real(beta));
  if (!(t0 < T)) throw std::invalid_argument("need t0 < T");
  if (!(t0 < alpha && alpha < T)) throw std::invalid_argument("alpha must lie strictly inside (t0, T)");
  const auto count = static_cast<std::size_t>(n());
  if (a.size() != count) throw std::invalid_argument("a needs n = " + std::to_string(count) + " entries");
  if (g.size() != count) throw std::invalid_argument("g needs n = " + std::to_string(count) + " entries");
  if (p.size() != count) throw std::invalid_argument("p needs n = " + std::to_string(count) + " entries");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (M < 2) throw std::invalid_argument("grid size M must be >= 2");
  if (!(state_range.first < state_range.second)) throw std::invalid_argument("state range needs lo < hi");
}

std::string to_string(Gamma1Variant v) { return v == Gamma1Variant::StrictD ? "strict-d" : "paper-example"; }

Gamma1Variant gamma1_variant_from(const std::string& name) {
  if (name == "strict-d") return Gamma1Variant::StrictD;
  if (name == "paper-example") return Gamma1Variant::PaperExample;
  throw std::invalid_argument("unknown gamma1 variant '" + name + "' (strict-d | paper-example)");
}

double gamma1(const FdeProblem& pb, Gamma1Variant variant) {
  double sum = 2.0 / gamma_fn(pb.beta + 1.0);
  double fact = 1.0;
  for (int k = 1; k < pb.n(); ++k) {
    fact *= k;
    const double c = variant == Gamma1Variant::StrictD ? 1.0 / fact : 1.0;
    sum += c / gamma_fn(pb.beta - k + 1.0);
  }
  return sum * std::pow(pb.T - pb.t0, pb.beta);
}

namespace {

double grid_sup(const FdeProblem& pb, const Expression& e) {
  const UniformGrid g = pb.grid();
  double s = 0.0;
  for (int i = 0; i <= g.M; ++i) s = std::max(s, std::fabs(e(g.node(i), 0.0)));
  return s;
}

}  // namespace

double m_norm(const FdeProblem& pb) { return grid_sup(pb, pb.m); }

std::vector<double> p_norms(const FdeProblem& pb) {
  std::vector<double> out;
  for (const auto& pk : pb.p) out.push_back(grid_sup(pb, pk));
  return out;
}

double gamma2(const FdeProblem& pb) {
  const auto norms = p_norms(pb);
  double sum = 0.0, fact = 1.0;
  for (std::size_t k = 0; k < norms.size(); ++k) {
    if (k) fact *= static_cast<double>(k);
    sum += std::pow(pb.T - pb.t0, static_cast<double>(k)) * norms[k] / fact;
  }
  return sum;
}

ConditionDReport condition_d_check(const FdeProblem& pb, Gamma1Variant variant, std::optional<double> tau) {
  ConditionDReport r;
  r.gamma1 = gamma1(pb, variant);
  r.gamma2 = gamma2(pb);
  r.m_norm = m_norm(pb);
  r.lhs = r.gamma1 * r.m_norm + r.gamma2;
  r.tau = tau.value_or(pb.tau);
  if (!(r.tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  r.bound = std::exp(-r.tau);
  r.satisfied = r.lhs <= r.bound;
  if (r.lhs < 1.0) r.tau_max = r.lhs > 0.0 ? -std::log(r.lhs) : kUnbounded;
  return r;
}

double interval_hausdorff(double a, double b, double c, double d) { return std::max(std::fabs(a - c), std::fabs(b - d)); }

EnvelopeReport lipschitz_envelope_check(const FdeProblem& pb, std::size_t budget, std::uint64_t seed) {
  EnvelopeReport rep;
  const UniformGrid g = pb.grid();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> node(0, g.M);
  std::uniform_real_distribution<double> state(pb.state_range.first, pb.state_range.second);
  auto slack = [](double v) { return 1e-12 * std::max(1.0, std::fabs(v)); };
  auto witness = [&](bool& flag, const std::string& what) {
    if (flag) rep.witnesses.push_back(what);
    flag = false;
  };
  auto at = [](double t, double x, double xt) {
    return " at t = " + format_real(t) + ", x = " + format_real(x) + ", x~ = " + format_real(xt);
  };

  for (std::size_t s = 0; s < budget; ++s) {
    ++rep.samples;
    const double t = g.node(node(rng));
    const double x = state(rng), xt = state(rng);
    const double mt = pb.m(t, 0.0);
    const double lo1 = pb.lo(t, x), hi1 = pb.hi(t, x), lo2 = pb.lo(t, xt), hi2 = pb.hi(t, xt);
    if (lo1 > hi1) witness(rep.f_ordered, "lo > hi" + at(t, x, x));

    const double H = interval_hausdorff(lo1, hi1, lo2, hi2);
    const double bound = mt * std::fabs(x - xt);
    if (H > bound + slack(bound)) {
      witness(rep.f_lipschitz, "H(F(t,x),F(t,x~)) = " + format_real(H) + " > m(t)|x-x~| = " + format_real(bound) +
                                   at(t, x, xt));
    }
    const double lo0 = pb.lo(t, 0.0), hi0 = pb.hi(t, 0.0);
    const double d0 = std::max(lo0, 0.0) + std::max(-hi0, 0.0);
    if (d0 > mt + slack(mt)) witness(rep.f_origin, "d(0,F(t,0)) = " + format_real(d0) + " > m(t) = " + format_real(mt) + " at t = " + format_real(t));

    for (std::size_t k = 0; k < pb.g.size(); ++k) {
      const double diff = std::fabs(pb.g[k](t, x) - pb.g[k](t, xt));
      const double gb = pb.p[k](t, 0.0) * std::fabs(x - xt);
      if (diff > gb + slack(gb)) {
        witness(rep.g_lipschitz, "|g_" + std::to_string(k) + "(t,x) - g_" + std::to_string(k) + "(t,x~)| = " +
                                     format_real(diff) + " > p_" + std::to_string(k) + "(t)|x-x~| = " + format_real(gb) +
                                     at(t, x, xt));
      }
    }
  }
  rep.pass = rep.f_lipschitz && rep.f_origin && rep.g_lipschitz && rep.f_ordered;
  return rep;
}

GridFunction boundary_polynomial(const FdeProblem& pb) {
  return GridFunction::sample(pb.grid(), [&](double t) {
    double s = 0.0, term = 1.0;
    for (int k = 0; k < pb.n(); ++k) {
      if (k) term *= (t - pb.alpha) / k;
      s += pb.a[k] * term;
    }
    return s;
  });
}

GridFunction midpoint_selection(const FdeProblem& pb, const GridFunction& x) {
  GridFunction w = x;
  for (int i = 0; i <= x.grid().M; ++i) {
    const double t = x.grid().node(i);
    w[i] = 0.5 * (pb.lo(t, x[i]) + pb.hi(t, x[i]));
  }
  return w;
}

GridFunction proximal_selection(const FdeProblem& pb, const GridFunction& x, const GridFunction& w_prev) {
  if (!(x.grid() == w_prev.grid())) throw std::invalid_argument("selection and state live on different grids");
  GridFunction w = w_prev;
  for (int i = 0; i <= x.grid().M; ++i) {
    const double t = x.grid().node(i);
    const double lo = pb.lo(t, x[i]), hi = pb.hi(t, x[i]);
    w[i] = std::clamp(w_prev[i], lo, std::max(lo, hi));
  }
  return w;
}

std::optional<std::size_t> selection_violation(const FdeProblem& pb, const GridFunction& x, const GridFunction& w) {
  for (int i = 0; i <= x.grid().M; ++i) {
    const double t = x.grid().node(i);
    const double lo = pb.lo(t, x[i]), hi = pb.hi(t, x[i]);
    const double slack = 1e-12 * std::max({1.0, std::fabs(lo), std::fabs(hi)});
    if (!(lo <= hi) || w[i] < lo - slack || w[i] > hi + slack) return static_cast<std::size_t>(i);
  }
  return std::nullopt;
}

namespace {

// Trapezoid rule for int_{t0}^{alpha} g(s, x(s)) ds; alpha need not be a node.
double integrate_to_alpha(const FdeProblem& pb, const Expression& gk, const GridFunction& x) {
  const UniformGrid& g = x.grid();
  const double pos = (pb.alpha - g.t0) / g.h();
  int j = static_cast<int>(std::floor(pos));
  if (pos - j > 1.0 - 1e-12) ++j;
  double acc = 0.0;
  double prev = gk(g.node(0), x[0]);
  for (int i = 1; i <= j; ++i) {
    const double cur = gk(g.node(i), x[i]);
    acc += 0.5 * g.h() * (prev + cur);
    prev = cur;
  }
  const double rest = pb.alpha - g.node(j);
  if (rest > 1e-12 * g.h()) acc += 0.5 * rest * (prev + gk(pb.alpha, x.interpolate(pb.alpha)));
  return acc;
}

}  // namespace

LambdaResult lambda_apply(const FdeProblem& pb, const GridFunction& x, const GridFunction& w, bool with_residual) {
  if (!(x.grid() == w.grid())) throw std::invalid_argument("selection and state live on different grids");
  if (auto bad = selection_violation(pb, x, w)) {
    const double t = x.grid().node(static_cast<int>(*bad));
    throw PreconditionError("selection leaves F(t, x(t)) at node " + std::to_string(*bad) + " (t = " + format_real(t) +
                            "): w = " + format_real(w[*bad]) + " not in [" + format_real(pb.lo(t, x[*bad])) + ", " +
                            format_real(pb.hi(t, x[*bad])) + "]");
  }
  const int n = pb.n();
  std::vector<double> c(n);
  for (int k = 0; k < n; ++k) {
    c[k] = pb.a[k] + integrate_to_alpha(pb, pb.g[k], x) - rl_integral_at(w, pb.beta - k, pb.alpha);
  }
  std::vector<double> out = rl_integral_all(w, pb.beta);
  const UniformGrid& g = x.grid();
  for (int i = 0; i <= g.M; ++i) {
    const double t = g.node(i);
    double term = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k) term *= (t - pb.alpha) / k;
      out[i] += c[k] * term;
    }
  }
  LambdaResult r{GridFunction(g, std::move(out)), w, std::nullopt};
  if (with_residual) r.residual = sup_distance(x, r.output);
  return r;
}

InclusionSolution solve_inclusion(const FdeProblem& pb, std::optional<GridFunction> x0, const InclusionConfig& cfg) {
  pb.validate();
  InclusionSolution sol;
  sol.condition_d = condition_d_check(pb, Gamma1Variant::PaperExample).satisfied;
  GridFunction x = x0 ? std::move(*x0) : boundary_polynomial(pb);
  if (!(x.grid() == pb.grid())) throw std::invalid_argument("initial iterate is not on the problem grid");
  GridFunction w = midpoint_selection(pb, x);

  for (int j = 0; j < cfg.max_iter; ++j) {
    GridFunction next = lambda_apply(pb, x, w).output;
    const double step = sup_distance(next, x);
    sol.steps.push_back(step);
    x = std::move(next);
    w = proximal_selection(pb, x, w);
    if (!std::isfinite(step)) throw DivergenceError("non-finite step at iteration " + std::to_string(j), sol.steps);
    if (step <= cfg.tol) {
      sol.converged = true;
      break;
    }
    if (j >= 10 && step > 10.0 * sol.steps[j - 10]) {
      throw DivergenceError("step norm grew " + format_real(step / sol.steps[j - 10], 4) + "x over 10 iterations",
                            sol.steps);
    }
  }

  const double floor = 1e-13 * std::max(1.0, x.sup_norm());
  for (std::size_t j = 1; j < sol.steps.size(); ++j) {
    if (sol.steps[j - 1] > floor && sol.steps[j] > floor) {
      sol.max_step_ratio = std::max(sol.max_step_ratio, sol.steps[j] / sol.steps[j - 1]);
    }
  }
  sol.residual = *lambda_apply(pb, x, w, true).residual;
  sol.inclusion_ok = !selection_violation(pb, x, w).has_value();
  sol.solution = std::move(x);
  sol.selection = std::move(w);
  return sol;
}

namespace {

// Random trigonometric profile with values in [0, 1].
std::vector<double> smooth_profile(std::mt19937_64& rng, const UniformGrid& g) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0), phase(0.0, 2.0 * std::numbers::pi);
  double a[3], ph[3], norm = 0.0;
  for (int j = 0; j < 3; ++j) {
    a[j] = coef(rng);
    ph[j] = phase(rng);
    norm += std::fabs(a[j]);
  }
  std::vector<double> s(g.size());
  for (int i = 0; i <= g.M; ++i) {
    const double u = (g.node(i) - g.t0) / (g.T - g.t0);
    double v = 0.0;
    for (int j = 0; j < 3; ++j) v += a[j] * std::sin((j + 1) * std::numbers::pi * u + ph[j]);
    s[i] = std::clamp(0.5 + 0.5 * v / norm, 0.0, 1.0);
  }
  return s;
}

}  // namespace

ContractionEstimate contraction_estimate(const FdeProblem& pb, std::size_t pairs, std::uint64_t seed) {
  pb.validate();
  const UniformGrid g = pb.grid();
  const auto [lo, hi] = pb.state_range;
  std::mt19937_64 rng(seed);
  auto state = [&] {
    std::vector<double> s = smooth_profile(rng, g);
    for (double& v : s) v = lo + (hi - lo) * v;
    return GridFunction(g, std::move(s));
  };

  ContractionEstimate est;
  for (std::size_t p = 0; p < pairs; ++p) {
    const GridFunction x = state();
    const GridFunction xt = state();
    const std::vector<double> s = smooth_profile(rng, g);
    GridFunction w = x;
    for (int i = 0; i <= g.M; ++i) {
      const double t = g.node(i);
      const double l = pb.lo(t, x[i]), h = pb.hi(t, x[i]);
      w[i] = l + s[i] * (h - l);
    }
    const double denom = sup_distance(x, xt);
    if (denom == 0.0) continue;
    const GridFunction wt = proximal_selection(pb, xt, w);
    const double num = sup_distance(lambda_apply(pb, x, w).output, lambda_apply(pb, xt, wt).output);
    est.ratios.push_back(num / denom);
    est.sup_ratio = std::max(est.sup_ratio, num / denom);
    ++est.pairs;
  }
  return est;
}

}  // namespace thetafix
