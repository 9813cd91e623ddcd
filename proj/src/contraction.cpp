#include "thetafix/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace thetafix {

void ContractionSpec::validate() const {
  if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("contraction constant k must lie in (0, 1); got " + format_real(k));
}

namespace {

constexpr double kThetaOneGuard = 1e-15;

RhoArgs five_distances(const MetricSpace& space, double x, double y, const CompactSet& tx, const CompactSet& ty) {
  return {dist(space, x, y), dist_to_set(space, x, tx), dist_to_set(space, y, ty), dist_to_set(space, x, ty),
          dist_to_set(space, y, tx)};
}

}  // namespace

PairEvidence pair_check(const MetricSpace& space, const MultiMap& T, const ContractionSpec& spec, double x,
                        double y) {
  spec.validate();
  const CompactSet tx = T.image(space, x);
  const CompactSet ty = T.image(space, y);
  PairEvidence ev;
  ev.x = x;
  ev.y = y;
  ev.H = hausdorff(space, tx, ty);
  if (ev.H == 0.0) {
    throw PreconditionError("H(Tx,Ty) = 0 at (" + format_real(x) + ", " + format_real(y) + "); pair is excluded");
  }
  ev.rho_args = five_distances(space, x, y, tx, ty);
  ev.rho_value = spec.rho(ev.rho_args);
  ev.stratum = pair_stratum(T, x, y);
  ev.lhs = spec.theta.eval(ev.H);
  ev.log_lhs = spec.theta.log_eval(ev.H);

  if (!(ev.rho_value > 0.0) || spec.theta.eval_minus_one(ev.rho_value) < kThetaOneGuard) {
    ev.feasible = false;
    ev.satisfied = false;
    ev.rhs = std::nan("");
    ev.log_rhs = std::nan("");
    return ev;
  }
  const double log_theta_rho = spec.theta.log_eval(ev.rho_value);
  ev.log_rhs = spec.k * log_theta_rho;
  ev.rhs = std::exp(ev.log_rhs);
  ev.satisfied = ev.log_lhs <= ev.log_rhs;
  ev.kmin_pair = ev.log_lhs / log_theta_rho;
  return ev;
}

PairDomain explicit_pairs(std::vector<std::pair<double, double>> pairs) {
  PairDomain d;
  d.description = "explicit list of " + std::to_string(pairs.size()) + " pairs";
  d.pairs = std::move(pairs);
  return d;
}

std::vector<double> sample_points(const Carrier& carrier, const SamplingConfig& cfg, std::uint64_t seed) {
  if (cfg.interval_nodes < 2) throw std::invalid_argument("interval_nodes must be >= 2");
  std::vector<std::pair<double, double>> intervals = carrier.intervals;
  if (carrier.whole_line) intervals.emplace_back(cfg.line_lo, cfg.line_hi);

  std::vector<double> pts;
  for (const auto& [lo, hi] : intervals) {
    for (int i = 0; i < cfg.interval_nodes; ++i) {
      pts.push_back(i == cfg.interval_nodes - 1 ? hi : lo + (hi - lo) * i / (cfg.interval_nodes - 1));
    }
  }
  if (carrier.lattice) {
    const Lattice& l = *carrier.lattice;
    for (long i = 0;; ++i) {
      const double v = l.start + static_cast<double>(i) * l.step;
      if (v > cfg.lattice_ceiling) break;
      pts.push_back(v);
    }
  }
  pts.insert(pts.end(), carrier.points.begin(), carrier.points.end());
  if (cfg.random_points > 0 && !intervals.empty()) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, intervals.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < cfg.random_points; ++i) {
      const auto& [lo, hi] = intervals[pick(rng)];
      pts.push_back(lo + (hi - lo) * unit(rng));
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

PairDomain sample_pairs(const Carrier& carrier, const SamplingConfig& cfg, std::uint64_t seed, bool both_orders) {
  const std::vector<double> pts = sample_points(carrier, cfg, seed);
  PairDomain d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      d.pairs.emplace_back(pts[i], pts[j]);
      if (both_orders) d.pairs.emplace_back(pts[j], pts[i]);
    }
  }
  d.description = std::to_string(pts.size()) + " sampled points of " + carrier.describe() + " (" +
                  std::to_string(cfg.interval_nodes) + " nodes per interval, lattice up to " +
                  format_real(cfg.lattice_ceiling) + ", " + std::to_string(cfg.random_points) + " random points, seed " +
                  std::to_string(seed) + (both_orders ? ", both orders)" : ", x > y)");
  return d;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::CertifiedOnSample: return "certified-on-sample";
    case Verdict::Violated: return "violated";
    case Verdict::Infeasible: return "infeasible";
  }
  return "?";
}

std::string pair_stratum(const MultiMap& T, double x, double y) {
  std::string a = T.stratum_of(x), b = T.stratum_of(y);
  if (a.empty() && b.empty()) return {};
  if (b < a) std::swap(a, b);
  return a + "/" + b;
}

CertReport certify(const MetricSpace& space, const MultiMap& T, const ContractionSpec& spec,
                   const PairDomain& domain) {
  spec.validate();
  if (domain.pairs.empty()) throw std::invalid_argument("pair domain is empty");
  CertReport rep;
  rep.spec = spec;
  rep.domain = domain.description;

  auto pairs = domain.pairs;
  std::sort(pairs.begin(), pairs.end());
  std::map<std::string, StratumSummary> strata;
  double kmin = -kUnbounded;
  for (const auto& [x, y] : pairs) {
    if (hausdorff(space, T.image(space, x), T.image(space, y)) == 0.0) {
      ++rep.skipped_zero;
      continue;
    }
    PairEvidence ev = pair_check(space, T, spec, x, y);
    ++rep.pair_count;
    StratumSummary& s = strata[ev.stratum];
    s.label = ev.stratum;
    ++s.pairs;
    if (!ev.feasible) {
      ++s.infeasible;
      s.kmin = kUnbounded;
      kmin = kUnbounded;
      rep.infeasible.push_back(std::move(ev));
      continue;
    }
    s.kmin = std::max(s.kmin, *ev.kmin_pair);
    s.min_slack = std::min(s.min_slack, -ev.log_margin());
    kmin = std::max(kmin, *ev.kmin_pair);
    if (!ev.satisfied) {
      ++s.violations;
      rep.violations.push_back(std::move(ev));
    }
  }
  for (auto& [label, s] : strata) rep.strata.push_back(std::move(s));

  rep.empty_domain = rep.pair_count == 0;
  rep.kmin = rep.empty_domain ? std::nan("") : kmin;
  if (!rep.violations.empty()) rep.verdict = Verdict::Violated;
  else if (!rep.infeasible.empty()) rep.verdict = Verdict::Infeasible;
  else rep.verdict = Verdict::CertifiedOnSample;
  return rep;
}

std::vector<RemarkCheck> remark_consequence_check(const MetricSpace& space, const MultiMap& T, const RhoSpec& rho,
                                                  const PairDomain& domain) {
  std::vector<RemarkCheck> out;
  out.reserve(domain.pairs.size());
  for (const auto& [x, y] : domain.pairs) {
    const CompactSet tx = T.image(space, x);
    const CompactSet ty = T.image(space, y);
    RemarkCheck c;
    c.x = x;
    c.y = y;
    c.H = hausdorff(space, tx, ty);
    c.rho_value = rho(five_distances(space, x, y, tx, ty));
    c.pass = c.H <= c.rho_value;
    out.push_back(c);
  }
  return out;
}

CertReport weak_theta_check(const MetricSpace& space, const MultiMap& T, const ThetaSpec& theta, double k,
                            const PairDomain& domain) {
  return certify(space, T, ContractionSpec{theta, RhoSpec::nadler(), k}, domain);
}

std::vector<RatioPoint> nonlinear_ratio_limit(const MetricSpace& space, const MultiMap& T, const RhoSpec& rho,
                                              const std::vector<double>& xs, double y) {
  if (!std::is_sorted(xs.begin(), xs.end()) || std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
    throw std::invalid_argument("ratio sample sequence must be strictly increasing");
  }
  std::vector<RatioPoint> out;
  const CompactSet ty = T.image(space, y);
  for (double x : xs) {
    const CompactSet tx = T.image(space, x);
    const double H = hausdorff(space, tx, ty);
    if (H == 0.0) continue;
    const double u = rho(five_distances(space, x, y, tx, ty));
    out.push_back({x, H, u, H / u});
  }
  return out;
}

}  // namespace thetafix
