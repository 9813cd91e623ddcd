#include "thetafix/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace thetafix {

// ---------------------------------------------------------------- Carrier

Carrier Carrier::real_line() {
  Carrier c;
  c.whole_line = true;
  return c;
}

Carrier Carrier::interval(double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("carrier interval needs lo <= hi");
  Carrier c;
  c.intervals.emplace_back(lo, hi);
  return c;
}

Carrier Carrier::finite(std::vector<double> pts) {
  if (pts.empty()) throw std::invalid_argument("finite carrier needs at least one point");
  Carrier c;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  c.points = std::move(pts);
  return c;
}

bool Carrier::contains(double x) const {
  if (!std::isfinite(x)) return false;
  if (whole_line) return true;
  for (const auto& [lo, hi] : intervals) {
    if (x >= lo - kIntervalTol && x <= hi + kIntervalTol) return true;
  }
  if (lattice && x >= lattice->start) {
    const double j = std::round((x - lattice->start) / lattice->step);
    if (j >= 0.0 && lattice->start + lattice->step * j == x) return true;
  }
  return std::find(points.begin(), points.end(), x) != points.end();
}

bool Carrier::contains_interval(double lo, double hi) const {
  if (lo == hi) return contains(lo);
  if (whole_line) return std::isfinite(lo) && std::isfinite(hi);
  for (const auto& [a, b] : intervals) {
    if (lo >= a - kIntervalTol && hi <= b + kIntervalTol) return true;
  }
  return false;
}

std::string Carrier::describe() const {
  if (whole_line) return "R";
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << " U ";
    first = false;
  };
  for (const auto& [lo, hi] : intervals) {
    sep();
    os << '[' << format_real(lo) << ", " << format_real(hi) << ']';
  }
  if (lattice) {
    sep();
    os << '{' << format_real(lattice->start) << ", " << format_real(lattice->start + lattice->step)
       << ", ...}";
  }
  if (!points.empty()) {
    sep();
    os << CompactSet::finite(points).to_string();
  }
  return os.str();
}

// ------------------------------------------------------------- MetricRule

MetricRule MetricRule::absolute_difference() { return MetricRule{}; }

MetricRule MetricRule::core_max(double core_lo, double core_hi) {
  if (!(core_lo < core_hi)) throw std::invalid_argument("core-max metric needs core_lo < core_hi");
  MetricRule r;
  r.kind_ = MetricKind::CoreMax;
  r.core_lo_ = core_lo;
  r.core_hi_ = core_hi;
  return r;
}

MetricRule MetricRule::table(std::vector<double> points, std::vector<std::vector<double>> matrix) {
  const std::size_t n = points.size();
  if (n == 0) throw std::invalid_argument("metric table needs at least one point");
  if (matrix.size() != n) throw std::invalid_argument("metric table size does not match points");
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) throw std::invalid_argument("metric table is not square");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix[i][j];
      if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("metric table entries must be finite and >= 0");
      if (v != matrix[j][i]) throw std::invalid_argument("metric table is not symmetric");
      if ((i == j) != (v == 0.0)) throw std::invalid_argument("metric table must vanish exactly on the diagonal");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] == points[j]) throw std::invalid_argument("metric table points must be distinct");
    }
  }
  MetricRule r;
  r.kind_ = MetricKind::CustomTable;
  r.points_ = std::move(points);
  r.matrix_ = std::move(matrix);
  return r;
}

std::string MetricRule::name() const {
  switch (kind_) {
    case MetricKind::AbsoluteDifference: return "absolute-difference";
    case MetricKind::CoreMax: return "core-max";
    case MetricKind::CustomTable: return "table";
  }
  return "unknown";
}

bool MetricRule::in_core(double x) const {
  return x >= core_lo_ - Carrier::kIntervalTol && x <= core_hi_ + Carrier::kIntervalTol;
}

std::size_t MetricRule::index_of(double x) const {
  auto it = std::find(points_.begin(), points_.end(), x);
  if (it == points_.end()) throw DomainError("point " + format_real(x) + " is not in the metric table");
  return static_cast<std::size_t>(it - points_.begin());
}

double MetricRule::operator()(double x, double y) const {
  switch (kind_) {
    case MetricKind::AbsoluteDifference:
      return std::fabs(x - y);
    case MetricKind::CoreMax:
      if (x == y) return 0.0;
      if (in_core(x) && in_core(y)) return std::fabs(x - y);
      return std::max(x, y);
    case MetricKind::CustomTable:
      return matrix_[index_of(x)][index_of(y)];
  }
  return 0.0;
}

// ------------------------------------------------------------- CompactSet

CompactSet CompactSet::finite(std::vector<double> pts) {
  if (pts.empty()) throw std::invalid_argument("finite set must be nonempty");
  for (double p : pts) {
    if (!std::isfinite(p)) throw std::invalid_argument("finite set members must be finite");
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  CompactSet s;
  s.lo_ = pts.front();
  s.hi_ = pts.back();
  s.points_ = std::move(pts);
  return s;
}

CompactSet CompactSet::interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw std::invalid_argument("interval needs finite lo <= hi");
  }
  CompactSet s;
  s.is_interval_ = true;
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

bool CompactSet::contains(double x, double tol) const {
  if (is_interval_) return x >= lo_ - tol && x <= hi_ + tol;
  return std::any_of(points_.begin(), points_.end(), [&](double p) { return std::fabs(p - x) <= tol; });
}

bool CompactSet::operator==(const CompactSet& other) const {
  const bool this_point = is_interval_ ? lo_ == hi_ : points_.size() == 1;
  const bool other_point = other.is_interval_ ? other.lo_ == other.hi_ : other.points_.size() == 1;
  if (this_point && other_point) return lo_ == other.lo_;
  if (is_interval_ != other.is_interval_) return false;
  if (is_interval_) return lo_ == other.lo_ && hi_ == other.hi_;
  return points_ == other.points_;
}

std::string format_real(double v, int significant) {
  if (v == kUnbounded) return "inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

std::string CompactSet::to_string() const {
  if (is_interval_) return "[" + format_real(lo_) + ", " + format_real(hi_) + "]";
  std::string out = "{";
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i) out += ", ";
    out += format_real(points_[i]);
  }
  return out + "}";
}

// ------------------------------------------------------------ MetricSpace

void MetricSpace::require_member(double x) const {
  if (!carrier.contains(x)) {
    throw DomainError("point " + format_real(x) + " is outside the carrier " + carrier.describe());
  }
  if (rule.kind() == MetricKind::CustomTable) {
    const auto pts = rule.table_points();
    if (std::find(pts.begin(), pts.end(), x) == pts.end()) {
      throw DomainError("point " + format_real(x) + " is not enumerated by the metric table");
    }
  }
}

void MetricSpace::require_valid(const CompactSet& s) const {
  if (!s.is_interval() || s.is_degenerate()) {
    if (s.is_interval()) {
      require_member(s.lo());
    } else {
      for (double p : s.points()) require_member(p);
    }
    return;
  }
  if (!carrier.contains_interval(s.lo(), s.hi())) {
    throw DomainError("set " + s.to_string() + " is not contained in the carrier " + carrier.describe());
  }
  if (rule.kind() == MetricKind::CustomTable) {
    throw DomainError("interval sets are not supported over a metric table");
  }
  if (rule.kind() == MetricKind::CoreMax && !(rule.in_core(s.lo()) && rule.in_core(s.hi()))) {
    throw DomainError("interval " + s.to_string() + " leaves the core of the core-max metric");
  }
}

CompactSet MultiMap::image(const MetricSpace& space, double x) const {
  space.require_member(x);
  CompactSet img = rule(x);
  space.require_valid(img);
  return img;
}

// ------------------------------------------------------------- distances

double dist(const MetricSpace& space, double x, double y) {
  space.require_member(x);
  space.require_member(y);
  return space.rule(x, y);
}

namespace {

// Point-to-set distance without carrier checks; sets are assumed validated.
double raw_dist_to_set(const MetricRule& rule, double x, const CompactSet& b) {
  if (!b.is_interval()) {
    double best = kUnbounded;
    for (double p : b.points()) best = std::min(best, rule(x, p));
    return best;
  }
  if (b.is_degenerate()) return rule(x, b.lo());
  if (x >= b.lo() && x <= b.hi()) return 0.0;
  if (rule.kind() == MetricKind::CoreMax && !rule.in_core(x)) {
    // every member differs from x and sits in the core, so d(x, b) = max(x, b)
    return std::max(x, b.lo());
  }
  return x < b.lo() ? b.lo() - x : x - b.hi();
}

double raw_nearest(const MetricRule& rule, double x, const CompactSet& b) {
  if (!b.is_interval()) {
    double best = b.points().front();
    double best_d = rule(x, best);
    for (double p : b.points().subspan(1)) {
      const double d = rule(x, p);
      if (d < best_d) {
        best = p;
        best_d = d;
      }
    }
    return best;
  }
  if (b.is_degenerate()) return b.lo();
  if (x >= b.lo() && x <= b.hi()) return x;
  if (rule.kind() == MetricKind::CoreMax && !rule.in_core(x)) return b.lo();
  return x < b.lo() ? b.lo() : b.hi();
}

// Points where a -> d(a, b) can have an interior local maximum: midpoints of
// consecutive members that the rule measures by |a - p|.
std::vector<double> breakpoints(const MetricRule& rule, const CompactSet& b) {
  std::vector<double> out;
  if (b.is_interval()) return out;
  std::vector<double> linear;
  for (double p : b.points()) {
    if (rule.kind() != MetricKind::CoreMax || rule.in_core(p)) linear.push_back(p);
  }
  for (std::size_t i = 1; i < linear.size(); ++i) out.push_back(0.5 * (linear[i - 1] + linear[i]));
  return out;
}

double raw_excess(const MetricRule& rule, const CompactSet& a, const CompactSet& b) {
  if (!a.is_interval()) {
    double sup = 0.0;
    for (double p : a.points()) sup = std::max(sup, raw_dist_to_set(rule, p, b));
    return sup;
  }
  if (a.is_degenerate()) return raw_dist_to_set(rule, a.lo(), b);
  // On a nondegenerate interval (core or real line) d(., b) is piecewise linear
  // and its supremum sits at an endpoint or at a breakpoint.
  double sup = std::max(raw_dist_to_set(rule, a.lo(), b), raw_dist_to_set(rule, a.hi(), b));
  for (double c : breakpoints(rule, b)) {
    if (c > a.lo() && c < a.hi()) sup = std::max(sup, raw_dist_to_set(rule, c, b));
  }
  return sup;
}

}  // namespace

double dist_to_set(const MetricSpace& space, double x, const CompactSet& b) {
  space.require_member(x);
  space.require_valid(b);
  return raw_dist_to_set(space.rule, x, b);
}

double excess(const MetricSpace& space, const CompactSet& a, const CompactSet& b) {
  space.require_valid(a);
  space.require_valid(b);
  return raw_excess(space.rule, a, b);
}

double hausdorff(const MetricSpace& space, const CompactSet& a, const CompactSet& b) {
  space.require_valid(a);
  space.require_valid(b);
  return std::max(raw_excess(space.rule, a, b), raw_excess(space.rule, b, a));
}

double nearest_point(const MetricSpace& space, double x, const CompactSet& b) {
  space.require_member(x);
  space.require_valid(b);
  return raw_nearest(space.rule, x, b);
}

double h_relaxed_select(const MetricSpace& space, double a, const CompactSet& set_a,
                        const CompactSet& set_b, double h) {
  if (!(h > 1.0)) throw PreconditionError("h-relaxed selection needs h > 1");
  if (!set_a.contains(a, Carrier::kIntervalTol)) {
    throw PreconditionError("selection anchor " + format_real(a) + " is not in " + set_a.to_string());
  }
  const double H = hausdorff(space, set_a, set_b);
  if (!(H > 0.0)) throw PreconditionError("h-relaxed selection needs H(A, B) > 0");
  const double b = nearest_point(space, a, set_b);
  // d(a, B) <= H(A, B) < h H(A, B)
  if (!(space.rule(a, b) < h * H)) {
    throw std::logic_error("nearest point violates the h-relaxed bound");
  }
  return b;
}

// ---------------------------------------------------------- axiom checks

MetricAxiomReport check_metric_axioms(const MetricSpace& space, std::span<const double> sample,
                                      std::size_t budget, unsigned seed) {
  MetricAxiomReport rep;
  std::vector<double> pts(sample.begin(), sample.end());
  if (space.rule.kind() == MetricKind::CustomTable && pts.empty()) {
    pts.assign(space.rule.table_points().begin(), space.rule.table_points().end());
  }
  if (pts.empty()) return rep;

  auto check = [&](double x, double y, double z) {
    ++rep.triples_checked;
    const double dxy = space.rule(x, y), dyx = space.rule(y, x);
    const double dyz = space.rule(y, z), dxz = space.rule(x, z);
    std::string fail;
    if (dxy < 0.0) fail = "negative distance";
    else if (space.rule(x, x) != 0.0) fail = "d(x,x) != 0";
    else if (x != y && dxy == 0.0) fail = "d(x,y) = 0 for x != y";
    else if (dxy != dyx) fail = "asymmetric";
    else if (dxz > dxy + dyz + 1e-12 * std::max(1.0, dxz)) fail = "triangle inequality";
    if (!fail.empty() && rep.pass) {
      rep.pass = false;
      rep.witness = fail + " at (" + format_real(x) + ", " + format_real(y) + ", " + format_real(z) + ")";
    }
  };

  if (pts.size() <= 60) {
    for (double x : pts)
      for (double y : pts)
        for (double z : pts) check(x, y, z);
    return rep;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  for (std::size_t i = 0; i < budget; ++i) check(pts[pick(rng)], pts[pick(rng)], pts[pick(rng)]);
  return rep;
}

}  // namespace thetafix
