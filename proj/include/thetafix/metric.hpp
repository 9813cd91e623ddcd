#pragma once

// Scalar metric spaces, compact value sets and the Pompeiu-Hausdorff distance.

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace thetafix {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Value reserved for unbounded Hausdorff configurations. It is IEEE +inf, so
/// `kUnbounded < finite` is always false and it propagates through max/+.
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

inline bool is_unbounded(double v) { return v == kUnbounded; }

/// Arithmetic lattice {start, start + step, start + 2 step, ...}; membership is
/// tested exactly.
struct Lattice {
  double start = 0.0;
  double step = 1.0;
};

/// Union of closed intervals, an optional one-sided lattice and isolated points.
/// An empty description with `whole_line` set is the real line.
struct Carrier {
  std::vector<std::pair<double, double>> intervals;
  std::optional<Lattice> lattice;
  std::vector<double> points;
  bool whole_line = false;

  static constexpr double kIntervalTol = 1e-12;

  static Carrier real_line();
  static Carrier interval(double lo, double hi);
  static Carrier finite(std::vector<double> pts);

  bool contains(double x) const;
  /// True if the whole closed interval [lo, hi] lies in the carrier.
  bool contains_interval(double lo, double hi) const;
  std::string describe() const;
};

enum class MetricKind {
  AbsoluteDifference,
  CoreMax,      ///< |x-y| inside a core interval, max{x,y} once either leaves it
  CustomTable,  ///< symmetric matrix over an enumerated finite carrier
};

class MetricRule {
 public:
  static MetricRule absolute_difference();
  static MetricRule core_max(double core_lo = 0.0, double core_hi = 2.0);
  /// Throws std::invalid_argument unless the table is square, symmetric,
  /// nonnegative, zero exactly on the diagonal and sized like `points`.
  static MetricRule table(std::vector<double> points, std::vector<std::vector<double>> matrix);

  MetricKind kind() const { return kind_; }
  std::string name() const;

  double core_lo() const { return core_lo_; }
  double core_hi() const { return core_hi_; }
  bool in_core(double x) const;

  /// Raw rule evaluation. Carrier checks live in MetricSpace.
  double operator()(double x, double y) const;

  std::span<const double> table_points() const { return points_; }
  const std::vector<std::vector<double>>& table_matrix() const { return matrix_; }

 private:
  MetricKind kind_ = MetricKind::AbsoluteDifference;
  double core_lo_ = 0.0;
  double core_hi_ = 0.0;
  std::vector<double> points_;
  std::vector<std::vector<double>> matrix_;

  std::size_t index_of(double x) const;
};

/// Nonempty compact subset of the real line: a finite point list (stored sorted,
/// without duplicates) or a closed interval.
class CompactSet {
 public:
  static CompactSet finite(std::vector<double> pts);
  static CompactSet point(double x) { return finite({x}); }
  static CompactSet interval(double lo, double hi);

  bool is_interval() const { return is_interval_; }
  bool is_degenerate() const { return is_interval_ && lo_ == hi_; }
  std::span<const double> points() const { return points_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  /// Membership up to an absolute tolerance.
  bool contains(double x, double tol = 0.0) const;
  bool operator==(const CompactSet& other) const;

  /// `{a, b, c}` or `[lo, hi]`, 12 significant digits.
  std::string to_string() const;

 private:
  bool is_interval_ = false;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> points_;
};

std::string format_real(double v, int significant = 12);

struct MetricSpace {
  Carrier carrier;
  MetricRule rule;

  void require_member(double x) const;
  void require_valid(const CompactSet& s) const;
};

/// Set-valued map defined on the carrier of a space.
struct MultiMap {
  std::string name;
  std::function<CompactSet(double)> rule;
  /// Optional label of the piece of the definition that handles x.
  std::function<std::string(double)> stratum;
  bool compact_valued = true;
  bool closed_bounded = true;

  /// Image of x, validated against the carrier of `space`.
  CompactSet image(const MetricSpace& space, double x) const;
  std::string stratum_of(double x) const { return stratum ? stratum(x) : std::string{}; }
};

double dist(const MetricSpace& space, double x, double y);
double dist_to_set(const MetricSpace& space, double x, const CompactSet& b);
double excess(const MetricSpace& space, const CompactSet& a, const CompactSet& b);
double hausdorff(const MetricSpace& space, const CompactSet& a, const CompactSet& b);

/// Element of b realising dist_to_set(x, b); ties go to the smallest value.
double nearest_point(const MetricSpace& space, double x, const CompactSet& b);

/// Selection b in B with d(a, b) < h * H(A, B). Requires H(A, B) > 0, h > 1 and
/// a in A.
double h_relaxed_select(const MetricSpace& space, double a, const CompactSet& set_a,
                        const CompactSet& set_b, double h);

struct MetricAxiomReport {
  bool pass = true;
  std::size_t triples_checked = 0;
  std::string witness;
};

/// Exhaustive for tables up to 60 points; otherwise samples `budget` triples.
MetricAxiomReport check_metric_axioms(const MetricSpace& space, std::span<const double> sample,
                                      std::size_t budget = 100000, unsigned seed = 7);

}  // namespace thetafix
