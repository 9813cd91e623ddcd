#pragma once

// Pairwise evaluation of theta(H(Tx,Ty)) <= theta(rho(...))^k over sampled
// pair domains.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thetafix/metric.hpp"
#include "thetafix/theta_rho.hpp"

namespace thetafix {

struct ContractionSpec {
  ThetaSpec theta;
  RhoSpec rho;
  double k = 0.5;

  /// Throws std::invalid_argument unless 0 < k < 1.
  void validate() const;
};

struct PairEvidence {
  double x = 0.0;
  double y = 0.0;
  double H = 0.0;
  /// d(x,y), d(x,Tx), d(y,Ty), d(x,Ty), d(y,Tx)
  RhoArgs rho_args{};
  double rho_value = 0.0;
  double lhs = 0.0;  ///< theta(H), may overflow to inf
  double rhs = 0.0;  ///< theta(rho)^k, may overflow to inf; NaN when infeasible
  /// The comparison itself runs on ln theta(H) <= k ln theta(rho).
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  bool feasible = true;
  bool satisfied = false;
  std::optional<double> kmin_pair;
  std::string stratum;

  double log_margin() const { return log_lhs - log_rhs; }
};

/// Throws PreconditionError when H(Tx,Ty) = 0.
PairEvidence pair_check(const MetricSpace& space, const MultiMap& T, const ContractionSpec& spec, double x,
                        double y);

struct SamplingConfig {
  int interval_nodes = 201;
  double lattice_ceiling = 100.0;
  int random_points = 0;
  /// Sampled range when the carrier is the whole line.
  double line_lo = -10.0;
  double line_hi = 10.0;
};

struct PairDomain {
  std::string description;
  std::vector<std::pair<double, double>> pairs;
};

PairDomain explicit_pairs(std::vector<std::pair<double, double>> pairs);

/// Points of the carrier: uniform nodes on each interval, the lattice up to the
/// ceiling, isolated points and optional seeded random interval points.
std::vector<double> sample_points(const Carrier& carrier, const SamplingConfig& cfg, std::uint64_t seed);

/// All pairs x > y of the sampled points; with `both_orders` also x < y.
PairDomain sample_pairs(const Carrier& carrier, const SamplingConfig& cfg, std::uint64_t seed,
                        bool both_orders);

enum class Verdict { CertifiedOnSample, Violated, Infeasible };

std::string to_string(Verdict v);

struct StratumSummary {
  std::string label;
  std::size_t pairs = 0;
  std::size_t violations = 0;
  std::size_t infeasible = 0;
  double kmin = 0.0;
  /// smallest ln rhs - ln lhs over feasible pairs; negative once violated
  double min_slack = kUnbounded;
};

struct CertReport {
  ContractionSpec spec;
  std::string domain;
  std::size_t pair_count = 0;   ///< pairs with H > 0
  std::size_t skipped_zero = 0; ///< pairs with H = 0
  std::vector<PairEvidence> violations;
  std::vector<PairEvidence> infeasible;
  /// sup of kmin-pair; kUnbounded once any pair is infeasible, NaN when no pairs.
  double kmin = 0.0;
  Verdict verdict = Verdict::CertifiedOnSample;
  bool empty_domain = false;
  std::vector<StratumSummary> strata;
};

/// Pair label from the map's stratum labels, order-independent.
std::string pair_stratum(const MultiMap& T, double x, double y);

/// Pairs are evaluated in (x, y) order; the report is a deterministic function
/// of the domain.
CertReport certify(const MetricSpace& space, const MultiMap& T, const ContractionSpec& spec,
                   const PairDomain& domain);

struct RemarkCheck {
  double x = 0.0;
  double y = 0.0;
  double H = 0.0;
  double rho_value = 0.0;
  bool pass = false;
};

/// H(Tx,Ty) <= rho(five distances), the theta-free consequence of the contraction.
std::vector<RemarkCheck> remark_consequence_check(const MetricSpace& space, const MultiMap& T, const RhoSpec& rho,
                                                  const PairDomain& domain);

/// theta(H(Tx,Ty)) <= theta(d(x,y))^k, i.e. certify with rho = nadler.
CertReport weak_theta_check(const MetricSpace& space, const MultiMap& T, const ThetaSpec& theta, double k,
                            const PairDomain& domain);

struct RatioPoint {
  double x = 0.0;
  double H = 0.0;
  double u = 0.0;
  double ratio = 0.0;
};

/// H(Tx,Ty)/rho(five distances) along increasing x with y fixed; pairs with
/// H = 0 are dropped.
std::vector<RatioPoint> nonlinear_ratio_limit(const MetricSpace& space, const MultiMap& T, const RhoSpec& rho,
                                              const std::vector<double>& xs, double y);

}  // namespace thetafix
