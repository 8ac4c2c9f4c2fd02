#ifndef FHL_DIAGNOSTICS_HPP
#define FHL_DIAGNOSTICS_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fhl/solver.hpp"

namespace fhl {

struct ContinuationOptions {
  SolveOptions solve;
  int modes = 256;
  double window = 3.0;   // profile-distance window
  double strip_r = 0.0;  // 0: ten grid cells
  std::function<void(const SolutionRecord&)> on_record;
};

struct ContinuationEntry {
  double eps = 0.0;
  SolutionRecord record;
  double mu_pow_eps = 0.0;
  double profile_dist = 0.0;
  double boundary_sup = 0.0;
  double interior_l1 = 0.0;
  double rate_lhs = 0.0;
  double wall_time = 0.0;
  std::string status;
};

struct ContinuationReport {
  Params base;
  DomainSpec domain;
  int modes = 0;
  double window = 3.0;
  double strip_r = 0.0;
  std::vector<ContinuationEntry> records;
};

/// Warm-started solves over a strictly decreasing eps list.
ContinuationReport continuation(const Params& base, const DomainSpec& domain,
                                const std::vector<double>& eps_list, const ContinuationOptions& opts,
                                const RieszWeights* weights = nullptr);

/// Fills the derived per-record fields from the record data.
void derive_entry(ContinuationEntry& e, const ContinuationReport& report);

double default_strip(const DomainSpec& d);

using Series = std::vector<std::pair<double, double>>;

struct SequenceCheck {
  Series values;
  bool flag = false;
};

SequenceCheck mu_power_check(const ContinuationReport& r);
SequenceCheck eps_bound_check(const ContinuationReport& r);

struct RateLaw {
  Series lhs;
  double rhs = 0.0;
  double spread_last3 = 0.0;  // (max - min) / mean over the last three
};

double rate_lhs_subcritical(const Params& p, double sup_norm);
double rate_lhs_bn(const Params& p, double sup_norm);
double rate_rhs_subcritical(const Params& p, double robin);
double rate_rhs_bn(const Params& p, double robin);

RateLaw rate_law_subcritical(const ContinuationReport& r, std::optional<double> robin_at_x0);
RateLaw rate_law_bn(const ContinuationReport& r, std::optional<double> robin_at_x0);

double relative_spread(const std::vector<double>& v);

/// Robin critical point nearest to `guess`: coarse scan of an inset box, then
/// two local zooms. Returns the point and the cell size of the last zoom.
std::pair<Eigen::VectorXd, double> locate_robin_critical_point(const EigenBasis& green_basis, double s,
                                                               const Eigen::VectorXd& guess);

/// Green-function basis on the geometry of `d` with K modes.
EigenBasis green_basis(const DomainSpec& d, int K);

/// Default comparison points for green_limit_check around x0.
std::vector<Eigen::VectorXd> green_sample_points(const DomainSpec& d, const Eigen::VectorXd& x0);

struct GreenLimitRow {
  Eigen::VectorXd x;
  double scaled_u = 0.0;
  double green_term = 0.0;
  double ratio = 0.0;
};

struct GreenLimit {
  std::vector<GreenLimitRow> rows;
  double median_ratio = 0.0;
};

GreenLimit green_limit_check(const SolutionRecord& rec, const EigenBasis& green_basis, double s,
                             const Eigen::VectorXd& x0, const std::vector<Eigen::VectorXd>& points);

struct Symmetrization {
  double lhsA = 0.0;
  double lhsB = 0.0;
  double residual = 0.0;
};

Symmetrization symmetrization_check(const GridField& f, double mu, const RieszWeights& w);

struct PohozaevBalance {
  double interior_term = 0.0;
  std::vector<double> remainder_terms;  // strip q-norm, interior L1^2, strip energy, moment
  double remainder_sum = 0.0;
  double relative_gap = 0.0;
};

PohozaevBalance pohozaev_balance(const SolutionRecord& rec, const Params& p, const RieszWeights& w,
                                 double r);

/// Free-space hook: for U = W^{two_star} sampled on a large window, the
/// relative gap between coef * D and (mu/p) * A, coef = n/p - (n-2s)/2.
double pohozaev_free_space_gap(const GridField& bubble_power, const Params& p, const RieszWeights& w);

struct BoundaryRow {
  double eps = 0.0;
  double strip_sup = 0.0;
  double interior_l1 = 0.0;
  double sup_norm = 0.0;
};

struct BoundaryBounds {
  std::vector<BoundaryRow> rows;
  bool flag = false;
  double strip_ratio = 1.0;     // max/min over records
  double interior_ratio = 1.0;  // max/min over records
  double sup_growth = 1.0;      // last / first
};

BoundaryBounds boundary_bounds(const ContinuationReport& r, double strip);

/// Strip sup over dist < r and interior mass over dist >= r for node values.
std::pair<double, double> strip_and_interior(const GridField& u, double r);

}  // namespace fhl

#endif
