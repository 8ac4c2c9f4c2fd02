#ifndef FHL_SPECTRAL_HPP
#define FHL_SPECTRAL_HPP

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "fhl/grid.hpp"

namespace fhl {

struct Mode {
  int kx = 1;
  int ky = 0;  // 0 on an interval
  double lambda = 0.0;
};

/// Dirichlet sine eigenbasis. Eigenfunctions are sampled through a shared
/// sine table (1-D) or per-axis sample matrices (2-D) instead of a dense
/// K x nodes array.
class EigenBasis {
 public:
  EigenBasis() = default;

  const DomainSpec& domain() const { return domain_; }
  int size() const { return int(modes_.size()); }
  const std::vector<Mode>& modes() const { return modes_; }
  const Eigen::VectorXd& lambdas() const { return lambdas_; }
  int max_kx() const { return max_kx_; }
  int max_ky() const { return max_ky_; }

  /// Node values of sum_k a_k phi_k.
  Eigen::VectorXd synthesize(const Eigen::VectorXd& a) const;
  /// Trapezoid projections <f, phi_k>_h.
  Eigen::VectorXd analyze(const Eigen::VectorXd& f) const;
  /// phi_k(x) at an arbitrary point.
  double phi(int k, const Eigen::VectorXd& x) const;
  /// sum_k a_k phi_k(x) at an arbitrary point.
  double evaluate(const Eigen::VectorXd& a, const Eigen::VectorXd& x) const;
  /// phi_k sampled on the grid.
  Eigen::VectorXd sample(int k) const;

 private:
  friend EigenBasis build_basis(const DomainSpec& d, int K);

  Eigen::VectorXd synthesize_1d(const Eigen::VectorXd& a) const;
  Eigen::VectorXd analyze_1d(const Eigen::VectorXd& f) const;

  DomainSpec domain_;
  std::vector<Mode> modes_;
  Eigen::VectorXd lambdas_;
  int max_kx_ = 0, max_ky_ = 0;
  Eigen::MatrixXd sx_, sy_;    // 2-D axis samples, nodes x max_k
};

EigenBasis build_basis(const DomainSpec& d, int K);

struct SpectralField {
  std::shared_ptr<const EigenBasis> basis;
  Eigen::VectorXd coeffs;
};

SpectralField apply_As(const SpectralField& u, double s);
SpectralField solve_As(const SpectralField& rhs, double s);
GridField synthesize(const SpectralField& u);
SpectralField analyze(std::shared_ptr<const EigenBasis> basis, const GridField& f);

struct GreenValue {
  double value = 0.0;
  double tail_estimate = 0.0;  // |G_K - G_{K/2}|
};

/// Tapered eigen-sum weights for one (basis, s) pair. Keeps a reference to the basis.
class GreenSeries {
 public:
  GreenSeries(const EigenBasis& b, double s);
  /// Throws DiagonalEvaluation for x = y.
  GreenValue operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  const EigenBasis& basis() const { return *b_; }
  double s() const { return s_; }

 private:
  const EigenBasis* b_;
  double s_;
  Eigen::VectorXd full_, half_;
};

GreenValue green(const EigenBasis& b, double s, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& y);

struct RobinOptions {
  double delta0 = 0.0;  // 0: automatic
  double tolerance = 1e-2;
};

struct RobinValue {
  double value = 0.0;
  double tail_estimate = 0.0;
  double spread = 0.0;  // difference of the two first-level Richardson values
};

// Smallest automatic Richardson offset the truncated series resolves.
double robin_min_offset(const EigenBasis& b);

/// phi(x) = H(x,x) by Richardson extrapolation of gamma d^{-(n-2s)} - G(x, x +- d e_i).
RobinValue robin(const EigenBasis& b, double s, const Eigen::VectorXd& x,
                 const RobinOptions& opts = {});
RobinValue robin(const GreenSeries& g, const Eigen::VectorXd& x, const RobinOptions& opts = {});

/// Interior nodes of `grid` where the centred difference of phi changes
/// sign along every axis, ordered by |gradient|.
std::vector<Eigen::VectorXd> robin_critical_points(const EigenBasis& b, double s,
                                                   const DomainSpec& grid,
                                                   const RobinOptions& opts = {});
std::vector<Eigen::VectorXd> critical_points(const GridField& phi);

}  // namespace fhl

#endif
