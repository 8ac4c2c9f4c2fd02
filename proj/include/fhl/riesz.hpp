#ifndef FHL_RIESZ_HPP
#define FHL_RIESZ_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>
#include <functional>
#include <optional>
#include <string>

#include "fhl/grid.hpp"

namespace fhl {

/// Product-integration weights for f -> (|.|^{-mu} * f) on a DomainSpec.
///
/// 1-D: f is the piecewise-linear interpolant of the node values; the
/// weights depend only on the node offset, so they are stored as three
/// Toeplitz vectors indexed by offset + N.
/// 2-D: f is piecewise constant on the dual cells; full cells use an offset
/// table, clipped boundary cells are integrated on demand.
class RieszWeights {
 public:
  RieszWeights() = default;

  const DomainSpec& domain() const { return domain_; }
  double mu() const { return mu_; }

  /// (K f) at every node.
  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;

  /// 1-D only: (K c) at every node for c piecewise constant on cells
  /// (c has N entries).
  Eigen::VectorXd apply_cells(const Eigen::VectorXd& c) const;

 private:
  friend RieszWeights build_weights(const DomainSpec& d, double mu);
  friend void save_weights(const RieszWeights& w, const std::string& path);
  friend std::optional<RieszWeights> load_weights(const std::string& path,
                                                  const DomainSpec& d, double mu);

  Eigen::VectorXd apply_1d(const Eigen::VectorXd& f) const;
  void prepare_fft();
  Eigen::VectorXd apply_2d(const Eigen::VectorXd& f) const;

  DomainSpec domain_;
  double mu_ = 0.0;
  double scale_ = 1.0;   // h^{1-mu} (1-D)
  Eigen::VectorXd hat_;    // node weight for interior nodes
  Eigen::VectorXd left_;   // cell right of the node only (node 0)
  Eigen::VectorXd right_;  // cell left of the node only (node N)
  Eigen::VectorXd cell_;   // whole-cell moment
  std::vector<std::complex<double>> hat_fft_;  // circulant embedding of hat_, large 1-D grids
  Eigen::VectorXd table_;  // 2-D offset table, (2N+1)^2, x offset fastest
};

RieszWeights build_weights(const DomainSpec& d, double mu);

GridField convolve(const RieszWeights& w, const GridField& f);

/// sigma_n int_0^inf r^{n-1-mu} f(r) dr.
double riesz_at_center(const std::function<double(double)>& f, int n, double mu);

/// int over [x0,x1]x[y0,y1] of |z|^{-mu} dz.
double rectangle_riesz_integral(double x0, double x1, double y0, double y1, double mu);

void save_weights(const RieszWeights& w, const std::string& path);
std::optional<RieszWeights> load_weights(const std::string& path, const DomainSpec& d,
                                         double mu);

/// Loads from (or stores into) cache_dir; an empty cache_dir disables caching.
RieszWeights cached_weights(const DomainSpec& d, double mu, const std::string& cache_dir);

/// Cache directory: $FHL_CACHE_DIR if set, else the given fallback.
std::string cache_directory(const std::string& fallback);

}  // namespace fhl

#endif
