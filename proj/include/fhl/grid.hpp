#ifndef FHL_GRID_HPP
#define FHL_GRID_HPP

#include <Eigen/Dense>
#include <string>

namespace fhl {

/// Uniform vertex grid on an interval or rectangle. N is the number of
/// cells per axis, so each axis carries N+1 nodes including the boundary.
struct DomainSpec {
  enum class Kind { Interval, Rectangle };

  Kind kind = Kind::Interval;
  double ax = 0.0, bx = 1.0, ay = 0.0, by = 1.0;
  int N = 16;

  static DomainSpec interval(double a, double b, int N);
  static DomainSpec rectangle(double ax, double bx, double ay, double by, int N);

  int dim() const { return kind == Kind::Interval ? 1 : 2; }
  int nodes_per_axis() const { return N + 1; }
  Eigen::Index size() const;
  double lx() const { return bx - ax; }
  double ly() const { return by - ay; }
  double hx() const { return lx() / N; }
  double hy() const { return ly() / N; }
  double x(int i) const { return ax + lx() * i / N; }
  double y(int j) const { return ay + ly() * j / N; }
  Eigen::Index index(int i, int j = 0) const { return i + Eigen::Index(N + 1) * j; }
  Eigen::VectorXd point(Eigen::Index idx) const;
  Eigen::VectorXd center() const;
  double dist_to_boundary(const Eigen::VectorXd& p) const;
  bool is_boundary_node(Eigen::Index idx) const;
  double inradius() const;
  std::string describe() const;

  bool operator==(const DomainSpec&) const = default;
};

struct GridField {
  DomainSpec domain;
  Eigen::VectorXd values;

  GridField() = default;
  GridField(DomainSpec d, Eigen::VectorXd v);
  double h() const { return domain.hx(); }
};

/// Trapezoid (tensor trapezoid in 2-D) weights for the vertex grid.
Eigen::VectorXd trapezoid_weights(const DomainSpec& d);

/// Linear / bilinear interpolation; zero outside the domain. Exact node
/// values are returned when p sits on a node.
double interpolate(const GridField& f, const Eigen::VectorXd& p);

/// Index of the largest node value (first one on ties).
Eigen::Index argmax_index(const GridField& f);

}  // namespace fhl

#endif
