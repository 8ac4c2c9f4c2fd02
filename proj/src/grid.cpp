#include "fhl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fhl/error.hpp"

namespace fhl {

namespace {

void check_axis(double a, double b) {
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b))
    fail(ErrorCode::OutOfRange, "domain requires b > a on every axis");
}

}  // namespace

DomainSpec DomainSpec::interval(double a, double b, int N) {
  check_axis(a, b);
  if (N < 16) fail(ErrorCode::OutOfRange, "grid resolution N must be >= 16");
  DomainSpec d;
  d.kind = Kind::Interval;
  d.ax = a;
  d.bx = b;
  d.ay = 0.0;
  d.by = 0.0;
  d.N = N;
  return d;
}

DomainSpec DomainSpec::rectangle(double ax, double bx, double ay, double by, int N) {
  check_axis(ax, bx);
  check_axis(ay, by);
  if (N < 16) fail(ErrorCode::OutOfRange, "grid resolution N must be >= 16");
  DomainSpec d;
  d.kind = Kind::Rectangle;
  d.ax = ax;
  d.bx = bx;
  d.ay = ay;
  d.by = by;
  d.N = N;
  return d;
}

Eigen::Index DomainSpec::size() const {
  const Eigen::Index m = N + 1;
  return dim() == 1 ? m : m * m;
}

Eigen::VectorXd DomainSpec::point(Eigen::Index idx) const {
  const int m = N + 1;
  if (dim() == 1) return Eigen::VectorXd::Constant(1, x(int(idx)));
  Eigen::VectorXd p(2);
  p << x(int(idx % m)), y(int(idx / m));
  return p;
}

Eigen::VectorXd DomainSpec::center() const {
  if (dim() == 1) return Eigen::VectorXd::Constant(1, 0.5 * (ax + bx));
  Eigen::VectorXd p(2);
  p << 0.5 * (ax + bx), 0.5 * (ay + by);
  return p;
}

double DomainSpec::dist_to_boundary(const Eigen::VectorXd& p) const {
  double d = std::min(p(0) - ax, bx - p(0));
  if (dim() == 2) d = std::min({d, p(1) - ay, by - p(1)});
  return d;
}

bool DomainSpec::is_boundary_node(Eigen::Index idx) const {
  const int m = N + 1;
  const int i = int(idx % m);
  if (i == 0 || i == N) return true;
  if (dim() == 1) return false;
  const int j = int(idx / m);
  return j == 0 || j == N;
}

double DomainSpec::inradius() const {
  return dim() == 1 ? 0.5 * lx() : 0.5 * std::min(lx(), ly());
}

std::string DomainSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (dim() == 1)
    os << "interval(" << ax << "," << bx << ";N=" << N << ")";
  else
    os << "rectangle(" << ax << "," << bx << "," << ay << "," << by << ";N=" << N << ")";
  return os.str();
}

GridField::GridField(DomainSpec d, Eigen::VectorXd v) : domain(d), values(std::move(v)) {
  if (values.size() != domain.size())
    fail(ErrorCode::GridMismatch, "field length does not match the grid");
}

Eigen::VectorXd trapezoid_weights(const DomainSpec& d) {
  const int m = d.N + 1;
  Eigen::VectorXd wx = Eigen::VectorXd::Constant(m, d.hx());
  wx(0) = wx(m - 1) = 0.5 * d.hx();
  if (d.dim() == 1) return wx;
  Eigen::VectorXd wy = Eigen::VectorXd::Constant(m, d.hy());
  wy(0) = wy(m - 1) = 0.5 * d.hy();
  Eigen::VectorXd w(Eigen::Index(m) * m);
  for (int j = 0; j < m; ++j) w.segment(Eigen::Index(j) * m, m) = wx * wy(j);
  return w;
}

namespace {

// Splits a coordinate into a cell index and a fractional offset; snaps to a
// node when within rounding distance.
bool locate(double t, double a, double h, int N, int& cell, double& frac) {
  const double xi = (t - a) / h;
  if (xi < -1e-9 || xi > N + 1e-9) return false;
  const double r = std::round(xi);
  if (std::abs(xi - r) < 1e-9) {
    cell = std::min(int(r), N - 1);
    frac = double(int(r) - cell);
    return true;
  }
  cell = std::clamp(int(std::floor(xi)), 0, N - 1);
  frac = xi - cell;
  return true;
}

}  // namespace

double interpolate(const GridField& f, const Eigen::VectorXd& p) {
  const DomainSpec& d = f.domain;
  int i, j;
  double tx, ty;
  if (!locate(p(0), d.ax, d.hx(), d.N, i, tx)) return 0.0;
  if (d.dim() == 1) {
    if (tx == 0.0) return f.values(i);
    if (tx == 1.0) return f.values(i + 1);
    return (1.0 - tx) * f.values(i) + tx * f.values(i + 1);
  }
  if (!locate(p(1), d.ay, d.hy(), d.N, j, ty)) return 0.0;
  auto at = [&](int a, int b) { return f.values(d.index(a, b)); };
  if ((tx == 0.0 || tx == 1.0) && (ty == 0.0 || ty == 1.0)) return at(i + int(tx), j + int(ty));
  return (1.0 - tx) * (1.0 - ty) * at(i, j) + tx * (1.0 - ty) * at(i + 1, j) +
         (1.0 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
}

Eigen::Index argmax_index(const GridField& f) {
  Eigen::Index idx = 0;
  f.values.maxCoeff(&idx);
  return idx;
}

}  // namespace fhl
