#include "fhl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "fhl/constants.hpp"
#include "fhl/error.hpp"

namespace fhl {

namespace {

using std::numbers::pi;

// C-infinity step: 1 on [0,1/2], 0 at t >= 1.
double taper(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double u = 2.0 * (1.0 - t);  // 1 -> 0 across the band
  const double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

}  // namespace

EigenBasis build_basis(const DomainSpec& d, int K) {
  if (K < 1) fail(ErrorCode::OutOfRange, "mode count must be positive");
  EigenBasis b;
  b.domain_ = d;
  const int N = d.N;
  if (d.dim() == 1) {
    if (K > N / 2) fail(ErrorCode::UnderResolved, "K exceeds N/2 resolvable modes");
    b.modes_.resize(K);
    for (int k = 1; k <= K; ++k) b.modes_[k - 1] = {k, 0, std::pow(k * pi / d.lx(), 2)};
    b.max_kx_ = K;
  } else {
    const int half = N / 2;
    if (K > half * half) fail(ErrorCode::UnderResolved, "K exceeds (N/2)^2 resolvable modes");
    std::vector<Mode> all;
    all.reserve(std::size_t(half) * half);
    for (int kx = 1; kx <= half; ++kx)
      for (int ky = 1; ky <= half; ++ky)
        all.push_back({kx, ky, std::pow(kx * pi / d.lx(), 2) + std::pow(ky * pi / d.ly(), 2)});
    std::stable_sort(all.begin(), all.end(), [](const Mode& a, const Mode& c) {
      if (a.lambda != c.lambda) return a.lambda < c.lambda;
      return a.kx != c.kx ? a.kx < c.kx : a.ky < c.ky;
    });
    all.resize(K);
    // The kept modes must be every mode below lambda_K, not a square clipped by the grid.
    const double edge = std::min(std::pow((half + 1) * pi / d.lx(), 2), std::pow((half + 1) * pi / d.ly(), 2));
    if (!(all.back().lambda < edge)) fail(ErrorCode::UnderResolved, "grid clips the lowest K modes; raise N");
    b.modes_ = std::move(all);
    for (const Mode& m : b.modes_) {
      b.max_kx_ = std::max(b.max_kx_, m.kx);
      b.max_ky_ = std::max(b.max_ky_, m.ky);
    }
    const int nodes = N + 1;
    b.sx_.resize(nodes, b.max_kx_);
    b.sy_.resize(nodes, b.max_ky_);
    const double cx = std::sqrt(2.0 / d.lx()), cy = std::sqrt(2.0 / d.ly());
    for (int i = 0; i < nodes; ++i) {
      for (int k = 1; k <= b.max_kx_; ++k) b.sx_(i, k - 1) = cx * std::sin(pi * double(k) * i / N);
      for (int k = 1; k <= b.max_ky_; ++k) b.sy_(i, k - 1) = cy * std::sin(pi * double(k) * i / N);
    }
  }
  b.lambdas_.resize(K);
  for (int k = 0; k < K; ++k) b.lambdas_(k) = b.modes_[k].lambda;
  return b;
}

Eigen::VectorXd EigenBasis::synthesize(const Eigen::VectorXd& a) const {
  if (a.size() != size()) fail(ErrorCode::GridMismatch, "coefficient count mismatch");
  if (domain_.dim() == 1) return synthesize_1d(a);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(max_kx_, max_ky_);
  for (int k = 0; k < size(); ++k) c(modes_[k].kx - 1, modes_[k].ky - 1) = a(k);
  const Eigen::MatrixXd u = sx_ * c * sy_.transpose();  // (x node, y node)
  return Eigen::Map<const Eigen::VectorXd>(u.data(), u.size());
}

Eigen::VectorXd EigenBasis::analyze(const Eigen::VectorXd& f) const {
  if (f.size() != domain_.size()) fail(ErrorCode::GridMismatch, "field/grid size mismatch");
  if (domain_.dim() == 1) return analyze_1d(f);
  const int nodes = domain_.N + 1;
  Eigen::Map<const Eigen::MatrixXd> F(f.data(), nodes, nodes);
  Eigen::VectorXd wx = Eigen::VectorXd::Constant(nodes, domain_.hx());
  Eigen::VectorXd wy = Eigen::VectorXd::Constant(nodes, domain_.hy());
  wx(0) = wx(nodes - 1) = 0.5 * domain_.hx();
  wy(0) = wy(nodes - 1) = 0.5 * domain_.hy();
  const Eigen::MatrixXd c =
      sx_.transpose() * wx.asDiagonal() * F * wy.asDiagonal() * sy_;
  Eigen::VectorXd out(size());
  for (int k = 0; k < size(); ++k) out(k) = c(modes_[k].kx - 1, modes_[k].ky - 1);
  return out;
}

namespace {

// y_j = sum_{k=1}^{N-1} x_k sin(pi k j / N), j = 0..N, through a length-2N FFT
// of the odd extension. x holds x_1.. (shorter input is zero padded).
Eigen::VectorXd dst1(const Eigen::VectorXd& x, int N) {
  std::vector<double> ext(2 * std::size_t(N), 0.0);
  const int m = std::min<int>(int(x.size()), N - 1);
  for (int k = 1; k <= m; ++k) {
    ext[k] = x(k - 1);
    ext[2 * N - k] = -x(k - 1);
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, ext);
  Eigen::VectorXd y(N + 1);
  for (int j = 0; j <= N; ++j) y(j) = -0.5 * spec[j].imag();
  y(0) = 0.0;
  y(N) = 0.0;
  return y;
}

}  // namespace

Eigen::VectorXd EigenBasis::synthesize_1d(const Eigen::VectorXd& a) const {
  return std::sqrt(2.0 / domain_.lx()) * dst1(a, domain_.N);
}

// Trapezoid rule; the end nodes carry sin 0 = 0.
Eigen::VectorXd EigenBasis::analyze_1d(const Eigen::VectorXd& f) const {
  const int N = domain_.N;
  const Eigen::VectorXd y = dst1(f.segment(1, N - 1), N);
  return std::sqrt(2.0 / domain_.lx()) * domain_.hx() * y.segment(1, size());
}

double EigenBasis::phi(int k, const Eigen::VectorXd& x) const {
  const Mode& m = modes_.at(k);
  double v = std::sqrt(2.0 / domain_.lx()) * std::sin(m.kx * pi * (x(0) - domain_.ax) / domain_.lx());
  if (domain_.dim() == 2)
    v *= std::sqrt(2.0 / domain_.ly()) * std::sin(m.ky * pi * (x(1) - domain_.ay) / domain_.ly());
  return v;
}

namespace {

// sqrt(2/L) sin(k pi (t-a)/L) for k = 1..kmax.
Eigen::VectorXd axis_values(double t, double a, double L, int kmax) {
  Eigen::VectorXd v(kmax);
  const double c = std::sqrt(2.0 / L), th = pi * (t - a) / L;
  for (int k = 1; k <= kmax; ++k) v(k - 1) = c * std::sin(k * th);
  return v;
}

}  // namespace

double EigenBasis::evaluate(const Eigen::VectorXd& a, const Eigen::VectorXd& x) const {
  const Eigen::VectorXd vx = axis_values(x(0), domain_.ax, domain_.lx(), max_kx_);
  if (domain_.dim() == 1) return vx.head(size()).dot(a);
  const Eigen::VectorXd vy = axis_values(x(1), domain_.ay, domain_.ly(), max_ky_);
  double sum = 0.0;
  for (int k = 0; k < size(); ++k) sum += a(k) * vx(modes_[k].kx - 1) * vy(modes_[k].ky - 1);
  return sum;
}

Eigen::VectorXd EigenBasis::sample(int k) const {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(size());
  a(k) = 1.0;
  return synthesize(a);
}

SpectralField apply_As(const SpectralField& u, double s) {
  return {u.basis, (u.coeffs.array() * u.basis->lambdas().array().pow(s)).matrix()};
}

SpectralField solve_As(const SpectralField& rhs, double s) {
  return {rhs.basis, (rhs.coeffs.array() / rhs.basis->lambdas().array().pow(s)).matrix()};
}

GridField synthesize(const SpectralField& u) {
  return GridField(u.basis->domain(), u.basis->synthesize(u.coeffs));
}

SpectralField analyze(std::shared_ptr<const EigenBasis> basis, const GridField& f) {
  if (!(f.domain == basis->domain())) fail(ErrorCode::GridMismatch, "field is not on the basis grid");
  Eigen::VectorXd c = basis->analyze(f.values);
  return {std::move(basis), std::move(c)};
}

GreenSeries::GreenSeries(const EigenBasis& b, double s) : b_(&b), s_(s) {
  const int K = b.size();
  const double top = std::sqrt(b.lambdas()(K - 1));
  const double top_half = std::sqrt(b.lambdas()((K + 1) / 2 - 1));
  full_.resize(K);
  half_.resize(K);
  for (int k = 0; k < K; ++k) {
    const double lam = b.modes()[k].lambda, w = std::sqrt(lam), c = std::pow(lam, -s);
    full_(k) = taper(w / top) * c;
    half_(k) = taper(w / top_half) * c;
  }
}

GreenValue GreenSeries::operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  if ((x - y).norm() == 0.0) fail(ErrorCode::DiagonalEvaluation, "green at x = y; use robin");
  const EigenBasis& b = *b_;
  const DomainSpec& d = b.domain();
  const Eigen::VectorXd px = axis_values(x(0), d.ax, d.lx(), b.max_kx()).cwiseProduct(
      axis_values(y(0), d.ax, d.lx(), b.max_kx()));
  double full = 0.0, half = 0.0;
  if (d.dim() == 1) {
    full = px.head(b.size()).dot(full_);
    half = px.head(b.size()).dot(half_);
  } else {
    const Eigen::VectorXd py = axis_values(x(1), d.ay, d.ly(), b.max_ky()).cwiseProduct(
        axis_values(y(1), d.ay, d.ly(), b.max_ky()));
    for (int k = 0; k < b.size(); ++k) {
      const Mode& m = b.modes()[k];
      const double t = px(m.kx - 1) * py(m.ky - 1);
      full += full_(k) * t;
      half += half_(k) * t;
    }
  }
  return {full, std::abs(full - half)};
}

GreenValue green(const EigenBasis& b, double s, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& y) {
  return GreenSeries(b, s)(x, y);
}

double robin_min_offset(const EigenBasis& b) {
  // delta/4 spans 2 (1-D) or 20 (2-D) shortest wavelengths of the series.
  const double waves = b.domain().dim() == 1 ? 2.0 : 20.0;
  return 4.0 * waves * 2.0 * pi / std::sqrt(b.lambdas()(b.size() - 1));
}

RobinValue robin(const EigenBasis& b, double s, const Eigen::VectorXd& x, const RobinOptions& opts) {
  return robin(GreenSeries(b, s), x, opts);
}

RobinValue robin(const GreenSeries& series, const Eigen::VectorXd& x, const RobinOptions& opts) {
  const EigenBasis& b = series.basis();
  const double s = series.s();
  const DomainSpec& d = b.domain();
  const int n = d.dim();
  if (!(n - 2.0 * s > 0.0 && n - 2.0 * s < n))
    fail(ErrorCode::OutOfRange, "robin needs 0 < n - 2s < n");
  const double dist = d.dist_to_boundary(x);
  if (!(dist > 0.0)) fail(ErrorCode::Precondition, "robin needs an interior point");
  const double diam = n == 1 ? d.lx() : std::hypot(d.lx(), d.ly());
  const double floor = robin_min_offset(b);
  double delta = opts.delta0 > 0.0 ? opts.delta0 : std::max(std::min(0.05 * diam, 0.25 * dist), floor);
  if (!(delta < dist)) {
    if (opts.delta0 > 0.0) fail(ErrorCode::Precondition, "robin offset leaves the domain");
    fail(ErrorCode::UnderResolved, "point is closer to the boundary than the series resolves");
  }

  Params p;
  p.n = n;
  p.s = s;
  const double gam = closed_form(ConstantKind::Gamma_ns, p);
  double tail = 0.0;
  auto regular = [&](double h) {
    double g = 0.0;
    for (int axis = 0; axis < n; ++axis)
      for (int sgn : {-1, 1}) {
        Eigen::VectorXd y = x;
        y(axis) += sgn * h;
        const GreenValue gv = series(x, y);
        g += gv.value;
        tail = std::max(tail, gv.tail_estimate);
      }
    g /= 2.0 * n;
    return gam * std::pow(h, -(n - 2.0 * s)) - g;
  };
  const double r0 = regular(delta), r1 = regular(0.5 * delta), r2 = regular(0.25 * delta);
  const double e1 = (4.0 * r1 - r0) / 3.0, e2 = (4.0 * r2 - r1) / 3.0;
  RobinValue out;
  out.value = (16.0 * e2 - e1) / 15.0;
  out.spread = std::abs(e2 - e1);
  out.tail_estimate = tail;
  if (!std::isfinite(out.value) || out.spread > opts.tolerance * std::max(1.0, std::abs(out.value)))
    fail(ErrorCode::ExtrapolationDiverged, "Richardson estimates are not Cauchy");
  return out;
}

std::vector<Eigen::VectorXd> critical_points(const GridField& phi) {
  const DomainSpec& d = phi.domain;
  const int N = d.N, dim = d.dim();
  // Centred gradients at nodes 2..N-2 (neighbours must be interior samples).
  auto at = [&](int i, int j) { return phi.values(d.index(i, j)); };
  struct Cand {
    Eigen::Index idx;
    double g;
  };
  auto grad = [&](int i, int j, int axis) {
    if (axis == 0) return (at(i + 1, j) - at(i - 1, j)) / (2.0 * d.hx());
    return (at(i, j + 1) - at(i, j - 1)) / (2.0 * d.hy());
  };
  auto flips = [&](int i, int j, int axis) {
    // sign change of the axis gradient between this node and a neighbour
    const double g0 = grad(i, j, axis);
    if (g0 == 0.0) return true;
    for (int off : {-1, 1}) {
      const int a = axis == 0 ? i + off : i, c = axis == 0 ? j : j + off;
      const int lim = axis == 0 ? a : c;
      if (lim < 2 || lim > N - 2) continue;
      if (g0 * grad(a, c, axis) <= 0.0) return true;
    }
    return false;
  };
  std::vector<Cand> cands;
  const int jlo = dim == 1 ? 0 : 2, jhi = dim == 1 ? 0 : N - 2;
  for (int j = jlo; j <= jhi; ++j)
    for (int i = 2; i <= N - 2; ++i) {
      bool ok = flips(i, j, 0);
      double g2 = std::pow(grad(i, j, 0), 2);
      if (dim == 2) {
        ok = ok && flips(i, j, 1);
        g2 += std::pow(grad(i, j, 1), 2);
      }
      if (ok) cands.push_back({d.index(i, j), std::sqrt(g2)});
    }
  if (cands.empty()) fail(ErrorCode::NoCriticalPoint, "phi has no sign change of its gradient");
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.g < b.g; });
  std::vector<Eigen::VectorXd> out;
  for (const Cand& c : cands) out.push_back(d.point(c.idx));
  return out;
}

std::vector<Eigen::VectorXd> robin_critical_points(const EigenBasis& b, double s,
                                                   const DomainSpec& grid, const RobinOptions& opts) {
  const GreenSeries series(b, s);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    if (grid.is_boundary_node(k)) continue;
    values(k) = robin(series, grid.point(k), opts).value;
  }
  return critical_points(GridField(grid, values));
}

}  // namespace fhl
