#include "fhl/diagnostics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "fhl/bubbles.hpp"
#include "fhl/constants.hpp"
#include "fhl/error.hpp"

namespace fhl {

double default_strip(const DomainSpec& d) { return 10.0 * std::max(d.hx(), d.dim() == 2 ? d.hy() : 0.0); }

std::pair<double, double> strip_and_interior(const GridField& u, double r) {
  const DomainSpec& d = u.domain;
  const Eigen::VectorXd wq = trapezoid_weights(d);
  double strip = 0.0, mass = 0.0;
  for (Eigen::Index k = 0; k < u.values.size(); ++k) {
    const double dist = d.dist_to_boundary(d.point(k));
    if (dist < r)
      strip = std::max(strip, std::abs(u.values(k)));
    else
      mass += wq(k) * std::abs(u.values(k));
  }
  return {strip, mass};
}

double rate_lhs_subcritical(const Params& p, double sup_norm) {
  const double d = p.n - 2.0 * p.s;
  return d * d / (2.0 * (p.n + 2.0 * p.s - p.eps * d)) * p.eps * sup_norm * sup_norm;
}

double rate_lhs_bn(const Params& p, double sup_norm) {
  return p.eps * std::pow(sup_norm, (2.0 * p.n - 8.0 * p.s) / (p.n - 2.0 * p.s));
}

double rate_rhs_subcritical(const Params& p, double robin) {
  const double d = p.n - 2.0 * p.s;
  const double b = closed_form(ConstantKind::b_ns, p);
  const double a = alpha_ns(p.n, p.s);
  return d * d * closed_form(ConstantKind::Gamma_ns, p) * b * b * closed_form(ConstantKind::M_ns, p) *
         std::abs(robin) /
         (2.0 * closed_form(ConstantKind::Kappa_s, p) * a * a * beta_tilde(p.n, p.s, d) *
          closed_form(ConstantKind::B_ns, p));
}

double rate_rhs_bn(const Params& p, double robin) {
  const double d = p.n - 2.0 * p.s;
  const double dn = closed_form(ConstantKind::d_ns, p);
  return d * d * closed_form(ConstantKind::Gamma_ns, p) * dn * dn * closed_form(ConstantKind::M_ns, p) *
         std::abs(robin) /
         (2.0 * p.s * closed_form(ConstantKind::Kappa_s, p) * closed_form(ConstantKind::F_ns, p));
}

void derive_entry(ContinuationEntry& e, const ContinuationReport& report) {
  const SolutionRecord& rec = e.record;
  const Params& p = rec.params;
  e.mu_pow_eps = std::pow(rec.mu_eps, p.eps);
  e.rate_lhs = p.regime == Regime::BrezisNirenberg ? rate_lhs_bn(p, rec.sup_norm)
                                                   : rate_lhs_subcritical(p, rec.sup_norm);
  const double strip = report.strip_r > 0.0 ? report.strip_r : default_strip(rec.samples.domain);
  std::tie(e.boundary_sup, e.interior_l1) = strip_and_interior(rec.samples, strip);
  e.profile_dist = std::numeric_limits<double>::quiet_NaN();
  if (rec.sup_norm > 0.0 && rec.samples.domain.dist_to_boundary(rec.argmax) > 0.0) {
    const GridField v = rescale(rec.samples, rec.sup_norm, rec.argmax, p, report.window + 1.0);
    e.profile_dist = profile_distance(v, p, report.window);
  }
}

ContinuationReport continuation(const Params& base, const DomainSpec& domain,
                                const std::vector<double>& eps_list, const ContinuationOptions& opts,
                                const RieszWeights* weights) {
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) fail(ErrorCode::Precondition, "eps values must be positive");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1]))
      fail(ErrorCode::Precondition, "eps list must be strictly decreasing");
  }
  ContinuationReport report;
  report.base = base;
  report.domain = domain;
  report.modes = opts.modes;
  report.window = opts.window;
  report.strip_r = opts.strip_r > 0.0 ? opts.strip_r : default_strip(domain);
  if (eps_list.empty()) return report;

  auto basis = std::make_shared<const EigenBasis>(build_basis(domain, opts.modes));
  std::optional<RieszWeights> own;
  if (!weights) {
    own = build_weights(domain, base.mu);
    weights = &*own;
  }
  SolveOptions so = opts.solve;
  for (double eps : eps_list) {
    const Params p = make_params(base.n, base.s, base.mu, eps, base.regime);
    ContinuationEntry e;
    e.eps = eps;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.record = solve(p, basis, *weights, so);
      e.status = e.record.status;
    } catch (const Error& err) {
      if (!is_numerical(err.code())) throw;
      e.status = to_string(err.code());
      e.record.params = p;
    }
    e.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (e.record.field.basis) {
      derive_entry(e, report);
      if (e.record.converged) {
        so.seed.kind = SeedKind::WarmStart;
        so.seed.coeffs = e.record.field.coeffs;
      }
      if (opts.on_record) opts.on_record(e.record);
    }
    report.records.push_back(std::move(e));
  }
  return report;
}

SequenceCheck mu_power_check(const ContinuationReport& r) {
  if (r.records.empty()) fail(ErrorCode::Precondition, "empty report");
  SequenceCheck out;
  for (const auto& e : r.records) out.values.emplace_back(e.eps, std::pow(e.record.mu_eps, e.eps));
  const std::size_t m = out.values.size();
  out.flag = true;
  const std::size_t from = m >= 3 ? m - 3 : 0;
  for (std::size_t k = from + 1; k < m; ++k)
    if (!(std::abs(out.values[k].second - 1.0) < std::abs(out.values[k - 1].second - 1.0)))
      out.flag = false;
  return out;
}

SequenceCheck eps_bound_check(const ContinuationReport& r) {
  if (r.records.empty()) fail(ErrorCode::Precondition, "empty report");
  SequenceCheck out;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& e : r.records) {
    const Params& p = e.record.params;
    const double ex = 2.0 + (4.0 * p.s - (p.n - 2.0 * p.s) * e.eps) * e.eps / p.s;
    const double v = e.eps * std::pow(e.record.mu_eps, ex);
    out.values.emplace_back(e.eps, v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out.flag = lo > 0.0 && hi / lo < 100.0;
  return out;
}

double relative_spread(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  return (*hi - *lo) / std::abs(mean);
}

namespace {

RateLaw rate_law(const ContinuationReport& r, std::optional<double> robin, bool bn) {
  if (!robin) fail(ErrorCode::MissingRobin, "rate law needs the Robin value at the blow-up point");
  RateLaw out;
  std::vector<double> tail;
  for (const auto& e : r.records) {
    const Params& p = e.record.params;
    out.lhs.emplace_back(e.eps, bn ? rate_lhs_bn(p, e.record.sup_norm)
                                   : rate_lhs_subcritical(p, e.record.sup_norm));
  }
  for (std::size_t k = out.lhs.size() >= 3 ? out.lhs.size() - 3 : 0; k < out.lhs.size(); ++k)
    tail.push_back(out.lhs[k].second);
  out.spread_last3 = relative_spread(tail);
  Params p = r.base;
  out.rhs = bn ? rate_rhs_bn(p, *robin) : rate_rhs_subcritical(p, *robin);
  return out;
}

}  // namespace

RateLaw rate_law_subcritical(const ContinuationReport& r, std::optional<double> robin_at_x0) {
  if (r.base.regime != Regime::SubcriticalHartree)
    fail(ErrorCode::Precondition, "rate_law_subcritical needs the subcritical regime");
  return rate_law(r, robin_at_x0, false);
}

RateLaw rate_law_bn(const ContinuationReport& r, std::optional<double> robin_at_x0) {
  if (r.base.regime != Regime::BrezisNirenberg)
    fail(ErrorCode::Precondition, "rate_law_bn needs the Brezis-Nirenberg regime");
  return rate_law(r, robin_at_x0, true);
}

EigenBasis green_basis(const DomainSpec& d, int K) {
  if (d.dim() == 1) return build_basis(DomainSpec::interval(d.ax, d.bx, std::max(16, 2 * K)), K);
  // Weyl: lambda_K ~ 4 pi K / area, so the longer side needs about sqrt(4 K r / pi) modes, r the aspect ratio.
  const double r = std::max(d.lx() / d.ly(), d.ly() / d.lx());
  const int N = std::max(16, 2 * int(std::ceil(1.15 * std::sqrt(4.0 * K * r / std::numbers::pi))) + 2);
  return build_basis(DomainSpec::rectangle(d.ax, d.bx, d.ay, d.by, N), K);
}

std::pair<Eigen::VectorXd, double> locate_robin_critical_point(const EigenBasis& gb, double s,
                                                               const Eigen::VectorXd& guess) {
  const DomainSpec& d = gb.domain();
  const bool one = d.dim() == 1;
  // Inset keeps every node farther from the boundary than the smallest resolvable offset.
  const double off = 1.2 * robin_min_offset(gb);
  const double mx = std::max(0.05 * d.lx(), off), my = one ? 0.0 : std::max(0.05 * d.ly(), off);
  if (2.0 * mx >= d.lx() || (!one && 2.0 * my >= d.ly()))
    fail(ErrorCode::UnderResolved, "Green series too short to locate the Robin critical point");
  auto box = [&](const Eigen::VectorXd& c, double wx, double wy, int cells) {
    const double x0 = std::max(d.ax + mx, c(0) - wx), x1 = std::min(d.bx - mx, c(0) + wx);
    if (one) return DomainSpec::interval(x0, x1, cells);
    const double y0 = std::max(d.ay + my, c(1) - wy), y1 = std::min(d.by - my, c(1) + wy);
    return DomainSpec::rectangle(x0, x1, y0, y1, cells);
  };
  auto nearest = [&](const std::vector<Eigen::VectorXd>& pts, const Eigen::VectorXd& g) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < pts.size(); ++k)
      if ((pts[k] - g).norm() < (pts[best] - g).norm()) best = k;
    return pts[best];
  };
  DomainSpec grid = box(d.center(), d.lx(), one ? 0.0 : d.ly(), one ? 48 : 24);
  Eigen::VectorXd pt = nearest(robin_critical_points(gb, s, grid), guess);
  for (int zoom = 0; zoom < 2; ++zoom) {
    grid = box(pt, 2.0 * grid.hx(), one ? 0.0 : 2.0 * grid.hy(), 16);
    pt = nearest(robin_critical_points(gb, s, grid), pt);
  }
  return {pt, std::max(grid.hx(), one ? 0.0 : grid.hy())};
}

std::vector<Eigen::VectorXd> green_sample_points(const DomainSpec& d, const Eigen::VectorXd& x0) {
  std::vector<Eigen::VectorXd> out;
  for (int axis = 0; axis < d.dim(); ++axis) {
    const double L = axis == 0 ? d.lx() : d.ly();
    for (double f : {-0.3, -0.2, 0.2, 0.3}) {
      Eigen::VectorXd x = x0;
      x(axis) += f * L;
      if (d.dist_to_boundary(x) >= 0.05 * L) out.push_back(x);
    }
  }
  return out;
}

GreenLimit green_limit_check(const SolutionRecord& rec, const EigenBasis& green_basis, double s,
                             const Eigen::VectorXd& x0, const std::vector<Eigen::VectorXd>& points) {
  const DomainSpec& d = rec.field.basis->domain();
  const double h = std::max(d.hx(), d.dim() == 2 ? d.hy() : 0.0);
  const Params& p = rec.params;
  const double coef = closed_form(p.regime == Regime::BrezisNirenberg ? ConstantKind::d_ns
                                                                      : ConstantKind::b_ns, p);
  GreenLimit out;
  std::vector<double> ratios;
  for (const auto& x : points) {
    if ((x - x0).norm() < 4.0 * h) fail(ErrorCode::SampleTooClose, "sample point within 4 cells of x0");
    GreenLimitRow row;
    row.x = x;
    row.scaled_u = rec.sup_norm * rec.field.basis->evaluate(rec.field.coeffs, x);
    row.green_term = coef * green(green_basis, s, x, x0).value;
    row.ratio = row.scaled_u / row.green_term;
    ratios.push_back(row.ratio);
    out.rows.push_back(std::move(row));
  }
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    const std::size_t m = ratios.size();
    out.median_ratio = m % 2 ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
  }
  return out;
}

namespace {

// x . (K1 f)(x) at every node, K1 the kernel (x-t)|x-t|^{-mu-2}, by
// integrating by parts against the Riesz weights. Coordinates are taken
// relative to `origin`.
Eigen::VectorXd moment_field(const GridField& f, double mu, const RieszWeights& w,
                             const Eigen::VectorXd& origin) {
  const DomainSpec& d = f.domain;
  const int N = d.N;
  Eigen::VectorXd out(d.size());
  if (d.dim() == 1) {
    // (K1 f)(x) = (1/mu) [ |x-b|^{-mu} f(b) - |x-a|^{-mu} f(a) - (K f')(x) ];
    // the boundary terms are added by the caller.
    Eigen::VectorXd slope(N);
    for (int j = 0; j < N; ++j) slope(j) = (f.values(j + 1) - f.values(j)) / d.hx();
    const Eigen::VectorXd kd = w.apply_cells(slope);
    for (int i = 0; i <= N; ++i) out(i) = -(d.x(i) - origin(0)) * kd(i) / mu;
    return out;
  }
  const int m = N + 1;
  for (Eigen::Index k = 0; k < f.values.size(); ++k)
    if (d.is_boundary_node(k) && f.values(k) != 0.0)
      fail(ErrorCode::Precondition, "2-D symmetrization needs f = 0 on the boundary");
  Eigen::VectorXd gx = Eigen::VectorXd::Zero(d.size()), gy = Eigen::VectorXd::Zero(d.size());
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N; ++i) {
      const Eigen::Index k = d.index(i, j);
      const int il = std::max(i - 1, 0), ir = std::min(i + 1, N);
      const int jl = std::max(j - 1, 0), jr = std::min(j + 1, N);
      gx(k) = (f.values(d.index(ir, j)) - f.values(d.index(il, j))) / ((ir - il) * d.hx());
      gy(k) = (f.values(d.index(i, jr)) - f.values(d.index(i, jl))) / ((jr - jl) * d.hy());
    }
  const Eigen::VectorXd kx = w.apply(gx), ky = w.apply(gy);
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N; ++i) {
      const Eigen::Index k = Eigen::Index(j) * m + i;
      out(k) = -((d.x(i) - origin(0)) * kx(k) + (d.y(j) - origin(1)) * ky(k)) / mu;
    }
  return out;
}

}  // namespace

Symmetrization symmetrization_check(const GridField& f, double mu, const RieszWeights& w) {
  if (!(f.domain == w.domain())) fail(ErrorCode::GridMismatch, "field is not on the weights' grid");
  if ((f.values.array() < 0.0).any()) fail(ErrorCode::Precondition, "symmetrization needs f >= 0");
  Symmetrization out;
  if (f.values.isZero(0.0)) return out;
  const Eigen::VectorXd wq = trapezoid_weights(f.domain);
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(f.domain.dim());
  out.lhsB = 0.5 * (wq.array() * f.values.array() * w.apply(f.values).array()).sum();
  out.lhsA = (wq.array() * f.values.array() * moment_field(f, mu, w, origin).array()).sum();
  if (f.domain.dim() == 1) {
    // Boundary terms f(b) (K g)(b) - f(a) (K g)(a), g = x f, by product integration.
    const DomainSpec& d = f.domain;
    Eigen::VectorXd g(d.size());
    for (int i = 0; i <= d.N; ++i) g(i) = d.x(i) * f.values(i);
    const Eigen::VectorXd kg = w.apply(g);
    out.lhsA += (f.values(d.N) * kg(d.N) - f.values(0) * kg(0)) / mu;
  }
  out.residual = std::abs(out.lhsA / out.lhsB - 1.0);
  return out;
}

PohozaevBalance pohozaev_balance(const SolutionRecord& rec, const Params& p, const RieszWeights& w, double r) {
  const GridField& u = rec.samples;
  const DomainSpec& d = u.domain;
  if (!(r > 0.0)) fail(ErrorCode::DegenerateStrip, "strip radius must be positive");
  const double q = nonlinear_power(p);
  const Eigen::VectorXd wq = trapezoid_weights(d);
  PohozaevBalance out;
  out.remainder_terms.assign(4, 0.0);
  std::vector<char> inner(d.size()), strip(d.size());
  bool any_inner = false;
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    const double dist = d.dist_to_boundary(d.point(k));
    inner[k] = dist >= 0.5 * r;
    strip[k] = dist < 2.0 * r;
    any_inner = any_inner || inner[k];
  }
  if (!any_inner) fail(ErrorCode::EmptyInterior, "no nodes with dist >= r/2");
  if (u.values.isZero(0.0)) return out;

  const Eigen::ArrayXd up = u.values.array().max(0.0);
  const Eigen::VectorXd U = up.pow(q).matrix();
  const Eigen::ArrayXd V = w.apply(U).array();
  const Eigen::ArrayXd low = (up > 0.0).select(U.array() / up.max(1e-300), 0.0);
  const Eigen::ArrayXd force = (V * low).abs();
  const Eigen::VectorXd mom = moment_field(GridField(d, U), w.mu(), w, d.center());
  const double qq = 2.0 * p.n / p.s;

  double interior = 0.0, t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0;
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    if (inner[k]) {
      interior += wq(k) * U(k) * V(k);
      t2 += wq(k) * force(k);
      t4 += wq(k) * U(k) * mom(k);
    }
    if (strip[k]) {
      t1 += wq(k) * std::pow(force(k), qq);
      t3 += wq(k) * U(k) * V(k);
    }
  }
  const double coef = p.n / q - 0.5 * (p.n - 2.0 * p.s);
  out.interior_term = coef * interior;
  out.remainder_terms = {std::pow(t1, 2.0 / qq), t2 * t2, t3, std::abs(t4)};
  out.remainder_sum = 0.0;
  for (double t : out.remainder_terms) out.remainder_sum += t;
  out.relative_gap = out.interior_term / std::max(out.remainder_sum, std::numeric_limits<double>::min());
  return out;
}

double pohozaev_free_space_gap(const GridField& bubble_power, const Params& p, const RieszWeights& w) {
  const double q = exponents(p).two_star;
  const double coef = p.n / q - 0.5 * (p.n - 2.0 * p.s);
  const Symmetrization sym = symmetrization_check(bubble_power, w.mu(), w);
  const double lhs = coef * 2.0 * sym.lhsB;
  const double rhs = (p.mu / q) * sym.lhsA;
  return std::abs(lhs - rhs) / std::abs(lhs);
}

BoundaryBounds boundary_bounds(const ContinuationReport& r, double strip) {
  if (!(strip > 0.0) || !(strip < r.domain.inradius()))
    fail(ErrorCode::DegenerateStrip, "strip radius must lie in (0, inradius)");
  BoundaryBounds out;
  for (const auto& e : r.records) {
    if (!e.record.field.basis) continue;
    const auto [s, m] = strip_and_interior(e.record.samples, strip);
    out.rows.push_back({e.eps, s, m, e.record.sup_norm});
  }
  out.flag = true;
  if (out.rows.size() < 2) return out;
  auto ratio = [&](auto get) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& row : out.rows) {
      lo = std::min(lo, get(row));
      hi = std::max(hi, get(row));
    }
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  };
  out.strip_ratio = ratio([](const BoundaryRow& x) { return x.strip_sup; });
  out.interior_ratio = ratio([](const BoundaryRow& x) { return x.interior_l1; });
  out.sup_growth = out.rows.back().sup_norm / out.rows.front().sup_norm;
  out.flag = out.strip_ratio <= 2.0 && out.interior_ratio <= 2.0 && out.sup_growth >= 10.0;
  return out;
}

}  // namespace fhl
