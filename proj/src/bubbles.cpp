#include "fhl/bubbles.hpp"

#include <cmath>
#include <numbers>

#include "fhl/constants.hpp"
#include "fhl/error.hpp"
#include "fhl/quadrature.hpp"
#include "fhl/riesz.hpp"

namespace fhl {

namespace {

using std::numbers::pi;

constexpr double kTol = 1e-12;

// int_{c-len}^{c} or int_{c}^{c+len} of h(r, |r-c|), where h ~ |r-c|^{-nu}.
// The substitution r = c +- t^{1/(1-nu)} removes the endpoint singularity.
template <class F>
quad::Result integrate_from_singularity(F&& h, double c, double len, double nu, int side) {
  const double e = 1.0 / (1.0 - nu);
  auto g = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double d = std::pow(t, e);
    return h(c + side * d, d) * e * d / t;
  };
  return quad::integrate(g, 0.0, std::pow(len, 1.0 - nu), kTol);
}

void accumulate(quad::Result& total, const quad::Result& part) {
  total.value += part.value;
  total.error += part.error;
  total.evaluations += part.evaluations;
  total.converged = total.converged && part.converged;
}

// int_0^{2pi} (rho^2 + r^2 - 2 rho r cos t)^{-mu/2} dt
//   = 4 int_0^{pi/2} (delta^2 + c sin^2 p)^{-mu/2} dp,  delta = |rho - r|, c = 4 rho r.
// On [0, pi/4] the map sin p = (delta/sqrt c) sinh w flattens the peak at p = 0.
double circle_kernel(double rho, double r, double delta, double mu) {
  const double c = 4.0 * rho * r, sc = std::sqrt(c);
  const double nu = 0.5 * mu;
  auto direct = [&](double p) { return std::pow(delta * delta + c * std::sin(p) * std::sin(p), -nu); };
  double total = quad::integrate(direct, 0.25 * pi, 0.5 * pi, 1e-13).value;
  const double smax = std::sin(0.25 * pi);
  if (delta == 0.0) {
    // (c sin^2 p)^{-nu}, integrable for nu < 1/2 only; mu < 1 here.
    auto g = [&](double p, double) { return p > 0.0 ? direct(p) : 0.0; };
    return 4.0 * (total + integrate_from_singularity(g, 0.0, 0.25 * pi, mu, +1).value);
  }
  const double wmax = std::asinh(smax * sc / delta);
  auto g = [&](double w) {
    const double sp = delta / sc * std::sinh(w);
    const double cp = std::sqrt(std::max(1.0 - sp * sp, 0.0));
    const double ch = std::cosh(w);
    return std::pow(delta * ch, -mu) * (delta / sc) * ch / cp;
  };
  total += quad::integrate(g, 0.0, wmax, 1e-13).value;
  return 4.0 * total;
}

// Radial kernel k(rho, r) with (|.|^{-mu} * f)(x) = int_0^inf f(r) k(|x|, r) dr
// for radial f; delta = |rho - r| supplied exactly by the caller.
double radial_kernel(int n, double rho, double r, double delta, double mu) {
  switch (n) {
    case 1:
      return std::pow(delta, -mu) + std::pow(rho + r, -mu);
    case 2:
      return r * circle_kernel(rho, r, delta, mu);
    default: {
      const double a = rho + r, b = delta;
      if (std::abs(2.0 - mu) < 1e-14) return 2.0 * pi * r / rho * std::log(a / b);
      return 2.0 * pi * r / (rho * (2.0 - mu)) * (std::pow(a, 2.0 - mu) - std::pow(b, 2.0 - mu));
    }
  }
}

}  // namespace

Bubble make_bubble(BubbleFamily family, const Params& p, const Eigen::VectorXd& center,
                   double scale) {
  if (!(scale > 0.0)) fail(ErrorCode::DegenerateScale, "bubble scale must be positive");
  if (center.size() != p.n) fail(ErrorCode::OutOfRange, "bubble center has wrong dimension");
  Bubble b;
  b.family = family;
  b.center = center;
  b.scale = scale;
  b.params = p;
  b.amplitude = family == BubbleFamily::SobolevU ? closed_form(ConstantKind::C_ns, p)
                                                 : alpha_nmus(p.n, p.s, p.mu);
  return b;
}

Bubble standard_profile(const Params& p) {
  Params q = p;
  q.mu = p.n - 2.0 * p.s;
  return make_bubble(BubbleFamily::HartreeW, q, Eigen::VectorXd::Zero(p.n), 1.0);
}

double eval_radial(const Bubble& b, double r) {
  const double l = b.scale;
  return b.amplitude * std::pow(l / (1.0 + l * l * r * r), 0.5 * (b.params.n - 2.0 * b.params.s));
}

double eval(const Bubble& b, const Eigen::VectorXd& x) {
  return eval_radial(b, (x - b.center).norm());
}

PointFunction kelvin(PointFunction f, const Params& p) {
  const double d = p.n - 2.0 * p.s;
  return [f = std::move(f), d](const Eigen::VectorXd& x) {
    const double r2 = x.squaredNorm();
    if (r2 == 0.0) fail(ErrorCode::EvaluationAtOrigin, "kelvin transform at the origin");
    return std::pow(r2, -0.5 * d) * f(x / r2);
  };
}

ConvolutionCheck convolution_identity(const Bubble& w, const Eigen::VectorXd& x) {
  if (w.family != BubbleFamily::HartreeW)
    fail(ErrorCode::Precondition, "convolution identity needs the HartreeW family");
  const Params& p = w.params;
  const Exponents e = exponents(p);
  const double mu = p.mu;
  const double rho = (x - w.center).norm();
  auto f = [&](double r) { return std::pow(eval_radial(w, r), e.two_star); };

  quad::Result total;
  if (rho == 0.0) {
    total.value = riesz_at_center(f, p.n, mu);
  } else {
    auto h = [&](double r, double delta) { return f(r) * radial_kernel(p.n, rho, r, delta, mu); };
    auto h1 = [&](double r) { return h(r, r - rho); };
    // Singularity at r = rho: |r - rho|^{-mu} for n = 1, |r - rho|^{n-1-mu}
    // or a logarithm after the angular integration for n = 2, 3.
    const double nu = p.n == 1 ? mu : std::max(0.5, mu - (p.n - 1.0));
    const double width = rho + 1.0 / w.scale;
    accumulate(total, integrate_from_singularity(h, rho, rho, nu, -1));
    accumulate(total, integrate_from_singularity(h, rho, width, nu, +1));
    accumulate(total, quad::integrate_tail(h1, rho + width, double(p.n), kTol));
  }
  ConvolutionCheck c;
  c.lhs = total.value;
  c.rhs = beta_tilde(p.n, p.s, mu) * std::pow(eval_radial(w, rho), e.two_sharp - e.two_star);
  c.residual = std::abs(c.lhs / c.rhs - 1.0);
  c.error_estimate = total.error / std::abs(c.rhs);
  if (!total.converged)
    fail(ErrorCode::QuadratureFailure,
         "convolution quadrature did not converge (estimate " + std::to_string(c.error_estimate) + ")");
  return c;
}

double convolution_identity_residual(const Bubble& w, const Eigen::VectorXd& x) {
  return convolution_identity(w, x).residual;
}

QuotientResult hls_quotient(const Bubble& w) {
  if (w.family != BubbleFamily::HartreeW)
    fail(ErrorCode::Precondition, "hls_quotient needs the HartreeW family");
  const Params& p = w.params;
  if (p.eps != 0.0) fail(ErrorCode::Precondition, "hls_quotient needs eps = 0");
  const Exponents e = exponents(p);
  const double sigma = sphere_area(p.n);
  auto f = [&](double r) { return sigma * std::pow(r, p.n - 1) * std::pow(eval_radial(w, r), e.two_sharp); };

  // W^{two_sharp} r^{n-1} ~ A r^{-(n+1)}; pick R so the tail is below 1e-8.
  const double a = sigma * std::pow(w.amplitude, e.two_sharp) * std::pow(w.scale, -p.n);
  auto head = quad::integrate(f, 0.0, 1.0 / w.scale, kTol);
  double R = 1.0 / w.scale;
  double mid = 0.0;
  for (int k = 0; k < 60; ++k) {
    const double next = 2.0 * R;
    mid += quad::integrate(f, R, next, kTol).value;
    R = next;
    if (a * std::pow(R, -p.n) / p.n < 1e-8 * (head.value + mid)) break;
  }
  auto tail = quad::integrate_tail(f, R, double(p.n), kTol);
  QuotientResult q;
  q.integral = head.value + mid + tail.value;
  q.tail_bound = std::abs(tail.value) / q.integral;
  const double D = beta_tilde(p.n, p.s, p.mu) * q.integral;
  q.quotient = std::pow(D, 1.0 - 1.0 / e.two_star);
  return q;
}

GridField rescale(const GridField& u, double sup_norm, const Eigen::VectorXd& argmax,
                  const Params& p, double half_width, int min_cells) {
  if (!(sup_norm > 0.0)) fail(ErrorCode::DegenerateScale, "rescale needs sup_norm > 0");
  const DomainSpec& d = u.domain;
  if (!(d.dist_to_boundary(argmax) > 0.0))
    fail(ErrorCode::Precondition, "argmax must be interior");
  const double mu = sup_norm / alpha_ns(p.n, p.s);
  const double stretch = std::pow(mu, rescale_exponent(p));  // x_resc = stretch * (t - argmax)

  // Output spacing divides the rescaled source spacing, so every source node
  // lands on an output node.
  const double target = 2.0 * half_width / min_cells;
  auto spacing = [&](double h) {
    const double hs = h * stretch;
    const double m = std::max(1.0, std::ceil(hs / target));
    return hs / m;
  };
  const double hx = spacing(d.hx());
  DomainSpec out;
  Eigen::VectorXd values;
  if (d.dim() == 1) {
    const int half = int(std::ceil(half_width / hx));
    out = DomainSpec::interval(-half * hx, half * hx, 2 * half);
    values.resize(out.size());
    Eigen::VectorXd t(1);
    for (int i = 0; i <= 2 * half; ++i) {
      t(0) = argmax(0) + (i - half) * hx / stretch;
      values(i) = interpolate(u, t) / mu;
    }
  } else {
    const double hy = spacing(d.hy());
    const int half = int(std::ceil(half_width / std::min(hx, hy)));
    out = DomainSpec::rectangle(-half * hx, half * hx, -half * hy, half * hy, 2 * half);
    values.resize(out.size());
    Eigen::VectorXd t(2);
    for (int j = 0; j <= 2 * half; ++j)
      for (int i = 0; i <= 2 * half; ++i) {
        t(0) = argmax(0) + (i - half) * hx / stretch;
        t(1) = argmax(1) + (j - half) * hy / stretch;
        values(out.index(i, j)) = interpolate(u, t) / mu;
      }
  }
  return GridField(out, std::move(values));
}

double profile_distance(const GridField& v, const Params& p, double window) {
  const Bubble w = standard_profile(p);
  double best = -1.0;
  for (Eigen::Index k = 0; k < v.values.size(); ++k) {
    const Eigen::VectorXd x = v.domain.point(k);
    if (x.norm() > window) continue;
    best = std::max(best, std::abs(v.values(k) - eval(w, x)));
  }
  if (best < 0.0) fail(ErrorCode::EmptyWindow, "no grid point inside the window");
  return best;
}

}  // namespace fhl
