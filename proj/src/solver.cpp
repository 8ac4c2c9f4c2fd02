#include "fhl/solver.hpp"

#include <cmath>

#include "fhl/bubbles.hpp"
#include "fhl/constants.hpp"
#include "fhl/error.hpp"

namespace fhl {

const char* to_string(Strategy s) {
  return s == Strategy::DampedPicard ? "picard" : "gradient_flow";
}
const char* to_string(Normalization n) {
  return n == Normalization::SupNorm ? "sup" : "energy";
}
const char* to_string(SeedKind k) {
  switch (k) {
    case SeedKind::FirstEigenfunction: return "eigen";
    case SeedKind::BubbleCap: return "bubble";
    case SeedKind::WarmStart: return "warm";
  }
  return "?";
}

Eigen::VectorXd hartree_term(const Eigen::VectorXd& u, double q, const RieszWeights& w) {
  const Eigen::ArrayXd up = u.array().max(0.0);
  const Eigen::ArrayXd upq = up.pow(q);
  const Eigen::ArrayXd conv = w.apply(upq.matrix()).array();
  // u^{q-1} = u^q / u where u > 0
  const Eigen::ArrayXd low = (up > 0.0).select(upq / up.max(1e-300), 0.0);
  return (conv * low).matrix();
}

namespace {

Eigen::ArrayXd operator_diagonal(const EigenBasis& b, const Params& p) {
  Eigen::ArrayXd d = b.lambdas().array().pow(p.s);
  if (p.regime == Regime::BrezisNirenberg) d -= p.eps;
  return d;
}

double interior_min(const Eigen::VectorXd& v, const DomainSpec& d) {
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (!d.is_boundary_node(k)) m = std::min(m, v(k));
  return m;
}

Eigen::VectorXd seed_coeffs(const EigenBasis& b, const Params& p, const Seed& seed) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(b.size());
  switch (seed.kind) {
    case SeedKind::FirstEigenfunction:
      a(0) = 1.0;
      return a;
    case SeedKind::WarmStart:
      if (seed.coeffs.size() != b.size())
        fail(ErrorCode::GridMismatch, "warm start coefficients do not match the basis");
      return seed.coeffs;
    case SeedKind::BubbleCap: {
      const DomainSpec& d = b.domain();
      const Bubble w = make_bubble(BubbleFamily::HartreeW,
                                   Params{d.dim(), p.s, d.dim() - 2.0 * p.s, 0.0, Regime::FreeSpace},
                                   d.center(), seed.lambda0);
      const Eigen::VectorXd phi1 = b.sample(0);
      Eigen::VectorXd v(d.size());
      for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = eval(w, d.point(k)) * phi1(k);
      return b.analyze(v);
    }
  }
  return a;
}

struct Calibration {
  double c = 0.0;
  double residual = 0.0;
};

// Best scalar c in D a ~ c b; residual |D a - c b| / |c b|.
Calibration calibrate(const Eigen::VectorXd& da, const Eigen::VectorXd& b) {
  Calibration out;
  const double ab = da.dot(b);
  if (!(ab > 0.0)) {
    out.c = std::numeric_limits<double>::quiet_NaN();
    out.residual = std::numeric_limits<double>::infinity();
    return out;
  }
  out.c = da.squaredNorm() / ab;
  out.residual = (da - out.c * b).norm() / (out.c * b).norm();
  return out;
}

SolutionRecord run(const Params& p, std::shared_ptr<const EigenBasis> basis, const RieszWeights& w,
                   const SolveOptions& opts) {
  const EigenBasis& b = *basis;
  const DomainSpec& d = b.domain();
  if (!(d == w.domain())) fail(ErrorCode::GridMismatch, "weights and basis use different grids");
  if (d.dim() != p.n) fail(ErrorCode::GridMismatch, "domain dimension differs from n");
  if (!(opts.theta > 0.0 && opts.theta <= 1.0)) fail(ErrorCode::OutOfRange, "theta must lie in (0,1]");
  if (!(opts.residual_tol > 0.0)) fail(ErrorCode::OutOfRange, "residual_tol must be positive");
  if (opts.max_iter < 1) fail(ErrorCode::OutOfRange, "max_iter must be positive");
  if (d.N < 4 * b.max_kx() || (d.dim() == 2 && d.N < 4 * b.max_ky()))
    fail(ErrorCode::UnderResolved, "aliasing guard: need N >= 4 * max mode index per axis");

  const double floor = opts.positivity_floor > 0.0 ? opts.positivity_floor : d.dim() == 1 ? 1e-3 : 5e-2;
  const double q = nonlinear_power(p);
  if (!opts.nonlinearity && std::abs(w.mu() - p.mu) > 1e-14)
    fail(ErrorCode::GridMismatch, "weights were built for a different mu");
  auto nonlinear = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    if (opts.nonlinearity) return opts.nonlinearity->eval(u);
    return hartree_term(u, q, w);
  };
  const double degree = opts.nonlinearity ? opts.nonlinearity->degree : 2.0 * q - 1.0;
  const Eigen::ArrayXd D = operator_diagonal(b, p);

  // Normalisation of a direction.
  auto norm_factor = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& u) {
    if (opts.normalization == Normalization::SupNorm) return u.maxCoeff();
    return std::sqrt((D * a.array().square()).sum());
  };

  Eigen::VectorXd a = seed_coeffs(b, p, opts.seed);
  Eigen::VectorXd u = b.synthesize(a);
  {
    const double f = norm_factor(a, u);
    if (!(f > 0.0)) fail(ErrorCode::ZeroField, "seed has no positive part");
    a /= f;
    u /= f;
  }

  SolutionRecord rec;
  rec.params = p;
  double theta = opts.theta;
  int halvings = 0;
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_a = a;
  double best_c = 1.0;
  rec.status = "NoConvergence";

  Eigen::VectorXd Nu = nonlinear(u);
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    const Eigen::VectorXd bk = b.analyze(Nu);
    const Eigen::VectorXd da = (D * a.array()).matrix();
    const Calibration cal = calibrate(da, bk);
    rec.residual_trace.push_back(cal.residual);
    if (cal.residual < best) {
      best = cal.residual;
      best_a = a;
      best_c = cal.c;
    }
    if (cal.residual < opts.residual_tol) {
      rec.status = "Converged";
      rec.converged = true;
      break;
    }

    Eigen::VectorXd step = (bk.array() / D).matrix();  // A^{-1} P N(u)
    Eigen::VectorXd t = b.synthesize(step);
    bool accepted = false;
    while (!accepted) {
      Eigen::VectorXd a_new, u_new;
      if (opts.strategy == Strategy::DampedPicard) {
        const double f = norm_factor(step, t);
        a_new = (1.0 - theta) * a + theta * step / f;
        u_new = (1.0 - theta) * u + theta * t / f;
      } else {
        const double kappa = (D * a.array().square()).sum() / a.dot(bk);
        const double tau = opts.gradient_step * theta / opts.theta;
        a_new = a - tau * (a - kappa * step);
        u_new = u - tau * (u - kappa * t);
      }
      const double f = norm_factor(a_new, u_new);
      a_new /= f;
      u_new /= f;
      if (interior_min(u_new, d) < -floor * u_new.maxCoeff()) {
        if (halvings >= opts.max_halvings) {
          rec.status = "PositivityLost";
          break;
        }
        theta *= 0.5;
        ++halvings;
        continue;
      }
      a = std::move(a_new);
      u = std::move(u_new);
      accepted = true;
    }
    if (!accepted) break;
    Nu = nonlinear(u);
  }
  rec.iterations = it;
  rec.theta_used = theta;

  const Eigen::VectorXd& a_final = rec.converged ? a : best_a;
  const double c = rec.converged ? calibrate((D * a.array()).matrix(), b.analyze(Nu)).c : best_c;
  const double scale = std::abs(degree - 1.0) < 1e-14 ? 1.0 : std::pow(c, 1.0 / (degree - 1.0));
  rec.residual = rec.converged ? rec.residual_trace.back() : best;
  rec.field = {basis, scale * a_final};
  summarize(rec, w);
  if (!opts.nonlinearity) rec.quotient = energy_quotient(rec.field, p, w);
  return rec;
}

}  // namespace

void summarize(SolutionRecord& r, const RieszWeights& w) {
  (void)w;
  const EigenBasis& b = *r.field.basis;
  const DomainSpec& d = b.domain();
  r.samples = GridField(d, b.synthesize(r.field.coeffs));
  const Eigen::Index k = argmax_index(r.samples);
  r.sup_norm = r.samples.values(k);
  r.argmax = d.point(k);
  r.mu_eps = r.sup_norm / alpha_ns(r.params.n, r.params.s);
  r.min_interior = interior_min(r.samples.values, d);
  r.positive = r.min_interior > 0.0;
  // Parabolic refinement of the peak value along each axis.
  double peak = r.sup_norm;
  const int m = d.N + 1;
  const int i = int(k % m), j = int(k / m);
  auto refine = [&](double lo, double mid, double hi) {
    const double den = lo - 2.0 * mid + hi;
    if (den >= 0.0) return 0.0;
    return -0.125 * (hi - lo) * (hi - lo) / den;
  };
  if (i > 0 && i < d.N)
    peak += refine(r.samples.values(k - 1), r.sup_norm, r.samples.values(k + 1));
  if (d.dim() == 2 && j > 0 && j < d.N)
    peak += refine(r.samples.values(k - m), r.sup_norm, r.samples.values(k + m));
  r.sup_interp = peak;
}

SolutionRecord solve_subcritical(const Params& p, std::shared_ptr<const EigenBasis> basis,
                                 const RieszWeights& w, const SolveOptions& opts) {
  if (p.regime != Regime::SubcriticalHartree)
    fail(ErrorCode::Precondition, "solve_subcritical needs the SubcriticalHartree regime");
  if (!(p.eps > 0.0))
    fail(ErrorCode::Precondition, "eps must be positive: the critical problem has no minimizer");
  if (!(exponents(p).p_sub > 2.0)) fail(ErrorCode::Precondition, "p_sub = two_sharp - 1 - eps must exceed 2");
  return run(p, std::move(basis), w, opts);
}

SolutionRecord solve_bn(const Params& p, std::shared_ptr<const EigenBasis> basis, const RieszWeights& w,
                        const SolveOptions& opts) {
  if (p.regime != Regime::BrezisNirenberg)
    fail(ErrorCode::Precondition, "solve_bn needs the BrezisNirenberg regime");
  const Eigen::ArrayXd ls = basis->lambdas().array().pow(p.s);
  if (((ls - p.eps).abs() < 1e-10).any()) fail(ErrorCode::ResonantEps, "eps coincides with an eigenvalue of A_s");
  if (!(p.eps > 0.0 && p.eps < ls(0))) fail(ErrorCode::Precondition, "need 0 < eps < lambda_1^s");
  return run(p, std::move(basis), w, opts);
}

SolutionRecord solve(const Params& p, std::shared_ptr<const EigenBasis> basis, const RieszWeights& w,
                     const SolveOptions& opts) {
  if (p.regime == Regime::BrezisNirenberg) return solve_bn(p, std::move(basis), w, opts);
  return solve_subcritical(p, std::move(basis), w, opts);
}

ResidualValue residual(const SpectralField& u, const Params& p, const RieszWeights& w) {
  const EigenBasis& b = *u.basis;
  if (u.coeffs.isZero(0.0)) return {0.0, true};
  const Eigen::VectorXd nu = b.analyze(hartree_term(b.synthesize(u.coeffs), nonlinear_power(p), w));
  const Eigen::VectorXd da = (operator_diagonal(b, p) * u.coeffs.array()).matrix();
  const double den = nu.norm();
  if (den == 0.0) return {std::numeric_limits<double>::infinity(), false};
  return {(da - nu).norm() / den, false};
}

double energy_quotient(const SpectralField& u, const Params& p, const RieszWeights& w) {
  const EigenBasis& b = *u.basis;
  if (u.coeffs.isZero(0.0)) fail(ErrorCode::ZeroField, "energy quotient of the zero field");
  const double q = nonlinear_power(p);
  const double num = (b.lambdas().array().pow(p.s) * u.coeffs.array().square()).sum();
  const Eigen::VectorXd up = b.synthesize(u.coeffs).array().max(0.0).pow(q).matrix();
  const Eigen::VectorXd wq = trapezoid_weights(b.domain());
  const double dbl = (wq.array() * up.array() * w.apply(up).array()).sum();
  if (!(dbl > 0.0)) fail(ErrorCode::ZeroField, "field has no positive part");
  return num / std::pow(dbl, 1.0 / q);
}

}  // namespace fhl
