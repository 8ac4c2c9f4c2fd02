#include "fhl/constants.hpp"

#include <cmath>
#include <numbers>

#include "fhl/error.hpp"
#include "fhl/quadrature.hpp"

namespace fhl {

namespace {

using std::numbers::pi;

constexpr double kRadialTol = 1e-13;

struct TagEntry {
  ConstantKind kind;
  const char* name;
};

constexpr TagEntry kTags[] = {
    {ConstantKind::C_ns, "C_ns"},
    {ConstantKind::C_HLS_sharp, "C_HLS_sharp"},
    {ConstantKind::Alpha_nmus, "Alpha_nmus"},
    {ConstantKind::BetaTilde_nmus, "BetaTilde_nmus"},
    {ConstantKind::Gamma_ns, "Gamma_ns"},
    {ConstantKind::Kappa_s, "Kappa_s"},
    {ConstantKind::B_ns, "B_ns"},
    {ConstantKind::M_ns, "M_ns"},
    {ConstantKind::F_ns, "F_ns"},
    {ConstantKind::SigmaN, "SigmaN"},
    {ConstantKind::b_ns, "b_ns"},
    {ConstantKind::d_ns, "d_ns"},
};

// sigma * int_0^inf r^{n-1} (1+r^2)^{-q} dr, split at r = 1.
double radial_power_integral(int n, double q) {
  const double decay = 2.0 * q - n;
  if (!(decay > 0.0))
    fail(ErrorCode::DivergentIntegral, "radial integral diverges at infinity");
  auto f = [n, q](double r) { return std::pow(r, n - 1) * std::pow(1.0 + r * r, -q); };
  auto head = quad::integrate(f, 0.0, 1.0, kRadialTol);
  auto tail = quad::integrate_tail(f, 1.0, decay, kRadialTol);
  if (!head.converged || !tail.converged)
    fail(ErrorCode::QuadratureFailure, "radial integral did not converge");
  return sphere_area(n) * (head.value + tail.value);
}

// sigma * int_0^1 r^{n-1} (1-r^2)^{-s} dr with t = 1 - r = w^{1/(1-s)}.
double ball_weight_integral(int n, double s) {
  if (!(s < 1.0)) fail(ErrorCode::DivergentIntegral, "M_ns requires s < 1");
  const double e = 1.0 / (1.0 - s);
  auto g = [n, s, e](double w) {
    const double t = std::pow(w, e);
    return std::pow(1.0 - t, n - 1) * std::pow(2.0 - t, -s);
  };
  auto r = quad::integrate(g, 0.0, 1.0, kRadialTol);
  if (!r.converged) fail(ErrorCode::QuadratureFailure, "M_ns quadrature did not converge");
  return sphere_area(n) * e * r.value;
}

double composite_b(int n, double s, double mu) {
  const double two_sharp = 2.0 * n / (n - 2.0 * s);
  return 0.5 * sphere_area(n) * gamma(s) * gamma(0.5 * n) / gamma(0.5 * (n + 2.0 * s)) *
         std::pow(alpha_nmus(n, s, mu), two_sharp) * beta_tilde(n, s, mu);
}

}  // namespace

const char* tag(ConstantKind kind) {
  for (const auto& t : kTags)
    if (t.kind == kind) return t.name;
  return "?";
}

std::optional<ConstantKind> kind_from_tag(const std::string& name) {
  for (const auto& t : kTags)
    if (name == t.name) return t.kind;
  return std::nullopt;
}

double gamma(double x) {
  if (!(x > 0.0)) fail(ErrorCode::NonPositiveArgument, "gamma requires x > 0");
  return std::tgamma(x);
}

double sphere_area(int n) { return 2.0 * std::pow(pi, 0.5 * n) / gamma(0.5 * n); }

double riesz_bubble_mass(int n, double mu) {
  return std::pow(pi, 0.5 * n) * gamma(0.5 * (n - mu)) / gamma(n - 0.5 * mu);
}

namespace {

// X = 2^{2s} G((n+2s)/2) G((2n-mu)/2) / (pi^{n/2} G((n-2s)/2) G((n-mu)/2))
double alpha_base(int n, double s, double mu) {
  return std::pow(2.0, 2.0 * s) * gamma(0.5 * (n + 2.0 * s)) * gamma(0.5 * (2.0 * n - mu)) /
         (std::pow(pi, 0.5 * n) * gamma(0.5 * (n - 2.0 * s)) * gamma(0.5 * (n - mu)));
}

}  // namespace

double alpha_nmus(int n, double s, double mu) {
  return std::pow(alpha_base(n, s, mu), (n - 2.0 * s) / (2.0 * (n + 2.0 * s - mu)));
}

double beta_tilde(int n, double s, double mu) {
  return std::pow(pi, 0.5 * n) * gamma(0.5 * (n - mu)) / gamma(0.5 * (2.0 * n - mu)) *
         std::pow(alpha_base(n, s, mu), (n - mu) / (n + 2.0 * s - mu));
}

double alpha_ns(int n, double s) { return alpha_nmus(n, s, n - 2.0 * s); }

double closed_form(ConstantKind kind, const Params& p) {
  const int n = p.n;
  const double s = p.s, mu = p.mu;
  switch (kind) {
    case ConstantKind::C_ns:
      return std::pow(2.0, 2.0 * s) *
             std::pow(gamma(0.5 * (n + 2.0 * s)) / gamma(0.5 * (n - 2.0 * s)),
                      (n - 2.0 * s) / (4.0 * s));
    case ConstantKind::C_HLS_sharp:
      return std::pow(pi, 0.5 * mu) * gamma(0.5 * (n - mu)) / gamma(n - 0.5 * mu) *
             std::pow(gamma(n) / gamma(0.5 * n), 1.0 - mu / n);
    case ConstantKind::Alpha_nmus:
      return alpha_nmus(n, s, mu);
    case ConstantKind::BetaTilde_nmus:
      return beta_tilde(n, s, mu);
    case ConstantKind::Gamma_ns:
      return std::pow(2.0, -2.0 * s) * gamma(0.5 * (n - 2.0 * s)) /
             (std::pow(pi, 0.5 * n) * gamma(s));
    case ConstantKind::Kappa_s:
      return gamma(1.0 - s) / (std::pow(2.0, 2.0 * s - 1.0) * gamma(s));
    case ConstantKind::B_ns:
      return radial_power_integral(n, n);
    case ConstantKind::M_ns:
      return ball_weight_integral(n, s);
    case ConstantKind::F_ns:
      if (!(n > 4.0 * s)) fail(ErrorCode::DivergentIntegral, "F_ns requires n > 4s");
      return radial_power_integral(n, n - 2.0 * s);
    case ConstantKind::SigmaN:
      return sphere_area(n);
    case ConstantKind::b_ns:
      return composite_b(n, s, n - 2.0 * s);
    case ConstantKind::d_ns:
      return composite_b(n, s, mu);
  }
  fail(ErrorCode::UnsupportedKind, "unsupported constant kind");
}

std::vector<std::pair<ConstantKind, double>> applicable_constants(const Params& p) {
  std::vector<std::pair<ConstantKind, double>> out;
  for (const auto& t : kTags) {
    if (t.kind == ConstantKind::F_ns && !(p.n > 4.0 * p.s)) continue;
    out.emplace_back(t.kind, closed_form(t.kind, p));
  }
  return out;
}

}  // namespace fhl
