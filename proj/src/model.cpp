#include "fhl/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fhl/error.hpp"

namespace fhl {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::SubcriticalHartree: return "subcritical";
    case Regime::BrezisNirenberg: return "bn";
    case Regime::FreeSpace: return "free";
  }
  return "?";
}

Regime regime_from_string(const std::string& name) {
  if (name == "subcritical" || name == "SubcriticalHartree") return Regime::SubcriticalHartree;
  if (name == "bn" || name == "BrezisNirenberg") return Regime::BrezisNirenberg;
  if (name == "free" || name == "FreeSpace") return Regime::FreeSpace;
  fail(ErrorCode::OutOfRange, "unknown regime '" + name + "'");
}

namespace {

[[noreturn]] void violated(const std::string& inequality, double lhs, double rhs) {
  std::ostringstream os;
  os.precision(12);
  os << "violated " << inequality << " (" << lhs << " vs " << rhs << ")";
  fail(ErrorCode::OutOfRange, os.str());
}

}  // namespace

Params make_params(int n, double s, double mu, double eps, Regime regime) {
  if (n < 1 || n > 3) violated("n in {1,2,3}", n, 3);
  if (!(s > 0.0)) violated("0 < s", 0.0, s);
  if (!(s < 1.0)) violated("s < 1", s, 1.0);
  if (!(2.0 * s < n)) violated("2s < n", 2.0 * s, n);
  if (!(eps >= 0.0)) violated("eps >= 0", eps, 0.0);

  const double n_minus_2s = n - 2.0 * s;
  if (regime == Regime::SubcriticalHartree) {
    // mu is tied to s; accept rounding noise and store the exact value.
    if (std::abs(mu - n_minus_2s) > 1e-12 * std::max(1.0, std::abs(mu)))
      violated("mu = n - 2s", mu, n_minus_2s);
    mu = n_minus_2s;
    if (!(n < 6.0 * s)) violated("n < 6s", n, 6.0 * s);
  }
  if (!(mu > 0.0)) violated("0 < mu", 0.0, mu);
  if (!(mu < n)) violated("mu < n", mu, n);
  if (regime == Regime::BrezisNirenberg) {
    if (!(n > 4.0 * s)) violated("n > 4s", n, 4.0 * s);
    const double bound = std::min({double(n), 4.0 * s, (n + 2.0 * s) / 2.0});
    if (!(mu < bound)) violated("mu < min{n, 4s, (n+2s)/2}", mu, bound);
  }
  return Params{n, s, mu, eps, regime};
}

Exponents exponents(const Params& p) {
  const double d = p.n - 2.0 * p.s;
  Exponents e{};
  e.two_sharp = 2.0 * p.n / d;
  e.two_star = (p.mu == d) ? e.two_sharp - 1.0 : (2.0 * p.n - p.mu) / d;
  e.p_sub = e.two_sharp - 1.0 - p.eps;
  return e;
}

double nonlinear_power(const Params& p) {
  const Exponents e = exponents(p);
  return p.regime == Regime::SubcriticalHartree ? e.p_sub : e.two_star;
}

double rescale_exponent(const Params& p) {
  const double eps = p.regime == Regime::SubcriticalHartree ? p.eps : 0.0;
  return (exponents(p).two_sharp - 2.0 - eps) / (2.0 * p.s);
}

}  // namespace fhl
