#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fhl/bubbles.hpp"
#include "fhl/constants.hpp"
#include "fhl/error.hpp"

using namespace fhl;
using std::numbers::pi;

namespace {
double rel(double a, double b) { return std::abs(a / b - 1.0); }
}  // namespace

TEST_CASE("gamma") {
  CHECK(fhl::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fhl::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(fhl::gamma(0.5) == doctest::Approx(1.7724538509055159).epsilon(1e-14));
  CHECK_THROWS_AS(fhl::gamma(0.0), Error);
  CHECK_THROWS_AS(fhl::gamma(-1.5), Error);
}

TEST_CASE("half-integer closed forms at (2, 0.5, 1)") {
  const Params p = make_params(2, 0.5, 1.0, 0.0, Regime::FreeSpace);
  CHECK(rel(closed_form(ConstantKind::C_ns, p), std::sqrt(2.0)) < 1e-10);
  CHECK(rel(closed_form(ConstantKind::C_HLS_sharp, p), 2.0 * std::sqrt(pi)) < 1e-10);
  CHECK(rel(closed_form(ConstantKind::Alpha_nmus, p), std::pow(2.0 * pi, -0.25)) < 1e-10);
  CHECK(rel(closed_form(ConstantKind::BetaTilde_nmus, p), std::sqrt(2.0 * pi)) < 1e-10);
  CHECK(rel(closed_form(ConstantKind::b_ns, p), std::sqrt(2.0 * pi)) < 1e-10);
  CHECK(rel(closed_form(ConstantKind::SigmaN, p), 2.0 * pi) < 1e-14);
}

TEST_CASE("frozen values at n=1, s=0.3") {
  const Params p = make_params(1, 0.3, 0.4, 0.0, Regime::FreeSpace);
  CHECK(rel(closed_form(ConstantKind::Alpha_nmus, p), 0.662300091166628) < 1e-12);
  CHECK(rel(closed_form(ConstantKind::BetaTilde_nmus, p), 1.32312149229044) < 1e-12);
  CHECK(rel(closed_form(ConstantKind::Gamma_ns, p), 0.571216247620264) < 1e-12);
  CHECK(rel(closed_form(ConstantKind::Kappa_s, p), 0.572540458568312) < 1e-12);
  CHECK(rel(closed_form(ConstantKind::M_ns, p), 2.50579557634068) < 1e-10);
  CHECK(rel(closed_form(ConstantKind::b_ns, p), 0.767907797767906) < 1e-10);
  CHECK(rel(closed_form(ConstantKind::d_ns, p), 0.767907797767906) < 1e-10);
  CHECK(rel(closed_form(ConstantKind::SigmaN, p), 2.0) < 1e-15);
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2.0 * pi));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * pi).epsilon(1e-14));
}

TEST_CASE("F_ns needs n > 4s") {
  const Params p = make_params(1, 0.3, 0.4, 0.0, Regime::FreeSpace);
  CHECK_THROWS_AS(closed_form(ConstantKind::F_ns, p), Error);
  for (const auto& [k, v] : applicable_constants(p)) CHECK(k != ConstantKind::F_ns);
  const Params q = make_params(2, 0.45, 1.2, 0.0, Regime::FreeSpace);
  CHECK(std::isfinite(closed_form(ConstantKind::F_ns, q)));
  CHECK(closed_form(ConstantKind::F_ns, q) > 0.0);
}

TEST_CASE("tags round trip") {
  const Params p = make_params(2, 0.45, 1.2, 0.0, Regime::FreeSpace);
  for (const auto& [k, v] : applicable_constants(p)) {
    REQUIRE(kind_from_tag(tag(k)).has_value());
    CHECK(*kind_from_tag(tag(k)) == k);
    CHECK(std::isfinite(v));
  }
  CHECK_FALSE(kind_from_tag("nope").has_value());
}

TEST_CASE("coherence: beta_tilde * alpha^(2# - 2*) equals the convolution at the center") {
  for (auto [n, s, mu] : {std::tuple{1, 0.3, 0.4}, {2, 0.5, 1.0}, {3, 0.6, 1.8}, {2, 0.4, 1.5}}) {
    const Params p = make_params(n, s, mu, 0.0, Regime::FreeSpace);
    const Bubble w = make_bubble(BubbleFamily::HartreeW, p, Eigen::VectorXd::Zero(n), 1.0);
    const ConvolutionCheck c = convolution_identity(w, Eigen::VectorXd::Zero(n));
    const Exponents e = exponents(p);
    CHECK(rel(c.lhs, beta_tilde(n, s, mu) * std::pow(alpha_nmus(n, s, mu), e.two_sharp - e.two_star)) < 1e-9);
  }
}
