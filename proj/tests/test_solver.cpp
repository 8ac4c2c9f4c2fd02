#include <doctest.h>

#include <cmath>

#include "fhl/error.hpp"
#include "fhl/solver.hpp"

using namespace fhl;

namespace {

struct Setup {
  DomainSpec d;
  std::shared_ptr<const EigenBasis> b;
  RieszWeights w;
};

Setup interval(int N, int K, double mu) {
  const DomainSpec d = DomainSpec::interval(0, 1, N);
  return {d, std::make_shared<const EigenBasis>(build_basis(d, K)), build_weights(d, mu)};
}

}  // namespace

TEST_CASE("reference subcritical solve") {
  const Setup s = interval(1024, 256, 0.4);
  const Params p = make_params(1, 0.3, 0.4, 0.2, Regime::SubcriticalHartree);
  const SolutionRecord r = solve(p, s.b, s.w, {});
  CHECK(r.converged);
  CHECK(r.status == "Converged");
  CHECK(r.residual < 1e-8);
  CHECK(r.iterations <= 500);
  CHECK(r.sup_norm == doctest::Approx(2.558).epsilon(1e-3));
  CHECK(r.argmax(0) == doctest::Approx(0.5));
  // even about 1/2
  const Eigen::VectorXd& v = r.samples.values;
  CHECK((v - v.reverse()).cwiseAbs().maxCoeff() < 1e-8 * r.sup_norm);
  // the interior minimum is small ringing, not a sign change of the bulk
  CHECK(r.min_interior > -1e-3 * r.sup_norm);
  CHECK(r.residual_trace.size() == std::size_t(r.iterations + 1));
  // independent residual evaluation
  CHECK(residual(r.field, p, s.w).value < 1e-8);
  CHECK(r.quotient > 0.0);
}

TEST_CASE("scaling the solution breaks the equation") {
  const Setup s = interval(512, 128, 0.4);
  const Params p = make_params(1, 0.3, 0.4, 0.2, Regime::SubcriticalHartree);
  const SolutionRecord r = solve(p, s.b, s.w, {});
  REQUIRE(r.converged);
  const double base = residual(r.field, p, s.w).value;
  const double up = residual({s.b, 1.01 * r.field.coeffs}, p, s.w).value;
  CHECK(up > 100.0 * base);
}

TEST_CASE("linear hook reduces to inverse iteration") {
  const Setup s = interval(256, 32, 0.4);
  const Params p = make_params(1, 0.3, 0.4, 0.2, Regime::SubcriticalHartree);
  SolveOptions o;
  o.nonlinearity = Nonlinearity{[](const Eigen::VectorXd& u) { return u; }, 1.0};
  o.seed.kind = SeedKind::BubbleCap;
  o.seed.lambda0 = 20.0;
  o.theta = 1.0;
  o.residual_tol = 1e-12;
  const SolutionRecord r = solve(p, s.b, s.w, o);
  const Eigen::VectorXd a = r.field.coeffs.normalized();
  const double angle = std::acos(std::min(1.0, std::abs(a(0))));
  CHECK(angle < 1e-8);
}

TEST_CASE("gradient flow converges to the same state") {
  const Setup s = interval(512, 128, 0.4);
  const Params p = make_params(1, 0.3, 0.4, 0.2, Regime::SubcriticalHartree);
  const SolutionRecord a = solve(p, s.b, s.w, {});
  SolveOptions o;
  o.strategy = Strategy::NormalizedGradientFlow;
  o.normalization = Normalization::NonlocalEnergy;
  o.max_iter = 2000;
  const SolutionRecord b = solve(p, s.b, s.w, o);
  REQUIRE(b.converged);
  CHECK(b.sup_norm == doctest::Approx(a.sup_norm).epsilon(1e-6));
}

TEST_CASE("preconditions") {
  const Setup s = interval(256, 32, 0.4);
  CHECK_THROWS_AS(solve_subcritical(make_params(1, 0.3, 0.4, 0.0, Regime::SubcriticalHartree), s.b, s.w, {}),
                  Error);
  // p_sub must exceed 2
  CHECK_THROWS_AS(solve_subcritical(make_params(1, 0.3, 0.4, 2.5, Regime::SubcriticalHartree), s.b, s.w, {}),
                  Error);
  // weights for another mu
  const Setup t = interval(256, 32, 0.5);
  CHECK_THROWS_AS(solve(make_params(1, 0.3, 0.4, 0.2, Regime::SubcriticalHartree), s.b, t.w, {}), Error);
  // aliasing guard
  const Setup u = interval(256, 100, 0.4);
  CHECK_THROWS_AS(solve(make_params(1, 0.3, 0.4, 0.2, Regime::SubcriticalHartree), u.b, u.w, {}), Error);
}

TEST_CASE("Brezis-Nirenberg eps range") {
  const DomainSpec d = DomainSpec::rectangle(0, 1, 0, 1, 32);
  auto b = std::make_shared<const EigenBasis>(build_basis(d, 20));
  const RieszWeights w = build_weights(d, 1.2);
  const double l1 = std::pow(b->lambdas()(0), 0.45);
  try {
    solve_bn(make_params(2, 0.45, 1.2, l1, Regime::BrezisNirenberg), b, w, {});
    FAIL("expected ResonantEps");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ResonantEps);
  }
  CHECK_THROWS_AS(solve_bn(make_params(2, 0.45, 1.2, 1.5 * l1, Regime::BrezisNirenberg), b, w, {}), Error);
  const SolutionRecord r = solve_bn(make_params(2, 0.45, 1.2, 0.2 * l1, Regime::BrezisNirenberg), b, w, {});
  CHECK(r.converged);
  CHECK(r.argmax(0) == doctest::Approx(0.5));
  CHECK(r.argmax(1) == doctest::Approx(0.5));
}

TEST_CASE("residual and energy quotient") {
  const Setup s = interval(256, 32, 0.4);
  const Params p = make_params(1, 0.3, 0.4, 0.2, Regime::SubcriticalHartree);
  const ResidualValue z = residual({s.b, Eigen::VectorXd::Zero(32)}, p, s.w);
  CHECK(z.zero_field);
  CHECK(z.value == 0.0);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(32);
  e1(0) = 1.0;
  CHECK(residual({s.b, e1}, p, s.w).value > 1e-3);
  const double q = energy_quotient({s.b, e1}, p, s.w);
  CHECK(energy_quotient({s.b, 0.5 * e1}, p, s.w) == doctest::Approx(q).epsilon(1e-10));
  CHECK(energy_quotient({s.b, 3.0 * e1}, p, s.w) == doctest::Approx(q).epsilon(1e-10));
  CHECK_THROWS_AS(energy_quotient({s.b, Eigen::VectorXd::Zero(32)}, p, s.w), Error);
}

TEST_CASE("hartree term homogeneity") {
  const Setup s = interval(128, 16, 0.4);
  Eigen::VectorXd u = s.b->sample(0);
  const double q = 3.5;
  const Eigen::VectorXd a = hartree_term(u, q, s.w), b = hartree_term(2.0 * u, q, s.w);
  CHECK((b - std::pow(2.0, 2 * q - 1) * a).norm() <= 1e-12 * b.norm());
  CHECK(hartree_term(-u, q, s.w).norm() == 0.0);
}
