#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fhl/error.hpp"
#include "fhl/spectral.hpp"

using namespace fhl;
using std::numbers::pi;

namespace {

Eigen::VectorXd pt(double x) { return Eigen::VectorXd::Constant(1, x); }

Eigen::VectorXd pt(double x, double y) {
  Eigen::VectorXd p(2);
  p << x, y;
  return p;
}

std::shared_ptr<const EigenBasis> basis(const DomainSpec& d, int K) {
  return std::make_shared<const EigenBasis>(build_basis(d, K));
}

Eigen::VectorXd random_coeffs(int K, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::VectorXd a(K);
  for (int k = 0; k < K; ++k) a(k) = N(rng);
  return a;
}

}  // namespace

TEST_CASE("eigenvalues") {
  const auto b = basis(DomainSpec::interval(0, 1, 16), 3);
  CHECK(b->lambdas()(0) == doctest::Approx(pi * pi).epsilon(1e-14));
  CHECK(b->lambdas()(1) == doctest::Approx(4 * pi * pi).epsilon(1e-14));
  CHECK(b->lambdas()(2) == doctest::Approx(9 * pi * pi).epsilon(1e-14));
  const auto r = basis(DomainSpec::rectangle(0, 1, 0, 1, 16), 5);
  CHECK(r->lambdas()(0) == doctest::Approx(2 * pi * pi).epsilon(1e-14));
  CHECK(r->lambdas()(1) == doctest::Approx(5 * pi * pi).epsilon(1e-14));
  CHECK(r->lambdas()(2) == doctest::Approx(5 * pi * pi).epsilon(1e-14));
  for (int k = 1; k < r->size(); ++k) CHECK(r->lambdas()(k) >= r->lambdas()(k - 1));
  CHECK_THROWS_AS(build_basis(DomainSpec::interval(0, 1, 16), 9), Error);
  CHECK_THROWS_AS(build_basis(DomainSpec::rectangle(0, 1, 0, 1, 8), 17), Error);
}

TEST_CASE("fractional powers") {
  const auto b = basis(DomainSpec::interval(0, 1, 256), 64);
  const SpectralField u{b, random_coeffs(64, 1)};
  CHECK((solve_As(apply_As(u, 0.3), 0.3).coeffs - u.coeffs).norm() <= 1e-12 * u.coeffs.norm());
  const SpectralField lhs = apply_As(apply_As(u, 0.2), 0.35);
  const SpectralField rhs = apply_As(u, 0.55);
  CHECK((lhs.coeffs - rhs.coeffs).norm() <= 1e-12 * rhs.coeffs.norm());
  const SpectralField z{b, Eigen::VectorXd::Zero(64)};
  CHECK(apply_As(z, 0.3).coeffs.norm() == 0.0);
  CHECK(solve_As(z, 0.3).coeffs.norm() == 0.0);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(64);
  e1(0) = 1.0;
  CHECK(solve_As({b, e1}, 0.4).coeffs(0) == doctest::Approx(std::pow(pi, -0.8)).epsilon(1e-14));
}

TEST_CASE("orthonormality of the sampled basis") {
  for (const DomainSpec& d : {DomainSpec::interval(0, 2, 200), DomainSpec::rectangle(0, 1, 0, 0.6, 40)}) {
    const auto b = basis(d, d.dim() == 1 ? 100 : 60);
    const Eigen::VectorXd a = random_coeffs(b->size(), 2);
    const Eigen::VectorXd back = b->analyze(b->synthesize(a));
    CHECK((back - a).cwiseAbs().maxCoeff() < 1e-10);
    // Gram entries through the grid samples
    const Eigen::VectorXd w = trapezoid_weights(d);
    for (int i : {0, 3, b->size() - 1})
      for (int j : {0, 7, b->size() - 1}) {
        const double g = (b->sample(i).array() * b->sample(j).array() * w.array()).sum();
        CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-8);
      }
  }
}

TEST_CASE("phi matches samples and evaluate") {
  const DomainSpec d = DomainSpec::rectangle(0, 1, 0, 0.6, 32);
  const auto b = basis(d, 40);
  const Eigen::VectorXd a = random_coeffs(40, 5);
  const Eigen::VectorXd u = b->synthesize(a);
  for (Eigen::Index k : {Eigen::Index(40), Eigen::Index(500), Eigen::Index(1000)}) {
    CHECK(b->evaluate(a, d.point(k)) == doctest::Approx(u(k)).epsilon(1e-12));
    CHECK(b->phi(3, d.point(k)) == doctest::Approx(b->sample(3)(k)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(analyze(b, GridField(DomainSpec::rectangle(0, 1, 0, 1, 32), Eigen::VectorXd::Zero(33 * 33))),
                  Error);
}

TEST_CASE("interval Green function") {
  const auto b = basis(DomainSpec::interval(0, 1, 8000), 4000);
  const GreenValue g = green(*b, 0.3, pt(0.25), pt(0.75));
  CHECK(g.value == doctest::Approx(0.106809954237963).epsilon(1e-6));
  CHECK(g.tail_estimate < 1e-4);
  CHECK(green(*b, 0.2, pt(0.3), pt(0.6)).value == doctest::Approx(0.228440119686321).epsilon(1e-6));
  CHECK(green(*b, 0.3, pt(0.2), pt(0.65)).value == green(*b, 0.3, pt(0.65), pt(0.2)).value);
  CHECK_THROWS_AS(green(*b, 0.3, pt(0.4), pt(0.4)), Error);
}

TEST_CASE("interval Robin function") {
  const auto b = basis(DomainSpec::interval(0, 1, 40000), 20000);
  CHECK(robin(*b, 0.3, pt(0.5)).value == doctest::Approx(0.668590358089028).epsilon(1e-3));
  CHECK(robin(*b, 0.3, pt(0.3)).value == doctest::Approx(0.732413593656521).epsilon(1e-3));
  CHECK(robin(*b, 0.2, pt(0.5)).value == doctest::Approx(0.347662735306771).epsilon(1e-3));
  CHECK_THROWS_AS(robin(*b, 0.3, pt(0.0)), Error);
  CHECK_THROWS_AS(robin(*b, 0.3, pt(1.2)), Error);
}

TEST_CASE("rectangle Green series") {
  // Too few nodes for the lowest 4096 modes of a 1 x 0.6 rectangle.
  CHECK_THROWS_AS(build_basis(DomainSpec::rectangle(0, 1, 0, 0.6, 130), 4096), Error);
  const DomainSpec d = DomainSpec::rectangle(0, 1, 0, 0.6, 900);
  const EigenBasis coarse = build_basis(d, 16384), fine = build_basis(d, 65536);
  const GreenValue a = green(coarse, 0.4, pt(0.5, 0.3), pt(0.7, 0.3));
  const GreenValue c = green(fine, 0.4, pt(0.5, 0.3), pt(0.7, 0.3));
  CHECK(a.value == doctest::Approx(c.value).epsilon(1e-3));
  CHECK(c.tail_estimate < 1e-3);
  const GreenSeries series(fine, 0.4);
  CHECK(series(pt(0.5, 0.3), pt(0.7, 0.3)).value == c.value);
  CHECK_THROWS_AS(robin(coarse, 0.4, pt(0.02, 0.3)), Error);
}

TEST_CASE("critical points") {
  const DomainSpec d = DomainSpec::interval(0, 1, 100);
  Eigen::VectorXd v(d.size());
  for (int i = 0; i <= 100; ++i) v(i) = std::pow(d.x(i) - 0.3, 2);
  auto pts = critical_points(GridField(d, v));
  CHECK(std::abs(pts.front()(0) - 0.3) <= d.hx() + 1e-12);
  for (int i = 0; i <= 100; ++i) v(i) = d.x(i);
  CHECK_THROWS_AS(critical_points(GridField(d, v)), Error);

  const DomainSpec r = DomainSpec::rectangle(0, 1, 0, 1, 20);
  Eigen::VectorXd w(r.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = (r.point(k) - pt(0.5, 0.5)).squaredNorm();
  pts = critical_points(GridField(r, w));
  CHECK((pts.front() - pt(0.5, 0.5)).cwiseAbs().maxCoeff() <= r.hx() + 1e-12);
}

TEST_CASE("Robin critical point on the interval is the midpoint") {
  const auto b = basis(DomainSpec::interval(0, 1, 4000), 2000);
  const auto pts = robin_critical_points(*b, 0.3, DomainSpec::interval(0.1, 0.9, 40));
  CHECK(std::abs(pts.front()(0) - 0.5) <= 0.02 + 1e-12);
}
