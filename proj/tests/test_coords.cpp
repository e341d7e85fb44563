#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ellmem/common.hpp"
#include "ellmem/coords.hpp"

using namespace ellmem;
using std::numbers::pi;

TEST_CASE("geometry constructors agree") {
  auto g = EllipseGeometry::from_axes(5, 3);
  CHECK(g.c == doctest::Approx(4));
  CHECK(g.semi_major() == doctest::Approx(5));
  CHECK(g.semi_minor() == doctest::Approx(3));
  CHECK(g.eccentricity() == doctest::Approx(0.8));
  auto h = EllipseGeometry::from_eccentricity(5, 0.8);
  CHECK(h.c == doctest::Approx(g.c));
  CHECK(h.theta == doctest::Approx(g.theta));
  auto f = EllipseGeometry::from_focal(1, 0.5);
  CHECK(f.semi_major() > f.semi_minor());
  CHECK(f.eccentricity() > 0);
  CHECK(f.eccentricity() < 1);
  CHECK_THROWS_AS(EllipseGeometry::from_axes(3, 5), DomainError);
  CHECK_THROWS_AS(EllipseGeometry::from_focal(0, 1), DomainError);
  CHECK_THROWS_AS(EllipseGeometry::from_eccentricity(1, 1), DomainError);
}

TEST_CASE("elliptic to Cartesian") {
  auto [x0, y0] = elliptic_to_cartesian(1, {0, 0});
  CHECK(x0 == 1);
  CHECK(y0 == 0);
  auto [x1, y1] = elliptic_to_cartesian(1, {pi / 2, 0});
  CHECK(std::abs(x1) < 1e-16);
  CHECK(y1 == 0);
  auto [x2, y2] = elliptic_to_cartesian(1, {pi / 3, 1});
  CHECK(x2 == doctest::Approx(0.7715403174076219).epsilon(1e-9));
  CHECK(y2 == doctest::Approx(1.0177540882533274).epsilon(1e-9));
  CHECK_THROWS_AS(elliptic_to_cartesian(1, {std::numeric_limits<double>::quiet_NaN(), 0}), DomainError);
  CHECK_THROWS_AS(elliptic_to_cartesian(-1, {0, 0}), DomainError);
}

TEST_CASE("Cartesian to elliptic") {
  auto f = cartesian_to_elliptic(1, 1, 0);
  CHECK(f.alpha == 0);
  CHECK(f.beta == 0);
  auto o = cartesian_to_elliptic(1, 0, 0);
  CHECK(o.alpha == doctest::Approx(pi / 2));
  CHECK(o.beta == 0);
  auto snapped = cartesian_to_elliptic(1, 0.3, 1e-16);
  CHECK(snapped.beta == 0);
  CHECK_THROWS_AS(cartesian_to_elliptic(0, 1, 1), DomainError);

  auto [x, y] = elliptic_to_cartesian(1, {2.1, 0.7});
  auto back = cartesian_to_elliptic(1, x, y);
  CHECK(back.alpha == doctest::Approx(2.1).epsilon(1e-12));
  CHECK(back.beta == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("round trip over the plane") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int k = 0; k < 2000; ++k) {
    double x = u(rng), y = u(rng);
    auto p = cartesian_to_elliptic(1.3, x, y);
    CHECK(p.beta >= 0);
    CHECK(p.alpha >= 0);
    CHECK(p.alpha < 2 * pi);
    auto [xr, yr] = elliptic_to_cartesian(1.3, p);
    double scale = std::max(1.0, std::hypot(x, y));
    CHECK(std::abs(xr - x) < 1e-12 * scale);
    CHECK(std::abs(yr - y) < 1e-12 * scale);
  }
}

TEST_CASE("canonical form") {
  auto a = canonicalize({-0.4, -0.9});
  auto b = canonicalize({0.4, 0.9});
  CHECK(a.alpha == doctest::Approx(b.alpha));
  CHECK(a.beta == doctest::Approx(b.beta));
  auto [xa, ya] = elliptic_to_cartesian(1, {-0.4, -0.9});
  auto [xb, yb] = elliptic_to_cartesian(1, {0.4, 0.9});
  CHECK(xa == doctest::Approx(xb));
  CHECK(ya == doctest::Approx(yb));
  auto seg = canonicalize({5.0, 0});
  CHECK(seg.alpha <= pi);
  CHECK(std::cos(seg.alpha) == doctest::Approx(std::cos(5.0)));
}

TEST_CASE("level sets") {
  // beta = const is an ellipse with foci (+-c, 0)
  const double c = 1.7, b = 0.6;
  for (double a : {0.0, 0.8, 2.0, 4.0}) {
    auto [x, y] = elliptic_to_cartesian(c, {a, b});
    double d = std::hypot(x - c, y) + std::hypot(x + c, y);
    CHECK(d == doctest::Approx(2 * c * std::cosh(b)));
  }
  // alpha = const lies on a hyperbola with the same foci
  for (double beta : {0.1, 0.5, 1.5}) {
    auto [x, y] = elliptic_to_cartesian(c, {0.9, beta});
    double d = std::hypot(x + c, y) - std::hypot(x - c, y);
    CHECK(d == doctest::Approx(2 * c * std::cos(0.9)));
  }
}

TEST_CASE("metric weight") {
  CHECK(metric_weight({0, 0}) == 0);
  CHECK(metric_weight({pi, 0}) == 0);
  CHECK(metric_weight({pi / 2, 0}) == doctest::Approx(1));
  double want = std::pow(std::cosh(0.4), 2) - std::pow(std::cos(0.3), 2);
  CHECK(metric_weight({0.3, 0.4}) == doctest::Approx(want).epsilon(1e-14));
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0, 3);
  for (int k = 0; k < 200; ++k) {
    double a = u(rng), b = u(rng);
    double w = metric_weight({a, b});
    CHECK(w >= 0);
    CHECK(metric_weight({-a, -b}) == doctest::Approx(w).epsilon(1e-14));
    CHECK(metric_weight({pi - a, b}) == doctest::Approx(w).epsilon(1e-12));
  }
}
