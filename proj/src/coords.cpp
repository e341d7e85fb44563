#include "ellmem/coords.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "ellmem/common.hpp"

namespace ellmem {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSnap = 1e-14;
}  // namespace

double EllipseGeometry::semi_major() const { return c * std::cosh(theta); }
double EllipseGeometry::semi_minor() const { return c * std::sinh(theta); }
double EllipseGeometry::eccentricity() const { return 1.0 / std::cosh(theta); }

EllipseGeometry EllipseGeometry::from_focal(double c, double theta) {
  require_finite(c, "focal distance");
  require_finite(theta, "boundary parameter");
  if (c <= 0) throw DomainError("focal half-distance must be > 0");
  if (theta <= 0) throw DomainError("boundary parameter must be > 0");
  return {c, theta};
}

EllipseGeometry EllipseGeometry::from_axes(double A, double B) {
  require_finite(A, "semi-major axis");
  require_finite(B, "semi-minor axis");
  if (!(A > B && B > 0)) throw DomainError("semi-axes must satisfy A > B > 0");
  // tanh theta = B/A, c^2 = A^2 - B^2.
  double c = std::sqrt((A - B) * (A + B));
  return {c, std::atanh(B / A)};
}

EllipseGeometry EllipseGeometry::from_eccentricity(double A, double e) {
  require_finite(A, "semi-major axis");
  require_finite(e, "eccentricity");
  if (A <= 0 || !(e > 0 && e < 1)) throw DomainError("need A > 0 and 0 < e < 1");
  return {A * e, std::acosh(1.0 / e)};
}

EllipticPoint canonicalize(EllipticPoint p) {
  require_finite(p.alpha, "alpha");
  require_finite(p.beta, "beta");
  if (p.beta < 0) p = {-p.alpha, -p.beta};
  double a = std::fmod(p.alpha, kTwoPi);
  if (a < 0) a += kTwoPi;
  if (a >= kTwoPi) a = 0;
  if (p.beta == 0 && a > std::numbers::pi) a = kTwoPi - a;
  return {a, p.beta};
}

std::pair<double, double> elliptic_to_cartesian(double c, EllipticPoint p) {
  require_finite(c, "focal distance");
  require_finite(p.alpha, "alpha");
  require_finite(p.beta, "beta");
  if (c <= 0) throw DomainError("focal half-distance must be > 0");
  return {c * std::cosh(p.beta) * std::cos(p.alpha), c * std::sinh(p.beta) * std::sin(p.alpha)};
}

EllipticPoint cartesian_to_elliptic(double c, double x, double y) {
  require_finite(c, "focal distance");
  require_finite(x, "x");
  require_finite(y, "y");
  if (c <= 0) throw DomainError("focal half-distance must be > 0; use the circle solver for c = 0");
  if (std::abs(y) <= kSnap * c && std::abs(x) <= c) {
    return {std::acos(std::clamp(x / c, -1.0, 1.0)), 0.0};
  }
  // x + iy = c cosh(beta + i alpha)
  std::complex<double> w = std::acosh(std::complex<double>(x / c, y / c));
  return canonicalize({w.imag(), w.real()});
}

double metric_weight(EllipticPoint p) {
  double sb = std::sinh(p.beta);
  // reduce so that sin vanishes exactly at multiples of pi
  double sa = std::sin(p.alpha - std::numbers::pi * std::round(p.alpha / std::numbers::pi));
  return sb * sb + sa * sa;
}

}  // namespace ellmem
