#pragma once

#include <utility>

namespace ellmem {

// Confocal frame with foci (+-c, 0); boundary ellipse beta = theta.
struct EllipseGeometry {
  double c;
  double theta;

  double semi_major() const;
  double semi_minor() const;
  double eccentricity() const;

  static EllipseGeometry from_focal(double c, double theta);
  static EllipseGeometry from_axes(double A, double B);
  static EllipseGeometry from_eccentricity(double A, double e);
};

// Canonical form: beta >= 0, alpha in [0, 2pi); on beta = 0, alpha in [0, pi].
struct EllipticPoint {
  double alpha;
  double beta;
};

std::pair<double, double> elliptic_to_cartesian(double c, EllipticPoint p);
EllipticPoint cartesian_to_elliptic(double c, double x, double y);

// cosh^2 beta - cos^2 alpha, evaluated as sinh^2 beta + sin^2 alpha.
double metric_weight(EllipticPoint p);

EllipticPoint canonicalize(EllipticPoint p);

}  // namespace ellmem
