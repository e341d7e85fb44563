#pragma once

#include <memory>
#include <vector>

#include "ellmem/angular.hpp"
#include "ellmem/coords.hpp"
#include "ellmem/radial.hpp"

namespace ellmem {

struct ModeSpec {
  Kind kind;
  int g;
  int i;  // 1-based rank of lambda within (kind, g)

  auto operator<=>(const ModeSpec&) const = default;
};

struct MembraneMaterial {
  double wave_speed;  // m, with m^2 = tension / density
};

struct MembraneMode {
  ModeSpec spec;
  double lambda;
  CharacteristicValue cv;
  EllipseGeometry geometry;
  std::shared_ptr<const AngularFunction> P;
  std::shared_ptr<const RadialFunction> Q;
  double boundary_residual;  // |Q(theta)| / max |Q| on [0, theta]

  // Displacement shape P(alpha) Q(beta); negative beta by the parity of Q.
  double shape(double alpha, double beta) const;
};

struct SpectrumOptions {
  double tol = 1e-10;
  double scan_ceiling = 0;  // lambda ceiling; 0 selects an estimate from the mode indices
};

// Characteristic value at h, memoized on h quantized to 1e-12.
CharacteristicValue cached_charval(int g, Kind kind, double h);

// Q(theta) for unit data at beta = 0, as a function of lambda.
double boundary_value(const EllipseGeometry& geometry, Kind kind, int g, double lambda);

MembraneMode find_lambda(const EllipseGeometry& geometry, Kind kind, int g, int i,
                         double tol = 1e-10);

// First n roots of one (kind, g) family, sharing the scan.
std::vector<MembraneMode> find_lambdas(const EllipseGeometry& geometry, Kind kind, int g, int n,
                                       const SpectrumOptions& opt = {});

MembraneMode make_mode(const EllipseGeometry& geometry, ModeSpec spec, double lambda);

double frequency(double lambda, const MembraneMaterial& material);

struct CircleMode {
  int n;
  int s;
  double tau;     // s-th root of the boundary series in tau = lambda * radius
  double lambda;  // tau / radius
};

std::vector<CircleMode> circle_modes(double radius, int n, int count);

// Ascending boundary series sum (-1)^k tau^{2k} / (k! (n+k)!), evaluated with a tail bound.
struct SeriesValue {
  double value;
  double bound;  // absolute error bound
};
SeriesValue circle_series(int n, double tau);

double degenerate_pair_gap(const EllipseGeometry& geometry, int g, int i);

struct AnnulusMode {
  ModeSpec spec;
  double lambda;
  CharacteristicValue cv;
  AnnulusParam param;
  double eps_outer;
  double boundary_residual;
  std::vector<double> interior_zeros;  // in eps, strictly between the contours
};

// Q(eps_outer) for the solution vanishing on the inner contour.
double annulus_boundary_value(double c, double theta_inner, double theta_outer, Kind kind, int g,
                              double lambda);

AnnulusMode annulus_find_lambda(double c, double theta_inner, double theta_outer, Kind kind, int g,
                                int i, double tol = 1e-10);

// Finite-difference dR/dh - 4h by shooting.
double charval_slope_check(int g, Kind kind, double h, double dh = 1e-4);

}  // namespace ellmem
