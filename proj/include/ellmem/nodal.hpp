#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ellmem/spectrum.hpp"

namespace ellmem {

struct NodalGeometry {
  std::vector<double> hyperbolic_alphas;  // roots of P in [0, pi)
  bool includes_major_axis = false;       // alpha = 0 is a root
  bool includes_minor_axis = false;       // alpha = pi/2 is a root
  std::vector<double> ellipse_betas;      // roots of Q in (0, theta)
  std::vector<std::pair<double, double>> ellipse_axes;  // (c cosh b, c sinh b)
  int counted_hyperbolic_lines = 0;
};

// An axis counts as one line; each remaining root in [0, pi) is one line, so a full
// hyperbola (roots alpha and pi - alpha) counts as two.
NodalGeometry hyperbolic_nodal_angles(const MembraneMode& mode);

// Zeros of Q in (0, theta); throws NumericError unless there are exactly i - 1.
std::vector<double> nodal_ellipses(const MembraneMode& mode);

NodalGeometry nodal_geometry(const MembraneMode& mode);

using Polyline = std::vector<std::pair<double, double>>;

struct SuperposedNodal {
  std::vector<double> alpha_roots;         // roots of A P1 + B P2 in [0, pi)
  std::vector<double> ellipse_betas_even;  // Q2 zeros
  std::vector<double> ellipse_betas_odd;   // Q1 zeros
  std::vector<Polyline> level_set;         // Cartesian polylines of the combined field
  bool axis_symmetric;                     // false once both A and B are nonzero
  int pi_shift_sign;                       // field(alpha + pi) = sign * field(alpha)
  double gap;                              // relative lambda gap of the pair
};

struct SuperposeOptions {
  int grid = 512;
  double max_gap = 0.05;
};

// Zero set of A P1 Q1 + B P2 Q2 for a near-degenerate (even, odd) pair of the same (g, i).
SuperposedNodal superposed_nodal(const MembraneMode& mode_even, const MembraneMode& mode_odd, double A,
                                 double B, const SuperposeOptions& opt = {});

std::string nodal_svg(const EllipseGeometry& geometry, const NodalGeometry& nodal);
std::string nodal_csv(const NodalGeometry& nodal);
void export_nodal_svg(const EllipseGeometry& geometry, const NodalGeometry& nodal,
                      const std::string& path);

}  // namespace ellmem
