#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ellmem/spectrum.hpp"

namespace ellmem {

struct VelocityField {
  std::function<double(EllipticPoint)> phi;
  std::string smoothness_hint = "analytic";  // anything else relaxes quadrature agreement to 1e-6
  bool vanishes_on_boundary = true;
};

// Gauss-Legendre nodes and weights on [a, b]; n in {16, 32, ..., 512}.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b);

// F1 odd in alpha (first kind), F2 even in alpha (second kind).
// Rejects fields violating phi(-alpha, -beta) = phi(alpha, beta) on a sample grid.
std::pair<VelocityField, VelocityField> split_even_odd(const VelocityField& field,
                                                       const EllipseGeometry& geometry);

// The four one-dimensional integrals of a mode pair.
struct PairIntegrals {
  double PP;       // int_0^{2pi} Pa Pb
  double PPcos;    // int_0^{2pi} Pa Pb cos 2a
  double QQ;       // int_0^theta Qa Qb
  double QQcosh;   // int_0^theta Qa Qb cosh 2b
  double weighted() const { return PP * QQcosh - PPcos * QQ; }
};
PairIntegrals pair_integrals(const MembraneMode& a, const MembraneMode& b, int quad_order = 64);

// int int (cosh 2b - cos 2a) Pa Pb Qa Qb over [0, 2pi] x [0, theta], with order doubling
// until successive values agree to 1e-9 relative to the norms.
double inner_product(const MembraneMode& a, const MembraneMode& b, int quad_order = 64);

struct ModalTerm {
  MembraneMode mode;
  double coeff;
};

struct ModalExpansion {
  std::map<ModeSpec, double> odd_coeffs;
  std::map<ModeSpec, double> even_coeffs;
  std::vector<ModalTerm> terms;
  double residual_norm = 0;  // weighted L2, relative to the field
};

ModalExpansion expand_velocity(const VelocityField& field, const std::vector<MembraneMode>& modes,
                               const MembraneMaterial& material, int quad_order = 64);

// w = sum a P Q sin(2 lambda m t).
double evaluate_motion(const ModalExpansion& expansion, EllipticPoint p, double t,
                       const MembraneMaterial& material);
// dw/dt.
double evaluate_velocity(const ModalExpansion& expansion, EllipticPoint p, double t,
                         const MembraneMaterial& material);

// Velocity samples on a regular (alpha, beta) grid with bicubic interpolation,
// periodic in alpha. CSV columns: alpha,beta,value.
VelocityField field_from_csv(const std::string& text);

// Built-in analytic fields vanishing on the boundary ellipse.
VelocityField builtin_field(const std::string& name, const EllipseGeometry& geometry);

}  // namespace ellmem
