#pragma once

#include <vector>

#include "ellmem/angular.hpp"
#include "ellmem/coords.hpp"

namespace ellmem {

// Coefficients of beta^n (or eps^n); leading coefficient 1, scaled by norm (B or D).
struct RadialTaylor {
  Kind kind;  // Odd: vanishes at 0
  std::vector<double> coeffs;
  double norm = 1;
  double A0 = 0;  // constant part of the potential

  double derivative(int k) const;  // unnormalized d^k/dx^k at 0
  // Unnormalized partial sum and derivative; throws ConvergenceError at the cap.
  std::pair<double, double> eval(double x) const;
};

struct RadialValue {
  double Q;
  double dQ_dbeta;
};

RadialTaylor radial_taylor_coeffs(const CharacteristicValue& cv, int n);

// Radial companion of an angular function: Q1 = -i P1(i beta), Q2 = P2(i beta).
class RadialFunction {
 public:
  RadialFunction(const CharacteristicValue& cv, double norm);
  explicit RadialFunction(const AngularFunction& P);

  RadialValue operator()(double beta) const { return eval(beta); }
  RadialValue eval(double beta) const;

  RadialValue taylor(double beta) const;      // series about beta = 0
  RadialValue rho_series(double beta) const;  // sinh(beta) < 1 only
  RadialValue ode(double beta) const;         // integration from beta = 0

  double norm() const { return norm_; }
  double handoff() const { return handoff_; }
  const CharacteristicValue& cv() const { return cv_; }

  // Zeros in (lo, hi), refined to ~1e-13.
  std::vector<double> roots(double lo, double hi, int samples = 2048) const;

 private:
  CharacteristicValue cv_;
  double norm_;
  RadialTaylor taylor_;
  PowerSeriesRep rho_;
  double handoff_;
  RadialValue at_handoff_;
};

RadialValue radial_eval(const CharacteristicValue& cv, double beta, const EllipseGeometry& geometry);

// Exact lambda = 0 solutions in terms of the semi-minor coordinate rho' = c sinh beta.
double radial_static(int g, Kind kind, double c, double rho_prime);

// Approximate large-argument form C z^n sum (-1)^j (lambda z)^{2j} / (j! (n+1)...(n+j)),
// z = c e^beta / 2, n = sqrt(R), with C = 1. Never used for solving.
double bessel_form(const CharacteristicValue& cv, double c, double beta);

// Solution of Q'' = [R - f^2 (e^{2e} + q e^{-2e})] Q with Q(0) = 0, Q'(0) = 1.
RadialTaylor annulus_taylor(double f, double q, double R, int n);

struct AnnulusParam {
  double a;      // c e^{theta_inner} / 2
  double q_ann;  // c^2 / (4 a^2)
  double f;      // 2 lambda a
  double eps0;   // log(2a/c); eps = beta - eps0
  double epsilon(double beta) const { return beta - eps0; }
};

AnnulusParam annulus_from_geometry(double c, double theta_inner, double lambda);

}  // namespace ellmem
