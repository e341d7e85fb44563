#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "ellmem/common.hpp"

namespace ellmem {

enum class CharMethod { Series, Shooting };

struct CharacteristicValue {
  double R;
  Kind kind;
  int g;
  double h;
  CharMethod method;

  double M() const { return R - 2 * h * h; }        // m' of the sin-series, M of the Taylor forms
  double m_plus() const { return R + 2 * h * h; }   // m of the cos-series
  double m_minus() const { return R - 2 * h * h; }
};

// True when P vanishes at alpha = pi/2 (otherwise P' does).
bool zero_at_half_pi(Kind kind, int g);

// Perturbation series in h^2. Throws DivergenceError when retained terms stop decreasing.
CharacteristicValue charval_series(int g, Kind kind, double h);

// Retained coefficients r_j of R = sum r_j h^{2j} used by charval_series.
std::vector<double> charval_series_coeffs(int g, Kind kind);

struct ShootOptions {
  double tol = 1e-11;
  int steps = 1024;  // over [0, pi/2]; step pi/2048
  double guess = 0;  // initial bracket centre when guess_width > 0
  double guess_width = 0;
};

CharacteristicValue charval_shoot(int g, Kind kind, double h, double tol = 1e-11);

// Characteristic value of P'' + (R - 2 q cos 2a) P = 0 for signed q (q = h^2 or -h^2).
double shoot_R(int g, Kind kind, double q, const ShootOptions& opt = {});

// Harmonic multiples and coefficients; leading cos g (sin g) coefficient is 1.
struct TrigSeriesRep {
  int g;
  Kind kind;  // Even: cosines, Odd: sines
  double h;
  double R;   // perturbation value at the retained depth
  int depth;  // highest retained power of h^2
  std::vector<std::pair<int, double>> terms;

  double eval(double alpha) const;
  double deriv(double alpha) const;
};

// Coefficients p_k[m] of the perturbation solution P = sum h^{2k} p_k, with R = sum r_k h^{2k}.
struct PerturbationTable {
  std::vector<double> r;
  std::vector<std::vector<double>> p;  // p[k][m], m = harmonic index
};
PerturbationTable perturbation_table(int g, Kind kind, int depth);

TrigSeriesRep trig_series(int g, Kind kind, double h);

enum class PowerVariable { Nu, NuPrime };

struct PowerSeriesRep {
  PowerVariable variable;
  bool odd;                    // powers x, x^3, ... instead of 1, x^2, ...
  std::vector<double> coeffs;  // coeffs[s] multiplies x^{2s} or x^{2s+1}
  int n_terms() const { return static_cast<int>(coeffs.size()); }

  // Partial sum and d/dx with the truncation rule; throws ConvergenceError at the cap.
  std::pair<double, double> eval(double x, double tol = 1e-17) const;
  // Coefficients below rel_floor * max are rounding noise of the recurrence and skipped.
  int sign_variations(double rel_floor = 1e-12) const;
};

inline constexpr int kSeriesCap = 200;

PowerSeriesRep power_coeffs(const CharacteristicValue& cv, PowerVariable var, int n);

struct TaylorAlphaRep {
  Kind kind;
  std::vector<double> coeffs;  // coeffs[n] of alpha^n, leading term 1
  double norm;                 // B' (odd) or D' (even)
  double eval(double alpha) const;  // unnormalized
};

TaylorAlphaRep taylor_alpha(const CharacteristicValue& cv, int n);

// Odd: P(pi). Even: P'(pi). Taylor-in-alpha with unit leading term.
double periodicity_residual(double h, double R_trial, Kind kind);

struct MatchResult {
  double A;       // A * (cos-series) = sin-series, at 45 deg
  double spread;  // max relative deviation of the 30 and 60 deg values
};
MatchResult match_factor(const CharacteristicValue& cv);

// Normalized angular eigenfunction evaluated from the two power series.
class AngularFunction {
 public:
  explicit AngularFunction(const CharacteristicValue& cv);

  const CharacteristicValue& cv() const { return cv_; }
  double operator()(double alpha) const { return eval(alpha).first; }
  std::pair<double, double> eval(double alpha) const;  // (P, dP/dalpha)

  // P'(0) for odd kind, P(0) for even kind.
  double origin_constant() const;
  double match() const { return match_.A; }
  double match_spread() const { return match_.spread; }
  double sin_scale() const { return cs_; }
  const PowerSeriesRep& nu_series() const { return nu_; }
  const PowerSeriesRep& nu_prime_series() const { return nup_; }

  std::vector<double> roots(double lo, double hi, int samples_per_pi = 4096) const;

 private:
  std::pair<double, double> eval_quadrant(double a) const;

  CharacteristicValue cv_;
  PowerSeriesRep nu_;
  PowerSeriesRep nup_;
  MatchResult match_;
  double cs_ = 1;  // scale of the sin-series part
};

double angular_eval(const CharacteristicValue& cv, double alpha);

int count_roots(const CharacteristicValue& cv, double lo, double hi);

// Roots of a sampled-then-bisected function on [lo, hi).
template <class F>
std::vector<double> scan_roots(const F& f, double lo, double hi, int n);

}  // namespace ellmem

#include "ellmem/detail/scan_roots.hpp"
