#pragma once

#include <vector>

namespace ellmem {

// y'' = s(x) y for the three separated equations.
//   angular: s = -(R - 2q cos 2x)
//   radial:  s = R - 2q cosh 2x
//   annulus: s = R - f2 (e^{2x} + kappa e^{-2x})
struct Potential {
  enum class Form { Angular, Radial, Annulus };
  Form form;
  double R;
  double q;
  double f2 = 0;
  double kappa = 0;

  static Potential angular(double R, double q) { return {Form::Angular, R, q}; }
  static Potential radial(double R, double q) { return {Form::Radial, R, q}; }
  static Potential annulus(double R, double f, double kappa) {
    return {Form::Annulus, R, 0, f * f, kappa};
  }

  double value(double x) const;
  // out[j] = s^{(j)}(x0) t^j / j!, j < n.
  void scaled_coeffs(double x0, double t, double* out, int n) const;
};

struct OdeState {
  double y;
  double dy;
};

inline constexpr int kTaylorOrder = 20;

OdeState taylor_step(const Potential& pot, double x0, double t, OdeState s, int order = kTaylorOrder);

// nsteps equal steps from x0 to x1 (x1 < x0 allowed).
OdeState integrate(const Potential& pot, double x0, double x1, OdeState s, int nsteps,
                   int order = kTaylorOrder);

// Samples at x0 + k (x1 - x0)/nsteps, k = 0..nsteps.
std::vector<OdeState> integrate_sampled(const Potential& pot, double x0, double x1, OdeState s,
                                        int nsteps, int order = kTaylorOrder);

// Unwrapped phase atan2(y, y') at x1, continuous from theta0 at x0.
double integrate_phase(const Potential& pot, double x0, double x1, OdeState s, double theta0,
                       int nsteps, int order = kTaylorOrder);

// Step count keeping sqrt(max|s|)*step below 0.25 on [x0, x1].
int radial_steps(const Potential& pot, double x0, double x1);

}  // namespace ellmem
