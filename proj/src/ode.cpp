#include "ellmem/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "ellmem/common.hpp"

namespace ellmem {

namespace {
constexpr int kMaxOrder = 40;
}

double Potential::value(double x) const {
  switch (form) {
    case Form::Angular:
      return -(R - 2 * q * std::cos(2 * x));
    case Form::Radial:
      return R - 2 * q * std::cosh(2 * x);
    case Form::Annulus:
      return R - f2 * (std::exp(2 * x) + kappa * std::exp(-2 * x));
  }
  return 0;
}

void Potential::scaled_coeffs(double x0, double t, double* out, int n) const {
  double c0, c1;
  switch (form) {
    case Form::Angular:
      c0 = std::cos(2 * x0);
      c1 = std::sin(2 * x0);
      break;
    case Form::Radial:
      c0 = std::cosh(2 * x0);
      c1 = std::sinh(2 * x0);
      break;
    case Form::Annulus:
      c0 = std::exp(2 * x0);
      c1 = kappa * std::exp(-2 * x0);
      break;
  }
  double pw = 1;  // (2t)^j / j!
  for (int j = 0; j < n; ++j) {
    double v = 0;
    switch (form) {
      case Form::Angular: {
        // d^j/dx^j cos(2x) cycles c, -s, -c, s
        static constexpr std::array<int, 4> sc{1, -1, -1, 1};
        double d = (j % 2 == 0) ? c0 : c1;
        v = 2 * q * sc[j % 4] * d * pw;
        if (j == 0) v -= R;
        break;
      }
      case Form::Radial:
        v = -2 * q * ((j % 2 == 0) ? c0 : c1) * pw;
        if (j == 0) v += R;
        break;
      case Form::Annulus:
        v = -f2 * (c0 + ((j % 2 == 0) ? c1 : -c1)) * pw;
        if (j == 0) v += R;
        break;
    }
    out[j] = v;
    pw *= 2 * t / (j + 1);
  }
}

OdeState taylor_step(const Potential& pot, double x0, double t, OdeState s, int order) {
  order = std::clamp(order, 4, kMaxOrder);
  std::array<double, kMaxOrder + 1> sig{};
  std::array<double, kMaxOrder + 1> u{};
  pot.scaled_coeffs(x0, t, sig.data(), order - 1);
  u[0] = s.y;
  u[1] = s.dy * t;
  const double t2 = t * t;
  for (int n = 0; n + 2 <= order; ++n) {
    double acc = 0;
    for (int j = 0; j <= n; ++j) acc += sig[j] * u[n - j];
    u[n + 2] = t2 * acc / ((n + 2.0) * (n + 1.0));
  }
  double y = 0, dy = 0;
  for (int n = order; n >= 0; --n) {
    y += u[n];
    dy += n * u[n];
  }
  return {y, t != 0 ? dy / t : s.dy};
}

OdeState integrate(const Potential& pot, double x0, double x1, OdeState s, int nsteps, int order) {
  if (nsteps < 1) nsteps = 1;
  const double t = (x1 - x0) / nsteps;
  for (int k = 0; k < nsteps; ++k) s = taylor_step(pot, x0 + k * t, t, s, order);
  return s;
}

std::vector<OdeState> integrate_sampled(const Potential& pot, double x0, double x1, OdeState s,
                                        int nsteps, int order) {
  if (nsteps < 1) nsteps = 1;
  std::vector<OdeState> out;
  out.reserve(nsteps + 1);
  out.push_back(s);
  const double t = (x1 - x0) / nsteps;
  for (int k = 0; k < nsteps; ++k) {
    s = taylor_step(pot, x0 + k * t, t, s, order);
    out.push_back(s);
  }
  return out;
}

double integrate_phase(const Potential& pot, double x0, double x1, OdeState s, double theta0,
                       int nsteps, int order) {
  if (nsteps < 1) nsteps = 1;
  const double t = (x1 - x0) / nsteps;
  double theta = theta0;
  for (int k = 0; k < nsteps; ++k) {
    s = taylor_step(pot, x0 + k * t, t, s, order);
    double raw = std::atan2(s.y, s.dy);
    double d = raw - std::remainder(theta, 2 * std::numbers::pi);
    theta += std::remainder(d, 2 * std::numbers::pi);
    // keep the state O(1)
    double nrm = std::hypot(s.y, s.dy);
    if (nrm > 1e100 || nrm < 1e-100) s = {s.y / nrm, s.dy / nrm};
  }
  return theta;
}

int radial_steps(const Potential& pot, double x0, double x1) {
  double smax = std::max(std::abs(pot.value(x0)), std::abs(pot.value(x1)));
  smax = std::max({smax, std::abs(pot.R), 1.0});
  double len = std::abs(x1 - x0);
  double step = std::min(0.02, 0.25 / std::sqrt(smax));
  return std::max(1, static_cast<int>(std::ceil(len / step)));
}

}  // namespace ellmem
