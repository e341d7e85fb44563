#include "ellmem/radial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ellmem/ode.hpp"

namespace ellmem {

namespace {

constexpr int kRadialTerms = 200;

// Leading-one Taylor coefficients of Q'' = T Q with T = sum t_j x^j.
std::vector<double> taylor_from_potential(const std::vector<double>& t, Kind kind, int n) {
  std::vector<double> c(n + 2, 0);
  if (kind == Kind::Odd)
    c[1] = 1;
  else
    c[0] = 1;
  for (int k = 0; k + 2 < n; ++k) {
    double acc = 0;
    for (int j = 0; j <= k && j < static_cast<int>(t.size()); ++j) acc += t[j] * c[k - j];
    c[k + 2] = acc / ((k + 2.0) * (k + 1.0));
    if (!std::isfinite(c[k + 2]) || std::abs(c[k + 2]) > 1e300)
      throw NumericError("radial Taylor coefficient overflow");
  }
  c.resize(n);
  return c;
}

}  // namespace

double RadialTaylor::derivative(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs.size())) throw DomainError("derivative order out of range");
  return coeffs[k] * std::tgamma(k + 1.0);
}

std::pair<double, double> RadialTaylor::eval(double x) const {
  double sum = 0, dsum = 0, pw = 1, prev = 0, scale = 0;
  int small = 0;
  const int first = kind == Kind::Odd ? 1 : 0;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    double t = coeffs[n] * pw;
    if (n > 0) dsum += n * coeffs[n] * prev;
    sum += t;
    if ((static_cast<int>(n) - first) % 2 == 0) {
      scale = std::max({scale, std::abs(sum), std::abs(t)});
      small = std::abs(t) <= 1e-17 * scale ? small + 1 : 0;
      if (small >= 3) return {sum, dsum};
    }
    prev = pw;
    pw *= x;
  }
  throw ConvergenceError("Taylor series not converged within " + std::to_string(coeffs.size()) +
                         " terms");
}

RadialTaylor radial_taylor_coeffs(const CharacteristicValue& cv, int n) {
  if (n < 2) throw DomainError("Taylor series needs n >= 2");
  const double q = cv.h * cv.h;
  // T = R - 2q cosh 2b
  std::vector<double> t(n, 0);
  double f = 1;
  for (int j = 0; j < n; j += 2) {
    if (j > 0) f *= 4.0 / (double(j) * (j - 1));
    t[j] = -2 * q * f;
  }
  t[0] += cv.R;
  RadialTaylor rep;
  rep.kind = cv.kind;
  rep.coeffs = taylor_from_potential(t, cv.kind, n);
  rep.A0 = cv.R - 2 * q;
  return rep;
}

RadialTaylor annulus_taylor(double f, double q, double R, int n) {
  require_finite(f, "f");
  require_finite(q, "q");
  require_finite(R, "R");
  if (q < 0 || q > 1) throw DomainError("annulus q must lie in [0, 1]");
  if (n < 2) throw DomainError("Taylor series needs n >= 2");
  std::vector<double> t(n, 0);
  double p = 1;  // 2^j / j!
  for (int j = 0; j < n; ++j) {
    if (j > 0) p *= 2.0 / j;
    t[j] = -f * f * p * (1 + ((j % 2 == 0) ? q : -q));
  }
  t[0] += R;
  RadialTaylor rep;
  rep.kind = Kind::Odd;
  rep.coeffs = taylor_from_potential(t, Kind::Odd, n);
  rep.A0 = t[0];
  return rep;
}

RadialFunction::RadialFunction(const CharacteristicValue& cv, double norm)
    : cv_(cv), norm_(norm), taylor_(radial_taylor_coeffs(cv, kRadialTerms)) {
  taylor_.norm = norm;
  auto nup = power_coeffs(cv, PowerVariable::NuPrime, kSeriesCap);
  for (std::size_t s = 1; s < nup.coeffs.size(); s += 2) nup.coeffs[s] = -nup.coeffs[s];
  rho_ = nup;
  const double q = cv.h * cv.h;
  const double b08 = std::asinh(0.8);
  double S = std::max({std::abs(cv.R), 2 * q * std::cosh(2 * b08), 1.0});
  handoff_ = std::min(b08, 3.0 / std::sqrt(S));
  auto [v, d] = taylor_.eval(handoff_);
  at_handoff_ = {norm_ * v, norm_ * d};
}

RadialFunction::RadialFunction(const AngularFunction& P) : RadialFunction(P.cv(), P.origin_constant()) {}

RadialValue RadialFunction::taylor(double beta) const {
  auto [v, d] = taylor_.eval(beta);
  return {norm_ * v, norm_ * d};
}

RadialValue RadialFunction::rho_series(double beta) const {
  double u = std::sinh(beta);
  if (!(std::abs(u) < 1)) throw DomainError("rho' series requires rho' < c");
  auto [v, d] = rho_.eval(u);
  return {norm_ * v, norm_ * d * std::cosh(beta)};
}

RadialValue RadialFunction::ode(double beta) const {
  auto pot = Potential::radial(cv_.R, cv_.h * cv_.h);
  OdeState s0 = cv_.kind == Kind::Odd ? OdeState{0, norm_} : OdeState{norm_, 0};
  auto s = integrate(pot, 0, beta, s0, radial_steps(pot, 0, beta));
  return {s.y, s.dy};
}

RadialValue RadialFunction::eval(double beta) const {
  require_finite(beta, "beta");
  if (beta < 0) throw DomainError("beta must be >= 0");
  if (beta <= handoff_) return taylor(beta);
  auto pot = Potential::radial(cv_.R, cv_.h * cv_.h);
  auto s = integrate(pot, handoff_, beta, {at_handoff_.Q, at_handoff_.dQ_dbeta},
                     radial_steps(pot, handoff_, beta));
  return {s.y, s.dy};
}

std::vector<double> RadialFunction::roots(double lo, double hi, int samples) const {
  auto all = scan_roots([this](double b) { return eval(b).Q; }, lo, hi, samples);
  std::vector<double> out;
  for (double r : all)
    if (r > lo + 1e-12 && r < hi - 1e-9 * std::max(1.0, hi)) out.push_back(r);
  return out;
}

RadialValue radial_eval(const CharacteristicValue& cv, double beta, const EllipseGeometry& geometry) {
  if (!(geometry.c > 0)) throw DomainError("focal half-distance must be > 0");
  AngularFunction P(cv);
  return RadialFunction(P).eval(beta);
}

double radial_static(int g, Kind kind, double c, double rho_prime) {
  if (g < 0 || (kind == Kind::Odd && g < 1)) throw DomainError("invalid order for kind");
  require_finite(c, "c");
  require_finite(rho_prime, "rho'");
  if (c < 0) throw DomainError("c must be >= 0");
  if (rho_prime < 0) throw DomainError("rho' must be >= 0");
  double w = rho_prime + std::hypot(rho_prime, c);
  double tail = std::pow(c, 2 * g) / std::pow(w, g);
  double head = std::pow(w, g);
  return kind == Kind::Odd ? head - tail : head + tail;
}

double bessel_form(const CharacteristicValue& cv, double c, double beta) {
  if (!(cv.R > 0)) throw DomainError("Bessel form needs R > 0");
  if (!(c > 0)) throw DomainError("c must be > 0");
  const double n = std::sqrt(cv.R);
  const double z = c * std::exp(beta) / 2;
  const double lz2 = std::pow(cv.h / c * z, 2);
  double term = 1, sum = 1;
  for (int j = 1; j < 500; ++j) {
    term *= -lz2 / (j * (n + j));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && j > lz2) return std::pow(z, n) * sum;
  }
  throw ConvergenceError("Bessel-form series did not converge");
}

AnnulusParam annulus_from_geometry(double c, double theta_inner, double lambda) {
  require_finite(c, "c");
  require_finite(theta_inner, "theta_inner");
  require_finite(lambda, "lambda");
  if (!(c > 0)) throw DomainError("c must be > 0");
  if (theta_inner < 0) throw DomainError("theta_inner must be >= 0");
  if (lambda < 0) throw DomainError("lambda must be >= 0");
  // a = rho/2 + sqrt(rho^2 - c^2)/2 with rho = c cosh(theta_inner)
  double a = c * std::exp(theta_inner) / 2;
  return {a, std::exp(-2 * theta_inner), 2 * lambda * a, theta_inner};
}

}  // namespace ellmem
