#include "ellmem/angular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "ellmem/ode.hpp"

namespace ellmem {

namespace {

constexpr double kPi = std::numbers::pi;

void check_mode(int g, Kind kind) {
  if (g < 0) throw DomainError("order g must be >= 0");
  if (kind == Kind::Odd && g < 1) throw DomainError("odd kind requires g >= 1");
}

void check_h(double h) {
  require_finite(h, "h");
  if (h < 0) throw DomainError("h must be >= 0");
}

// Closed-form coefficients of h^4, h^8, h^12 for order g.
double generic_r2(double G) { return 1.0 / (2 * (G - 1)); }
double generic_r4(double G) { return (5 * G + 7) / (32 * std::pow(G - 1, 3) * (G - 4)); }
double generic_r6(double G) {
  return (9 * G * G * G + 22 * G * G - 203 * G - 116) /
         (64 * std::pow(G - 1, 5) * std::pow(G - 4, 2) * (G - 9));
}

// s1 such that P(pi - a) = s1 P(a); sigma such that P(-a) = sigma P(a).
int reflect_sign(Kind kind, int g) {
  bool g_odd = g % 2 != 0;
  if (kind == Kind::Odd) return g_odd ? 1 : -1;
  return g_odd ? -1 : 1;
}
int parity_sign(Kind kind) { return kind == Kind::Odd ? -1 : 1; }

}  // namespace

bool zero_at_half_pi(Kind kind, int g) { return (kind == Kind::Odd) == (g % 2 == 0); }

std::vector<double> charval_series_coeffs(int g, Kind kind) {
  check_mode(g, kind);
  const bool even = kind == Kind::Even;
  switch (g) {
    case 0:
      return {0, 0, -1.0 / 2, 0, 7.0 / 128, 0, -29.0 / 2304};
    case 1: {
      std::vector<double> r{1, 1, -1.0 / 8, -1.0 / 64, -1.0 / 1536, 11.0 / 36864};
      if (!even)
        for (std::size_t j = 1; j < r.size(); j += 2) r[j] = -r[j];
      return r;
    }
    case 2:
      if (even) return {4, 0, 5.0 / 12, 0, -763.0 / 13824, 0, 1002401.0 / 79626240};
      return {4, 0, -1.0 / 12, 0, 5.0 / 13824, 0, -289.0 / 79626240};
    case 3: {
      std::vector<double> r{9, 0, 1.0 / 16, 1.0 / 64, 13.0 / 20480, -5.0 / 16384};
      if (!even)
        for (std::size_t j = 1; j < r.size(); j += 2) r[j] = -r[j];
      return r;
    }
    case 4:
      if (even) return {16, 0, 1.0 / 30, 0, 433.0 / 864000, 0, -5701.0 / 2721600000.0};
      return {16, 0, 1.0 / 30, 0, -317.0 / 864000, 0, 10049.0 / 2721600000.0};
    default: {
      const double G = double(g) * g;
      std::vector<double> r{G, 0, generic_r2(G), 0, generic_r4(G)};
      if (g > 6) {
        r.push_back(0);
        r.push_back(generic_r6(G));
      }
      return r;
    }
  }
}

CharacteristicValue charval_series(int g, Kind kind, double h) {
  check_mode(g, kind);
  check_h(h);
  auto r = charval_series_coeffs(g, kind);
  const double q = h * h;
  double R = 0, pw = 1, last = -1;
  for (std::size_t j = 0; j < r.size(); ++j, pw *= q) {
    double t = r[j] * pw;
    R += t;
    if (j == 0 || r[j] == 0) continue;
    if (last >= 0 && std::abs(t) >= last && t != 0) {
      std::ostringstream os;
      os << "characteristic series for g=" << g << " diverges at h=" << h << " (term h^" << 2 * j
         << " does not decrease)";
      throw DivergenceError(os.str());
    }
    last = std::abs(t);
  }
  return {R, kind, g, h, CharMethod::Series};
}

double shoot_R(int g, Kind kind, double q, const ShootOptions& opt) {
  check_mode(g, kind);
  require_finite(q, "q");
  if (!(opt.tol > 0)) throw DomainError("tol must be > 0");
  const double G = double(g) * g;
  if (q == 0) return G;

  const OdeState s0 = kind == Kind::Odd ? OdeState{0, 1} : OdeState{1, 0};
  const double th0 = kind == Kind::Odd ? 0 : kPi / 2;
  const double target = kind == Kind::Odd ? g * kPi / 2 : (g + 1) * kPi / 2;
  auto phase = [&](double R, int steps) {
    return integrate_phase(Potential::angular(R, q), 0, kPi / 2, s0, th0, steps);
  };
  auto F = [&](double R) { return phase(R, opt.steps) - target; };

  const double aq = std::abs(q);
  double lo = G - 4 * aq, hi = G + 4 * aq + 4;
  if (opt.guess_width > 0) {
    lo = opt.guess - opt.guess_width;
    hi = opt.guess + opt.guess_width;
  }
  double flo = F(lo), fhi = F(hi);
  for (int it = 0; flo > 0 && it < 60; ++it) {
    lo -= (hi - lo);
    flo = F(lo);
  }
  for (int it = 0; fhi < 0 && it < 60; ++it) {
    hi += (hi - lo);
    fhi = F(hi);
  }
  if (flo > 0 || fhi < 0) {
    std::ostringstream os;
    os << "no characteristic value bracketed in R in [" << lo << ", " << hi << "]";
    throw BracketError(os.str());
  }
  std::uintmax_t iters = 200;
  auto tolf = [](double a, double b) {
    return std::abs(b - a) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(a));
  };
  auto br = boost::math::tools::toms748_solve(F, lo, hi, flo, fhi, tolf, iters);
  double R = 0.5 * (br.first + br.second);
  double res = F(R);
  double coarse = phase(R, opt.steps / 2) - target;
  if (std::abs(res) > opt.tol || std::abs(coarse - res) > opt.tol) {
    std::ostringstream os;
    os << "shooting residual " << res << " (step-halving difference " << coarse - res
       << ") exceeds tol " << opt.tol;
    throw ConvergenceError(os.str());
  }
  return R;
}

CharacteristicValue charval_shoot(int g, Kind kind, double h, double tol) {
  check_mode(g, kind);
  check_h(h);
  ShootOptions opt;
  opt.tol = tol;
  return {shoot_R(g, kind, h * h, opt), kind, g, h, CharMethod::Shooting};
}

PerturbationTable perturbation_table(int g, Kind kind, int depth) {
  check_mode(g, kind);
  const bool sines = kind == Kind::Odd;
  const int width = g + 2 * depth + 3;
  const double G = double(g) * g;
  PerturbationTable t;
  t.r.assign(depth + 1, 0);
  t.r[0] = G;
  t.p.assign(depth + 1, std::vector<double>(width, 0));
  t.p[0][g] = 1;
  std::vector<double> S(width);
  for (int k = 1; k <= depth; ++k) {
    std::fill(S.begin(), S.end(), 0);
    // 2 cos 2a * trig(m a) = trig((m+2) a) + trig((m-2) a)
    for (int m = 0; m + 2 < width; ++m) {
      double c = t.p[k - 1][m];
      if (c == 0) continue;
      S[m + 2] += c;
      int lo = m - 2;
      if (lo >= 0) {
        S[lo] += c;
      } else if (!sines) {
        S[-lo] += c;
      } else if (lo != 0) {
        S[-lo] -= c;
      }
    }
    for (int j = 1; j < k; ++j)
      for (int m = 0; m < width; ++m) S[m] -= t.r[j] * t.p[k - j][m];
    t.r[k] = S[g];
    for (int m = 0; m < width; ++m)
      if (m != g && S[m] != 0) t.p[k][m] = S[m] / (G - double(m) * m);
  }
  return t;
}

TrigSeriesRep trig_series(int g, Kind kind, double h) {
  check_mode(g, kind);
  check_h(h);
  constexpr int kCap = 150;
  const int min_depth = g <= 4 ? 5 : 4;
  auto t = perturbation_table(g, kind, kCap);
  const double q = h * h;
  const int width = static_cast<int>(t.p[0].size());
  std::vector<double> sum(width, 0);
  double R = 0, pw = 1;
  int quiet = 0, depth = -1;
  for (int k = 0; k <= kCap; ++k, pw *= q) {
    double mag = 0;
    for (int m = 0; m < width; ++m) {
      sum[m] += pw * t.p[k][m];
      mag = std::max(mag, std::abs(pw * t.p[k][m]));
    }
    R += pw * t.r[k];
    mag = std::max(mag, std::abs(pw * t.r[k]));
    quiet = (k > 0 && mag < 1e-16) ? quiet + 1 : 0;
    if (k >= min_depth && quiet >= 2) {
      depth = k;
      break;
    }
    if (!std::isfinite(mag) || mag > 1e6) break;
  }
  if (depth < 0) {
    std::ostringstream os;
    os << "trigonometric series for g=" << g << " does not converge at h=" << h;
    throw DivergenceError(os.str());
  }
  TrigSeriesRep rep{g, kind, h, R, depth, {}};
  for (int m = 0; m < width; ++m)
    if (sum[m] != 0) rep.terms.emplace_back(m, sum[m]);
  return rep;
}

double TrigSeriesRep::eval(double alpha) const {
  double v = 0;
  for (auto [m, c] : terms) v += c * (kind == Kind::Odd ? std::sin(m * alpha) : std::cos(m * alpha));
  return v;
}

double TrigSeriesRep::deriv(double alpha) const {
  double v = 0;
  for (auto [m, c] : terms)
    v += c * m * (kind == Kind::Odd ? std::cos(m * alpha) : -std::sin(m * alpha));
  return v;
}

PowerSeriesRep power_coeffs(const CharacteristicValue& cv, PowerVariable var, int n) {
  if (n < 2) throw DomainError("power series needs n >= 2");
  PowerSeriesRep rep;
  rep.variable = var;
  const double q4 = 4 * cv.h * cv.h;
  double m, cross;
  if (var == PowerVariable::NuPrime) {
    rep.odd = cv.kind == Kind::Odd;
    m = cv.m_minus();
    cross = -q4;
  } else {
    rep.odd = zero_at_half_pi(cv.kind, cv.g);
    m = cv.m_plus();
    cross = q4;
  }
  rep.coeffs.assign(n, 0);
  rep.coeffs[0] = 1;
  const int p0 = rep.odd ? 1 : 0;
  for (int s = 0; s + 1 < n; ++s) {
    const double p = p0 + 2 * s;  // power of the current term
    double prev = s > 0 ? rep.coeffs[s - 1] : 0;
    double next = ((p * p - m) * rep.coeffs[s] + cross * prev) / ((p + 1) * (p + 2));
    if (!std::isfinite(next) || std::abs(next) > 1e250)
      throw NumericError("power-series coefficient overflow");
    rep.coeffs[s + 1] = next;
  }
  return rep;
}

std::pair<double, double> PowerSeriesRep::eval(double x, double tol) const {
  const double x2 = x * x;
  double term = odd ? x : 1.0;        // x^p
  double dterm = odd ? 1.0 : 0.0;     // p x^{p-1}
  double sum = 0, dsum = 0, scale = 0;
  int small = 0;
  for (std::size_t s = 0; s < coeffs.size(); ++s) {
    const int p = (odd ? 1 : 0) + 2 * static_cast<int>(s);
    double t = coeffs[s] * term;
    sum += t;
    if (p > 0) dsum += coeffs[s] * dterm;
    scale = std::max({scale, std::abs(sum), std::abs(t)});
    small = (std::abs(t) <= tol * scale) ? small + 1 : 0;
    if (small >= 3) return {sum, dsum};
    // advance x^p -> x^{p+2}, p x^{p-1} -> (p+2) x^{p+1}
    dterm = (p + 2) * term * x;
    term *= x2;
  }
  if (x == 0) return {sum, dsum};
  throw ConvergenceError("power series not converged within " + std::to_string(coeffs.size()) +
                         " terms");
}

int PowerSeriesRep::sign_variations(double rel_floor) const {
  double cmax = 0;
  for (double c : coeffs) cmax = std::max(cmax, std::abs(c));
  int last = 0, count = 0;
  for (double c : coeffs) {
    if (std::abs(c) <= rel_floor * cmax || c == 0) continue;
    int s = c > 0 ? 1 : -1;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

namespace {

// Unit-leading Taylor coefficients in alpha of P'' = -(R - 2 q cos 2a) P.
std::vector<double> alpha_coeffs(double R, double q, Kind kind, int n) {
  std::vector<double> s(n, 0), p(n + 2, 0);
  // s(a) = -R + 2q cos 2a = sum s_j a^j
  double f = 1;
  for (int j = 0; j < n; j += 2) {
    if (j > 0) f *= -4.0 / (double(j) * (j - 1));
    s[j] = 2 * q * f;
  }
  s[0] -= R;
  if (kind == Kind::Odd)
    p[1] = 1;
  else
    p[0] = 1;
  for (int k = 0; k + 2 < n; ++k) {
    double acc = 0;
    for (int j = 0; j <= k; j += 2) acc += s[j] * p[k - j];
    p[k + 2] = acc / ((k + 2.0) * (k + 1.0));
    if (!std::isfinite(p[k + 2]) || std::abs(p[k + 2]) > 1e300)
      throw NumericError("Taylor coefficient overflow");
  }
  p.resize(n);
  return p;
}

}  // namespace

double TaylorAlphaRep::eval(double alpha) const {
  double v = 0;
  for (std::size_t k = coeffs.size(); k-- > 0;) v = v * alpha + coeffs[k];
  return v;
}

TaylorAlphaRep taylor_alpha(const CharacteristicValue& cv, int n) {
  if (n < 2) throw DomainError("Taylor series needs n >= 2");
  TaylorAlphaRep rep;
  rep.kind = cv.kind;
  rep.coeffs = alpha_coeffs(cv.R, cv.h * cv.h, cv.kind, n);
  rep.norm = AngularFunction(cv).origin_constant();
  return rep;
}

double periodicity_residual(double h, double R_trial, Kind kind) {
  check_h(h);
  require_finite(R_trial, "R");
  constexpr int kMax = 600;
  auto c = alpha_coeffs(R_trial, h * h, kind, kMax);
  double sum = 0, maxterm = 0, pw = 1;
  int small = 0;
  // odd: sum c_n pi^n; even: sum n c_n pi^{n-1}
  for (int k = 0; k < kMax; ++k) {
    double t = (kind == Kind::Odd) ? c[k] * pw : (k > 0 ? k * c[k] * pw / kPi : 0);
    sum += t;
    maxterm = std::max(maxterm, std::abs(t));
    pw *= kPi;
    bool active = (kind == Kind::Odd) ? (k % 2 == 1) : (k % 2 == 0 && k > 0);
    if (!active) continue;
    small = (std::abs(t) <= 1e-17 * std::max(maxterm, 1.0)) ? small + 1 : 0;
    if (small >= 3) {
      if (maxterm > 1e12) throw ConvergenceError("Taylor series at alpha=pi loses all precision");
      return sum;
    }
  }
  throw ConvergenceError("Taylor series at alpha=pi did not converge");
}

namespace {

double ls_ratio(std::pair<double, double> num, std::pair<double, double> den) {
  return (num.first * den.first + num.second * den.second) /
         (den.first * den.first + den.second * den.second);
}

// Both series at angle a (radians), as (P, dP/da) pairs.
std::pair<std::pair<double, double>, std::pair<double, double>> both_at(const PowerSeriesRep& nup,
                                                                       const PowerSeriesRep& nu,
                                                                       double a) {
  auto sp = nup.eval(std::sin(a));
  auto sn = nu.eval(std::cos(a));
  return {{sp.first, std::cos(a) * sp.second}, {sn.first, -std::sin(a) * sn.second}};
}

MatchResult match_from(const PowerSeriesRep& nup, const PowerSeriesRep& nu) {
  auto at = [&](double deg) {
    auto [p, n] = both_at(nup, nu, deg * kPi / 180);
    return ls_ratio(p, n);
  };
  double a45 = at(45), a30 = at(30), a60 = at(60);
  double spread = std::max(std::abs(a30 - a45), std::abs(a60 - a45)) / std::abs(a45);
  return {a45, spread};
}

}  // namespace

MatchResult match_factor(const CharacteristicValue& cv) {
  auto nup = power_coeffs(cv, PowerVariable::NuPrime, kSeriesCap);
  auto nu = power_coeffs(cv, PowerVariable::Nu, kSeriesCap);
  return match_from(nup, nu);
}

AngularFunction::AngularFunction(const CharacteristicValue& cv)
    : cv_(cv),
      nu_(power_coeffs(cv, PowerVariable::Nu, kSeriesCap)),
      nup_(power_coeffs(cv, PowerVariable::NuPrime, kSeriesCap)),
      match_(match_from(nup_, nu_)) {
  if (!(match_.spread < 1e-9)) {
    std::ostringstream os;
    os << "series matching inconsistent (spread " << match_.spread << "); R=" << cv.R
       << " is not a characteristic value for g=" << cv.g;
    throw ConvergenceError(os.str());
  }
  const int g = cv.g;
  auto weight = [&](double a) {
    if (g == 0) return 1.0;
    return cv.kind == Kind::Odd ? std::sin(g * a) : std::cos(g * a);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double I1 = GK::integrate([&](double a) { return eval_quadrant(a).first * weight(a); }, 0,
                            kPi / 4, 10, 1e-15);
  double I2 = GK::integrate([&](double a) { return eval_quadrant(a).first * weight(a); }, kPi / 4,
                            kPi / 2, 10, 1e-15);
  double coef = (g == 0 ? 2 / kPi : 4 / kPi) * (I1 + I2);
  if (coef == 0 || !std::isfinite(coef)) throw NumericError("degenerate Fourier normalization");
  cs_ = 1 / coef;
}

std::pair<double, double> AngularFunction::eval_quadrant(double a) const {
  if (a <= kPi / 4) {
    auto [v, d] = nup_.eval(std::sin(a));
    return {cs_ * v, cs_ * std::cos(a) * d};
  }
  auto [v, d] = nu_.eval(std::cos(a));
  return {cs_ * match_.A * v, -cs_ * match_.A * std::sin(a) * d};
}

std::pair<double, double> AngularFunction::eval(double alpha) const {
  require_finite(alpha, "alpha");
  double a = std::fmod(alpha, 2 * kPi);
  if (a < 0) a += 2 * kPi;
  const int s1 = reflect_sign(cv_.kind, cv_.g);
  const int sg = parity_sign(cv_.kind);
  double vs = 1, ds = 1;
  if (a >= kPi) {
    a -= kPi;
    vs = ds = s1 * sg;
  }
  if (a > kPi / 2) {
    a = kPi - a;
    vs *= s1;
    ds *= -s1;
  }
  auto [v, d] = eval_quadrant(a);
  return {vs * v, ds * d};
}

double AngularFunction::origin_constant() const { return cs_; }

std::vector<double> AngularFunction::roots(double lo, double hi, int samples_per_pi) const {
  int n = std::max(16, static_cast<int>(std::ceil((hi - lo) / kPi * samples_per_pi)));
  return scan_roots([this](double a) { return eval(a).first; }, lo, hi, n);
}

double angular_eval(const CharacteristicValue& cv, double alpha) { return AngularFunction(cv)(alpha); }

int count_roots(const CharacteristicValue& cv, double lo, double hi) {
  if (!(lo >= 0 && hi <= 2 * kPi + 1e-12 && lo < hi)) throw DomainError("interval must lie in [0, 2pi)");
  return static_cast<int>(AngularFunction(cv).roots(lo, hi).size());
}

}  // namespace ellmem
