#include "ellmem/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ellmem/ode.hpp"

namespace ellmem {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHQuantum = 1e-12;

std::mutex g_cache_mutex;
std::map<std::tuple<int, int, long long>, CharacteristicValue> g_cache;

void check_family(Kind kind, int g, int i) {
  if (g < 0 || (kind == Kind::Odd && g < 1)) throw DomainError("odd kind requires g >= 1");
  if (i < 1) throw DomainError("radial index i must be >= 1");
}

// Scans lambda = k*step for sign changes of B and refines the first n of them.
// The scan is repeated at half the step over the found range; a disagreement in the
// bracket count means a skipped pair of roots and triggers a finer scan.
template <class F>
std::vector<double> scan_family(const F& B, double step, int n, double ceiling, const std::string& what) {
  std::map<long long, double> seen;  // keyed by index on the finest grid
  constexpr int kLevels = 5;
  const long long unit = 1LL << kLevels;
  auto value_at = [&](long long idx) {
    auto it = seen.find(idx);
    if (it != seen.end()) return it->second;
    double v = B(step * double(idx) / double(unit));
    seen.emplace(idx, v);
    return v;
  };
  auto scan = [&](long long stride, long long end_idx, int limit) {
    std::vector<std::pair<long long, long long>> br;
    long long prev = stride;
    double fprev = value_at(prev);
    for (long long idx = 2 * stride; idx <= end_idx; idx += stride) {
      double f = value_at(idx);
      if (fprev == 0 || (f != 0 && (f > 0) != (fprev > 0))) {
        br.emplace_back(prev, idx);
        if (limit > 0 && static_cast<int>(br.size()) >= limit) break;
      }
      prev = idx;
      fprev = f;
    }
    return br;
  };
  const long long ceil_idx = static_cast<long long>(std::ceil(ceiling / step)) * unit;
  long long stride = unit;
  auto br = scan(stride, ceil_idx, n);
  if (static_cast<int>(br.size()) < n) {
    std::ostringstream os;
    os << what << ": only " << br.size() << " of " << n << " roots below scan ceiling lambda = " << ceiling;
    throw BracketError(os.str());
  }
  for (int level = 0; level < kLevels; ++level) {
    auto fine = scan(stride / 2, br.back().second, 0);
    if (fine.size() == br.size()) {
      br = fine;
      break;
    }
    stride /= 2;
    br = scan(stride, ceil_idx, n);
    if (static_cast<int>(br.size()) < n) throw BracketError(what + ": roots lost on refinement");
    if (level == kLevels - 1) throw BracketError(what + ": bracket count unstable under refinement");
  }
  std::vector<double> roots;
  for (auto [a, b] : br) {
    double lo = step * double(a) / double(unit), hi = step * double(b) / double(unit);
    double flo = value_at(a), fhi = value_at(b);
    if (flo == 0) {
      roots.push_back(lo);
      continue;
    }
    std::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(B, lo, hi, flo, fhi,
                                               boost::math::tools::eps_tolerance<double>(50), it);
    roots.push_back(0.5 * (r.first + r.second));
  }
  return roots;
}

}  // namespace

CharacteristicValue cached_charval(int g, Kind kind, double h) {
  require_finite(h, "h");
  if (h < 0) throw DomainError("h must be >= 0");
  const long long key = std::llround(h / kHQuantum);
  auto k = std::make_tuple(g, kind == Kind::Odd ? 1 : 0, key);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_cache.find(k);
    if (it != g_cache.end()) return it->second;
  }
  const double hq = double(key) * kHQuantum;
  ShootOptions opt;
  try {
    if (hq <= 1) {
      double guess = charval_series(g, kind, hq).R;
      opt.guess = guess;
      opt.guess_width = 1e-3 + 1e-2 * hq * hq;
    }
  } catch (const DivergenceError&) {
  }
  CharacteristicValue cv{shoot_R(g, kind, hq * hq, opt), kind, g, hq, CharMethod::Shooting};
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_cache.emplace(k, cv);
  return cv;
}

double boundary_value(const EllipseGeometry& geometry, Kind kind, int g, double lambda) {
  auto cv = cached_charval(g, kind, lambda * geometry.c);
  auto pot = Potential::radial(cv.R, cv.h * cv.h);
  OdeState s0 = kind == Kind::Odd ? OdeState{0, 1} : OdeState{1, 0};
  return integrate(pot, 0, geometry.theta, s0, radial_steps(pot, 0, geometry.theta)).y;
}

double MembraneMode::shape(double alpha, double beta) const {
  // Q is odd in beta for the odd kind, even for the even kind
  double sign = beta < 0 && spec.kind == Kind::Odd ? -1 : 1;
  return sign * (*P)(alpha) * Q->eval(std::abs(beta)).Q;
}

MembraneMode make_mode(const EllipseGeometry& geometry, ModeSpec spec, double lambda) {
  MembraneMode m{spec, lambda, cached_charval(spec.g, spec.kind, lambda * geometry.c), geometry,
                 nullptr, nullptr, 0};
  auto P = std::make_shared<const AngularFunction>(m.cv);
  auto Q = std::make_shared<const RadialFunction>(*P);
  double qmax = 0;
  for (int k = 0; k <= 256; ++k) qmax = std::max(qmax, std::abs(Q->eval(geometry.theta * k / 256).Q));
  m.boundary_residual = std::abs(Q->eval(geometry.theta).Q) / qmax;
  m.P = std::move(P);
  m.Q = std::move(Q);
  return m;
}

std::vector<MembraneMode> find_lambdas(const EllipseGeometry& geometry, Kind kind, int g, int n,
                                       const SpectrumOptions& opt) {
  check_family(kind, g, n);
  if (!(geometry.c > 0 && geometry.theta > 0)) throw DomainError("invalid geometry");
  const double A = geometry.semi_major();
  const double step = kPi / (4 * A);
  double ceiling = opt.scan_ceiling > 0
                       ? opt.scan_ceiling
                       : (2.0 * n + g + 4) * kPi / (2 * geometry.semi_minor());
  auto B = [&](double lam) { return boundary_value(geometry, kind, g, lam); };
  std::ostringstream what;
  what << "mode family (" << kind_name(kind) << ", g=" << g << ")";
  auto roots = scan_family(B, step, n, ceiling, what.str());
  std::vector<MembraneMode> out;
  for (int i = 0; i < n; ++i) {
    auto m = make_mode(geometry, {kind, g, i + 1}, roots[i]);
    if (!(m.boundary_residual < opt.tol)) {
      std::ostringstream os;
      os << what.str() << " i=" << i + 1 << ": boundary residual " << m.boundary_residual
         << " exceeds " << opt.tol;
      throw ConvergenceError(os.str());
    }
    out.push_back(std::move(m));
  }
  return out;
}

MembraneMode find_lambda(const EllipseGeometry& geometry, Kind kind, int g, int i, double tol) {
  SpectrumOptions opt;
  opt.tol = tol;
  if (!(tol > 0)) throw DomainError("tol must be > 0");
  return find_lambdas(geometry, kind, g, i, opt).back();
}

double frequency(double lambda, const MembraneMaterial& material) {
  if (!(lambda > 0) || !(material.wave_speed > 0)) throw DomainError("lambda and wave speed must be > 0");
  return lambda * material.wave_speed / kPi;
}

SeriesValue circle_series(int n, double tau) {
  using F = boost::multiprecision::cpp_bin_float_50;
  if (n < 0) throw DomainError("Bessel order must be >= 0");
  F t2 = F(tau) * F(tau);
  F term = 1;
  for (int j = 1; j <= n; ++j) term /= j;  // 1/n!
  F sum = term, maxterm = abs(term);
  for (int k = 0; k < 100000; ++k) {
    F next = -term * t2 / (F(k + 1) * F(n + k + 1));
    // past the peak the series alternates with decreasing terms: |tail| <= |next|
    bool decreasing = t2 < F(k + 1) * F(n + k + 1);
    if (decreasing && abs(next) < 1e-40 * maxterm) {
      double bound = static_cast<double>(abs(next) + maxterm * F(1e-45));
      return {static_cast<double>(sum), bound};
    }
    term = next;
    sum += term;
    maxterm = std::max(maxterm, F(abs(term)));
  }
  throw ConvergenceError("circle series did not converge");
}

std::vector<CircleMode> circle_modes(double radius, int n, int count) {
  if (!(radius > 0)) throw DomainError("radius must be > 0");
  if (count < 1) throw DomainError("count must be >= 1");
  if (n < 0) throw DomainError("Bessel order must be >= 0");
  std::vector<CircleMode> out;
  const double step = 0.1;
  double a = step;
  SeriesValue fa = circle_series(n, a);
  while (static_cast<int>(out.size()) < count) {
    double b = a + step;
    SeriesValue fb = circle_series(n, b);
    if ((fa.value > 0) != (fb.value > 0)) {
      double lo = a, hi = b;
      double flo = fa.value;
      while (hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi) {
        double mid = 0.5 * (lo + hi);
        SeriesValue fm = circle_series(n, mid);
        if (std::abs(fm.value) <= fm.bound) {
          lo = hi = mid;
          break;
        }
        if ((fm.value > 0) == (flo > 0)) {
          lo = mid;
          flo = fm.value;
        } else {
          hi = mid;
        }
      }
      double tau = 0.5 * (lo + hi);
      out.push_back({n, static_cast<int>(out.size()) + 1, tau, tau / radius});
    }
    a = b;
    fa = fb;
  }
  return out;
}

double degenerate_pair_gap(const EllipseGeometry& geometry, int g, int i) {
  if (g < 1) throw DomainError("degenerate pairs need g >= 1");
  double le = find_lambda(geometry, Kind::Even, g, i).lambda;
  double lo = find_lambda(geometry, Kind::Odd, g, i).lambda;
  return std::abs(le - lo) / le;
}

double annulus_boundary_value(double c, double theta_inner, double theta_outer, Kind kind, int g,
                              double lambda) {
  auto cv = cached_charval(g, kind, lambda * c);
  auto p = annulus_from_geometry(c, theta_inner, lambda);
  auto pot = Potential::annulus(cv.R, p.f, p.q_ann * p.q_ann);
  double e1 = theta_outer - theta_inner;
  return integrate(pot, 0, e1, {0, 1}, radial_steps(pot, 0, e1)).y;
}

AnnulusMode annulus_find_lambda(double c, double theta_inner, double theta_outer, Kind kind, int g,
                                int i, double tol) {
  check_family(kind, g, i);
  require_finite(c, "c");
  require_finite(theta_inner, "theta_inner");
  require_finite(theta_outer, "theta_outer");
  if (!(c > 0)) throw DomainError("c must be > 0");
  if (!(theta_inner >= 0 && theta_inner < theta_outer)) throw DomainError("need 0 <= theta_inner < theta_outer");
  if (!(tol > 0)) throw DomainError("tol must be > 0");
  const double e1 = theta_outer - theta_inner;
  AnnulusMode out{};
  out.spec = {kind, g, i};
  out.eps_outer = e1;
  if (theta_inner == 0 && kind == Kind::Odd) {
    // inner contour is the focal segment, where the odd-kind Q already vanishes
    auto m = find_lambda(EllipseGeometry::from_focal(c, theta_outer), kind, g, i, tol);
    out.lambda = m.lambda;
  } else {
    const double A = c * std::cosh(theta_outer);
    const double width = std::min(c * (std::sinh(theta_outer) - std::sinh(theta_inner)),
                                  c * (std::cosh(theta_outer) - std::cosh(theta_inner)));
    const double ceiling = (2.0 * i + g + 4) * kPi / (2 * std::min(width, c * std::sinh(theta_outer)));
    auto B = [&](double lam) { return annulus_boundary_value(c, theta_inner, theta_outer, kind, g, lam); };
    std::ostringstream what;
    what << "annulus family (" << kind_name(kind) << ", g=" << g << ")";
    out.lambda = scan_family(B, kPi / (4 * A), i, ceiling, what.str()).back();
  }
  out.cv = cached_charval(g, kind, out.lambda * c);
  out.param = annulus_from_geometry(c, theta_inner, out.lambda);
  auto pot = Potential::annulus(out.cv.R, out.param.f, out.param.q_ann * out.param.q_ann);
  auto Qe = [&](double e) { return integrate(pot, 0, e, {0, 1}, radial_steps(pot, 0, e)).y; };
  double qmax = 0;
  for (int k = 1; k <= 256; ++k) qmax = std::max(qmax, std::abs(Qe(e1 * k / 256)));
  out.boundary_residual = std::abs(Qe(e1)) / qmax;
  for (double r : scan_roots(Qe, 0, e1, 1024))
    if (r > 1e-12 && r < e1 * (1 - 1e-9)) out.interior_zeros.push_back(r);
  if (!(out.boundary_residual < tol)) {
    std::ostringstream os;
    os << "annulus boundary residual " << out.boundary_residual << " exceeds " << tol;
    throw ConvergenceError(os.str());
  }
  return out;
}

double charval_slope_check(int g, Kind kind, double h, double dh) {
  require_finite(h, "h");
  require_finite(dh, "dh");
  if (h < 0 || !(dh > 0)) throw DomainError("need h >= 0 and dh > 0");
  ShootOptions opt;
  double rp = shoot_R(g, kind, (h + dh) * (h + dh), opt);
  double rm = shoot_R(g, kind, (h - dh) * (h - dh), opt);
  return (rp - rm) / (2 * dh) - 4 * h;
}

}  // namespace ellmem
