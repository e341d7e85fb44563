#include "ellmem/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <array>
#include <set>
#include <tuple>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

namespace ellmem {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxOrder = 512;

template <int N>
std::pair<std::vector<double>, std::vector<double>> rule(double a, double b) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  std::vector<double> xs, ws;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  // abscissae are the non-negative half, starting at the largest weight
  for (std::size_t k = x.size(); k-- > 0;) {
    if (x[k] == 0) continue;
    xs.push_back(mid - half * x[k]);
    ws.push_back(half * w[k]);
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    xs.push_back(mid + half * x[k]);
    ws.push_back(half * w[k]);
  }
  std::vector<std::size_t> idx(xs.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return xs[i] < xs[j]; });
  std::vector<double> sx, sw;
  for (auto k : idx) {
    sx.push_back(xs[k]);
    sw.push_back(ws[k]);
  }
  return {sx, sw};
}

// Nodes over [0, 2pi] as four quadrant rules of n points each.
std::pair<std::vector<double>, std::vector<double>> alpha_rule(int n) {
  std::vector<double> xs, ws;
  for (int q = 0; q < 4; ++q) {
    auto [x, w] = gauss_legendre(n, q * kPi / 2, (q + 1) * kPi / 2);
    xs.insert(xs.end(), x.begin(), x.end());
    ws.insert(ws.end(), w.begin(), w.end());
  }
  return {xs, ws};
}

void check_same_geometry(const EllipseGeometry& a, const EllipseGeometry& b) {
  if (a.c != b.c || a.theta != b.theta) throw DomainError("modes live on different geometries");
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b) {
  switch (n) {
    case 16: return rule<16>(a, b);
    case 32: return rule<32>(a, b);
    case 64: return rule<64>(a, b);
    case 128: return rule<128>(a, b);
    case 256: return rule<256>(a, b);
    case 512: return rule<512>(a, b);
    default: throw DomainError("quadrature order must be a power of two in [16, 512]");
  }
}

std::pair<VelocityField, VelocityField> split_even_odd(const VelocityField& field,
                                                       const EllipseGeometry& geometry) {
  if (!field.phi) throw DomainError("empty velocity field");
  double vmax = 0, dev = 0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      double a = 2 * kPi * (i + 0.37) / 16, b = geometry.theta * (j + 0.5) / 16;
      double v = field.phi({a, b}), m = field.phi({-a, -b});
      vmax = std::max(vmax, std::abs(v));
      dev = std::max(dev, std::abs(v - m));
    }
  if (dev > 1e-10 * std::max(vmax, 1e-300) && dev > 0) {
    std::ostringstream os;
    os << "velocity field is not invariant under (alpha, beta) -> (-alpha, -beta): deviation " << dev;
    throw DomainError(os.str());
  }
  if (field.vanishes_on_boundary) {
    double edge = 0;
    for (int i = 0; i < 64; ++i) edge = std::max(edge, std::abs(field.phi({2 * kPi * i / 64, geometry.theta})));
    if (edge > 1e-8 * std::max(vmax, 1e-300) && edge > 1e-300)
      throw DomainError("velocity field flagged as boundary-vanishing is nonzero on the boundary");
  }
  auto phi = field.phi;
  VelocityField f1 = field, f2 = field;
  f1.phi = [phi](EllipticPoint p) { return 0.5 * (phi(p) - phi({-p.alpha, p.beta})); };
  f2.phi = [phi](EllipticPoint p) { return 0.5 * (phi(p) + phi({-p.alpha, p.beta})); };
  return {f1, f2};
}

PairIntegrals pair_integrals(const MembraneMode& a, const MembraneMode& b, int n) {
  check_same_geometry(a.geometry, b.geometry);
  auto [xa, wa] = alpha_rule(n);
  auto [xb, wb] = gauss_legendre(n, 0, a.geometry.theta);
  PairIntegrals r{0, 0, 0, 0};
  for (std::size_t k = 0; k < xa.size(); ++k) {
    double pp = (*a.P)(xa[k]) * (*b.P)(xa[k]) * wa[k];
    r.PP += pp;
    r.PPcos += pp * std::cos(2 * xa[k]);
  }
  for (std::size_t k = 0; k < xb.size(); ++k) {
    double qq = a.Q->eval(xb[k]).Q * b.Q->eval(xb[k]).Q * wb[k];
    r.QQ += qq;
    r.QQcosh += qq * std::cosh(2 * xb[k]);
  }
  return r;
}

double inner_product(const MembraneMode& a, const MembraneMode& b, int quad_order) {
  check_same_geometry(a.geometry, b.geometry);
  if (a.spec.kind != b.spec.kind) throw DomainError("inner product is defined within one kind");
  double prev = 0;
  for (int n = quad_order; n <= kMaxOrder; n *= 2) {
    double cur = pair_integrals(a, b, n).weighted();
    double na = pair_integrals(a, a, n).weighted();
    double nb = pair_integrals(b, b, n).weighted();
    double scale = std::sqrt(std::abs(na * nb));
    if (n > quad_order && std::abs(cur - prev) <= 1e-9 * scale) return cur;
    prev = cur;
  }
  throw ConvergenceError("inner-product quadrature did not converge by order doubling");
}

namespace {

struct FieldGrid {
  std::vector<double> xa, wa, xb, wb;
  std::vector<double> f1, f2, full;  // [i * nb + j]
};

FieldGrid sample_field(const VelocityField& field, const EllipseGeometry& geom, int n) {
  FieldGrid g;
  std::tie(g.xa, g.wa) = alpha_rule(n);
  std::tie(g.xb, g.wb) = gauss_legendre(n, 0, geom.theta);
  const std::size_t na = g.xa.size(), nb = g.xb.size();
  g.f1.resize(na * nb);
  g.f2.resize(na * nb);
  g.full.resize(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      double v = field.phi({g.xa[i], g.xb[j]});
      double m = field.phi({-g.xa[i], g.xb[j]});
      g.full[i * nb + j] = v;
      g.f1[i * nb + j] = 0.5 * (v - m);
      g.f2[i * nb + j] = 0.5 * (v + m);
    }
  return g;
}

// (int F P Q w, int |F P Q w|)
std::pair<double, double> project(const FieldGrid& g, const std::vector<double>& F, const MembraneMode& m) {
  const std::size_t na = g.xa.size(), nb = g.xb.size();
  std::vector<double> p(na), q(nb);
  for (std::size_t i = 0; i < na; ++i) p[i] = (*m.P)(g.xa[i]);
  for (std::size_t j = 0; j < nb; ++j) q[j] = m.Q->eval(g.xb[j]).Q;
  double s = 0, sa = 0;
  for (std::size_t i = 0; i < na; ++i) {
    double c2a = std::cos(2 * g.xa[i]);
    for (std::size_t j = 0; j < nb; ++j) {
      double v = F[i * nb + j] * p[i] * q[j] * (std::cosh(2 * g.xb[j]) - c2a) * g.wa[i] * g.wb[j];
      s += v;
      sa += std::abs(v);
    }
  }
  return {s, sa};
}

}  // namespace

ModalExpansion expand_velocity(const VelocityField& field, const std::vector<MembraneMode>& modes,
                               const MembraneMaterial& material, int quad_order) {
  if (!field.phi) throw DomainError("empty velocity field");
  if (!(material.wave_speed > 0)) throw DomainError("wave speed must be > 0");
  ModalExpansion ex;
  if (modes.empty()) return ex;
  const auto& geom = modes.front().geometry;
  for (const auto& m : modes) check_same_geometry(geom, m.geometry);
  split_even_odd(field, geom);  // invariance check

  // interpolated data converges algebraically; its own error is far above 1e-6
  const double rtol = field.smoothness_hint == "analytic" ? 1e-9 : 1e-6;
  std::vector<double> num(modes.size(), 0);
  bool done = false;
  FieldGrid grid;
  for (int n = quad_order; n <= kMaxOrder && !done; n *= 2) {
    FieldGrid g = sample_field(field, geom, n);
    double ff = 0;
    for (std::size_t i = 0; i < g.xa.size(); ++i)
      for (std::size_t j = 0; j < g.xb.size(); ++j)
        ff += g.full[i * g.xb.size() + j] * g.full[i * g.xb.size() + j] *
              (std::cosh(2 * g.xb[j]) - std::cos(2 * g.xa[i])) * g.wa[i] * g.wb[j];
    done = true;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const auto& F = modes[k].spec.kind == Kind::Odd ? g.f1 : g.f2;
      auto [s, sa] = project(g, F, modes[k]);
      // Cauchy-Schwarz bound on the projection
      double scale = std::max(sa, std::sqrt(ff * pair_integrals(modes[k], modes[k], n).weighted()));
      if (n == quad_order || std::abs(s - num[k]) > rtol * scale) done = false;
      num[k] = s;
    }
    if (n == quad_order) done = false;
    grid = std::move(g);
  }
  if (!done) throw ConvergenceError("expansion quadrature did not converge by order doubling");
  const int n_used = static_cast<int>(grid.xb.size());
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const auto& m = modes[k];
    double norm = pair_integrals(m, m, n_used).weighted();
    double a = num[k] / (2 * material.wave_speed * m.lambda * norm);
    (m.spec.kind == Kind::Odd ? ex.odd_coeffs : ex.even_coeffs)[m.spec] = a;
    ex.terms.push_back({m, a});
  }
  // weighted residual of the t = 0 velocity
  const std::size_t na = grid.xa.size(), nb = grid.xb.size();
  std::vector<double> rec(na * nb, 0);
  for (const auto& t : ex.terms) {
    double amp = t.coeff * 2 * material.wave_speed * t.mode.lambda;
    std::vector<double> q(nb);
    for (std::size_t j = 0; j < nb; ++j) q[j] = t.mode.Q->eval(grid.xb[j]).Q;
    for (std::size_t i = 0; i < na; ++i) {
      double p = (*t.mode.P)(grid.xa[i]) * amp;
      for (std::size_t j = 0; j < nb; ++j) rec[i * nb + j] += p * q[j];
    }
  }
  double rr = 0, ff = 0;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      double w = (std::cosh(2 * grid.xb[j]) - std::cos(2 * grid.xa[i])) * grid.wa[i] * grid.wb[j];
      double d = grid.full[i * nb + j] - rec[i * nb + j];
      rr += d * d * w;
      ff += grid.full[i * nb + j] * grid.full[i * nb + j] * w;
    }
  ex.residual_norm = ff > 0 ? std::sqrt(rr / ff) : std::sqrt(rr);
  return ex;
}

double evaluate_motion(const ModalExpansion& expansion, EllipticPoint p, double t,
                       const MembraneMaterial& material) {
  double w = 0;
  for (const auto& term : expansion.terms)
    w += term.coeff * term.mode.shape(p.alpha, p.beta) * std::sin(2 * term.mode.lambda * material.wave_speed * t);
  return w;
}

double evaluate_velocity(const ModalExpansion& expansion, EllipticPoint p, double t,
                         const MembraneMaterial& material) {
  double v = 0;
  for (const auto& term : expansion.terms) {
    double om = 2 * term.mode.lambda * material.wave_speed;
    v += term.coeff * om * term.mode.shape(p.alpha, p.beta) * std::cos(om * t);
  }
  return v;
}

namespace {

// Cubic convolution kernel (a = -1/2).
double keys(double x) {
  x = std::abs(x);
  if (x < 1) return (1.5 * x - 2.5) * x * x + 1;
  if (x < 2) return ((-0.5 * x + 2.5) * x - 4) * x + 2;
  return 0;
}

}  // namespace

VelocityField field_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::array<double, 3>> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<double, 3> r{};
    std::istringstream ls(line);
    std::string cell;
    int k = 0;
    bool numeric = true;
    while (std::getline(ls, cell, ',') && k < 3) {
      try {
        std::size_t used = 0;
        r[k] = std::stod(cell, &used);
      } catch (...) {
        numeric = false;
      }
      ++k;
    }
    if (!numeric && lineno == 1) continue;  // header
    if (!numeric || k != 3) throw DomainError("malformed velocity CSV at line " + std::to_string(lineno));
    rows.push_back(r);
  }
  std::set<double> as, bs;
  for (auto& r : rows) {
    as.insert(r[0]);
    bs.insert(r[1]);
  }
  std::vector<double> av(as.begin(), as.end()), bv(bs.begin(), bs.end());
  if (av.size() < 4 || bv.size() < 4 || av.size() * bv.size() != rows.size())
    throw DomainError("velocity CSV must be a full regular grid with at least 4x4 samples");
  // a closing column at alpha = 2 pi duplicates alpha = 0
  bool closed = std::abs(av.back() - av.front() - 2 * kPi) < 1e-9;
  const std::size_t na = av.size(), nb = bv.size();
  std::vector<double> vals(na * nb);
  for (auto& r : rows) {
    auto i = std::lower_bound(av.begin(), av.end(), r[0]) - av.begin();
    auto j = std::lower_bound(bv.begin(), bv.end(), r[1]) - bv.begin();
    vals[i * nb + j] = r[2];
  }
  const std::size_t period = closed ? na - 1 : na;
  const double da = 2 * kPi / period, a0 = av.front();
  const double db = (bv.back() - bv.front()) / (nb - 1), b0 = bv.front();
  for (std::size_t i = 1; i < na; ++i)
    if (std::abs(av[i] - av[i - 1] - da) > 1e-6 * da) throw DomainError("alpha samples must be evenly spaced over 2 pi");
  for (std::size_t j = 1; j < nb; ++j)
    if (std::abs(bv[j] - bv[j - 1] - db) > 1e-6 * db) throw DomainError("beta samples must be evenly spaced");
  VelocityField f;
  f.smoothness_hint = "bicubic";
  f.vanishes_on_boundary = false;  // sampled data; not enforced
  f.phi = [=](EllipticPoint p) {
    if (p.beta < 0) p = {-p.alpha, -p.beta};
    double u = (p.alpha - a0) / da, v = (p.beta - b0) / db;
    long iu = static_cast<long>(std::floor(u)), iv = static_cast<long>(std::floor(v));
    double s = 0;
    for (long di = -1; di <= 2; ++di) {
      long ii = ((iu + di) % static_cast<long>(period) + static_cast<long>(period)) % static_cast<long>(period);
      double kw = keys(u - (iu + di));
      if (kw == 0) continue;
      for (long dj = -1; dj <= 2; ++dj) {
        long jj = std::clamp<long>(iv + dj, 0, static_cast<long>(nb) - 1);
        s += kw * keys(v - (iv + dj)) * vals[ii * nb + jj];
      }
    }
    return s;
  };
  return f;
}

VelocityField builtin_field(const std::string& name, const EllipseGeometry& geometry) {
  const double A = geometry.semi_major(), B = geometry.semi_minor(), c = geometry.c;
  auto s = [=](EllipticPoint p, double& x, double& y) {
    x = c * std::cosh(p.beta) * std::cos(p.alpha);
    y = c * std::sinh(p.beta) * std::sin(p.alpha);
    return 1 - (x * x) / (A * A) - (y * y) / (B * B);
  };
  VelocityField f;
  if (name == "even") {
    f.phi = [=](EllipticPoint p) { double x, y, v = s(p, x, y); return v * v; };
  } else if (name == "odd") {
    f.phi = [=](EllipticPoint p) { double x, y, v = s(p, x, y); return v * v * y / B; };
  } else if (name == "bump") {
    f.phi = [=](EllipticPoint p) {
      double x, y, v = s(p, x, y);
      return v * v * (1 + 0.5 * x / A + 0.7 * y / B);
    };
  } else {
    throw DomainError("unknown built-in field '" + name + "' (even, odd, bump)");
  }
  return f;
}

}  // namespace ellmem
