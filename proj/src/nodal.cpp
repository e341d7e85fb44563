#include "ellmem/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "ellmem/format.hpp"

namespace ellmem {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAxisTol = 1e-9;

}  // namespace

NodalGeometry hyperbolic_nodal_angles(const MembraneMode& mode) {
  NodalGeometry ng;
  ng.hyperbolic_alphas = mode.P->roots(0, kPi);
  for (double a : ng.hyperbolic_alphas) {
    if (std::abs(a) < kAxisTol) {
      ng.includes_major_axis = true;
      ng.counted_hyperbolic_lines += 1;
    } else if (std::abs(a - kPi / 2) < kAxisTol) {
      ng.includes_minor_axis = true;
      ng.counted_hyperbolic_lines += 1;
    } else {
      ng.counted_hyperbolic_lines += 1;  // half of a full hyperbola
    }
  }
  return ng;
}

std::vector<double> nodal_ellipses(const MembraneMode& mode) {
  auto r = mode.Q->roots(0, mode.geometry.theta, 4096);
  if (static_cast<int>(r.size()) != mode.spec.i - 1) {
    std::ostringstream os;
    os << "mode (" << kind_name(mode.spec.kind) << ", g=" << mode.spec.g << ", i=" << mode.spec.i
       << ") has " << r.size() << " nodal ellipses, expected " << mode.spec.i - 1;
    throw NumericError(os.str());
  }
  return r;
}

NodalGeometry nodal_geometry(const MembraneMode& mode) {
  auto ng = hyperbolic_nodal_angles(mode);
  ng.ellipse_betas = nodal_ellipses(mode);
  const double c = mode.geometry.c;
  for (double b : ng.ellipse_betas) ng.ellipse_axes.emplace_back(c * std::cosh(b), c * std::sinh(b));
  return ng;
}

namespace {

// Marching squares over a (alpha, beta) grid; polylines returned in grid coordinates.
std::vector<std::vector<std::pair<double, double>>> march(const std::vector<double>& al,
                                                          const std::vector<double>& be,
                                                          const std::vector<double>& F) {
  const int na = static_cast<int>(al.size()), nb = static_cast<int>(be.size());
  auto val = [&](int i, int j) { return F[static_cast<std::size_t>(i) * nb + j]; };
  auto pos = [&](int i, int j) { return val(i, j) >= 0; };
  // edge ids: 2*(i*nb + j) horizontal (i,j)-(i+1,j); +1 vertical (i,j)-(i,j+1)
  auto hid = [&](int i, int j) { return 2LL * (static_cast<long long>(i) * nb + j); };
  auto vid = [&](int i, int j) { return 2LL * (static_cast<long long>(i) * nb + j) + 1; };
  auto point = [&](long long id) {
    long long cell = id / 2;
    int i = static_cast<int>(cell / nb), j = static_cast<int>(cell % nb);
    int i2 = (id % 2 == 0) ? i + 1 : i, j2 = (id % 2 == 0) ? j : j + 1;
    double f1 = val(i, j), f2 = val(i2, j2);
    double t = f1 / (f1 - f2);
    return std::make_pair(al[i] + t * (al[i2] - al[i]), be[j] + t * (be[j2] - be[j]));
  };
  std::map<long long, std::vector<long long>> adj;
  auto link = [&](long long a, long long b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (int i = 0; i + 1 < na; ++i) {
    for (int j = 0; j + 1 < nb; ++j) {
      // corners 0:(i,j) 1:(i+1,j) 2:(i+1,j+1) 3:(i,j+1); edges 0:bottom 1:right 2:top 3:left
      int code = (pos(i, j) ? 1 : 0) | (pos(i + 1, j) ? 2 : 0) | (pos(i + 1, j + 1) ? 4 : 0) |
                 (pos(i, j + 1) ? 8 : 0);
      if (code == 0 || code == 15) continue;
      long long e[4] = {hid(i, j), vid(i + 1, j), hid(i, j + 1), vid(i, j)};
      double centre = 0.25 * (val(i, j) + val(i + 1, j) + val(i + 1, j + 1) + val(i, j + 1));
      switch (code) {
        case 1: case 14: link(e[3], e[0]); break;
        case 2: case 13: link(e[0], e[1]); break;
        case 3: case 12: link(e[3], e[1]); break;
        case 4: case 11: link(e[1], e[2]); break;
        case 6: case 9: link(e[0], e[2]); break;
        case 7: case 8: link(e[3], e[2]); break;
        case 5:
          if (centre >= 0) { link(e[3], e[2]); link(e[0], e[1]); }
          else { link(e[3], e[0]); link(e[1], e[2]); }
          break;
        case 10:
          if (centre >= 0) { link(e[3], e[0]); link(e[1], e[2]); }
          else { link(e[3], e[2]); link(e[0], e[1]); }
          break;
        default: break;
      }
    }
  }
  std::vector<std::vector<std::pair<double, double>>> lines;
  std::map<long long, bool> used;
  auto walk = [&](long long start) {
    std::vector<std::pair<double, double>> line{point(start)};
    used[start] = true;
    long long cur = start;
    for (;;) {
      long long nxt = -1;
      for (long long n : adj[cur])
        if (!used[n]) { nxt = n; break; }
      if (nxt < 0) break;
      used[nxt] = true;
      line.push_back(point(nxt));
      cur = nxt;
    }
    return line;
  };
  // open chains first (degree-1 ends), then closed loops
  for (auto& [id, nb_] : adj)
    if (nb_.size() == 1 && !used[id]) lines.push_back(walk(id));
  for (auto& [id, nb_] : adj)
    if (!used[id]) {
      auto l = walk(id);
      l.push_back(l.front());
      lines.push_back(std::move(l));
    }
  return lines;
}

}  // namespace

SuperposedNodal superposed_nodal(const MembraneMode& mode_even, const MembraneMode& mode_odd, double A,
                                 double B, const SuperposeOptions& opt) {
  require_finite(A, "A");
  require_finite(B, "B");
  if (mode_even.spec.kind != Kind::Even || mode_odd.spec.kind != Kind::Odd)
    throw DomainError("superposition needs an even-kind and an odd-kind mode");
  if (mode_even.spec.g != mode_odd.spec.g || mode_even.spec.i != mode_odd.spec.i)
    throw DomainError("superposed modes must share (g, i)");
  if (mode_even.geometry.c != mode_odd.geometry.c || mode_even.geometry.theta != mode_odd.geometry.theta)
    throw DomainError("superposed modes must share the geometry");
  if (opt.grid < 4) throw DomainError("grid too coarse");
  SuperposedNodal out;
  out.gap = std::abs(mode_even.lambda - mode_odd.lambda) / mode_even.lambda;
  if (out.gap > opt.max_gap) {
    std::ostringstream os;
    os << "modes are not near-degenerate: relative gap " << out.gap << " > " << opt.max_gap;
    throw DomainError(os.str());
  }
  const int g = mode_even.spec.g;
  out.axis_symmetric = (A == 0 || B == 0);
  out.pi_shift_sign = (g % 2 == 0) ? 1 : -1;
  const auto& P1 = *mode_odd.P;
  const auto& P2 = *mode_even.P;
  out.alpha_roots = scan_roots([&](double a) { return A * P1(a) + B * P2(a); }, 0, kPi, 4096);
  out.ellipse_betas_even = mode_even.Q->roots(0, mode_even.geometry.theta, 4096);
  out.ellipse_betas_odd = mode_odd.Q->roots(0, mode_odd.geometry.theta, 4096);

  const int n = opt.grid;
  const double th = mode_even.geometry.theta, c = mode_even.geometry.c;
  std::vector<double> al(n + 1), be(n + 1), p1(n + 1), p2(n + 1), q1(n + 1), q2(n + 1);
  for (int k = 0; k <= n; ++k) {
    al[k] = 2 * kPi * k / n;
    be[k] = th * k / n;
    p1[k] = P1(al[k]);
    p2[k] = P2(al[k]);
    q1[k] = mode_odd.Q->eval(be[k]).Q;
    q2[k] = mode_even.Q->eval(be[k]).Q;
  }
  std::vector<double> F(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) F[static_cast<std::size_t>(i) * (n + 1) + j] = A * p1[i] * q1[j] + B * p2[i] * q2[j];
  for (auto& line : march(al, be, F)) {
    Polyline pl;
    for (auto [a, b] : line) pl.emplace_back(c * std::cosh(b) * std::cos(a), c * std::sinh(b) * std::sin(a));
    out.level_set.push_back(std::move(pl));
  }
  return out;
}

std::string nodal_svg(const EllipseGeometry& geometry, const NodalGeometry& nodal) {
  const double A = geometry.semi_major(), Bm = geometry.semi_minor(), c = geometry.c;
  const double m = 0.05 * A;
  auto f = [](double v) { return fmt_fixed(v, 6); };
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\""
     << static_cast<int>(std::lround(800 * (Bm + m) / (A + m))) << "\" viewBox=\"" << f(-A - m) << ' '
     << f(-Bm - m) << ' ' << f(2 * (A + m)) << ' ' << f(2 * (Bm + m)) << "\">\n"
     << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"" << f(A / 200) << "\">\n"
     << "<ellipse class=\"boundary\" cx=\"0\" cy=\"0\" rx=\"" << f(A) << "\" ry=\"" << f(Bm)
     << "\" stroke=\"black\"/>\n";
  for (auto [ra, rb] : nodal.ellipse_axes)
    os << "<ellipse class=\"nodal-ellipse\" cx=\"0\" cy=\"0\" rx=\"" << f(ra) << "\" ry=\"" << f(rb)
       << "\" stroke=\"blue\"/>\n";
  if (nodal.includes_major_axis)
    os << "<line class=\"major-axis\" x1=\"" << f(-A) << "\" y1=\"0\" x2=\"" << f(A)
       << "\" y2=\"0\" stroke=\"red\"/>\n";
  constexpr int kSamples = 64;
  for (double r : nodal.hyperbolic_alphas) {
    if (std::abs(r) < kAxisTol) continue;
    for (double a : {r, r + kPi}) {
      os << "<polyline class=\"hyperbola\" stroke=\"red\" points=\"";
      for (int k = 0; k <= kSamples; ++k) {
        double b = geometry.theta * k / kSamples;
        if (k) os << ' ';
        os << f(c * std::cosh(b) * std::cos(a)) << ',' << f(c * std::sinh(b) * std::sin(a));
      }
      os << "\"/>\n";
    }
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string nodal_csv(const NodalGeometry& nodal) {
  std::ostringstream os;
  os << "root,type,count_weight\n";
  for (double a : nodal.hyperbolic_alphas) {
    const char* type = std::abs(a) < kAxisTol                ? "major_axis"
                       : std::abs(a - kPi / 2) < kAxisTol ? "minor_axis"
                                                           : "hyperbola";
    os << fmt_g(a) << ',' << type << ",1\n";
  }
  for (double b : nodal.ellipse_betas) os << fmt_g(b) << ",ellipse,1\n";
  return os.str();
}

void export_nodal_svg(const EllipseGeometry& geometry, const NodalGeometry& nodal, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << nodal_svg(geometry, nodal);
  if (!f) throw Error("write failed: " + path);
}

}  // namespace ellmem
