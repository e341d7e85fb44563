#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ellmem/nodal.hpp"

using namespace ellmem;
using std::numbers::pi;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

int count(const std::string& s, const std::string& needle) {
  int n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("hyperbolic lines for low orders") {
  auto geom = EllipseGeometry::from_eccentricity(1, 0.5);
  auto odd1 = hyperbolic_nodal_angles(find_lambda(geom, Kind::Odd, 1, 1));
  CHECK(odd1.includes_major_axis);
  CHECK_FALSE(odd1.includes_minor_axis);
  CHECK(odd1.hyperbolic_alphas.size() == 1);
  CHECK(odd1.counted_hyperbolic_lines == 1);

  auto even2 = hyperbolic_nodal_angles(find_lambda(geom, Kind::Even, 2, 1));
  CHECK_FALSE(even2.includes_major_axis);
  CHECK_FALSE(even2.includes_minor_axis);
  REQUIRE(even2.hyperbolic_alphas.size() == 2);
  CHECK(even2.hyperbolic_alphas[0] + even2.hyperbolic_alphas[1] == doctest::Approx(pi).epsilon(1e-10));
  CHECK(even2.counted_hyperbolic_lines == 2);

  auto even0 = hyperbolic_nodal_angles(find_lambda(geom, Kind::Even, 0, 1));
  CHECK(even0.hyperbolic_alphas.empty());
  CHECK(even0.counted_hyperbolic_lines == 0);
}

TEST_CASE("pure modes: g hyperbolic lines and i - 1 ellipses") {
  for (double e : {0.3, 0.7}) {
    auto geom = EllipseGeometry::from_eccentricity(1, e);
    for (int g = 0; g <= 4; ++g)
      for (Kind k : {Kind::Even, Kind::Odd}) {
        if (k == Kind::Odd && g == 0) continue;
        for (int i = 1; i <= 3; ++i) {
          auto ng = nodal_geometry(find_lambda(geom, k, g, i));
          CAPTURE(g);
          CAPTURE(i);
          CHECK(ng.counted_hyperbolic_lines == g);
          CHECK(static_cast<int>(ng.ellipse_betas.size()) == i - 1);
          CHECK(ng.includes_major_axis == (k == Kind::Odd));
          CHECK(ng.includes_minor_axis == (g % 2 == (k == Kind::Odd ? 0 : 1)));
          CHECK(std::is_sorted(ng.hyperbolic_alphas.begin(), ng.hyperbolic_alphas.end()));
        }
      }
  }
}

TEST_CASE("nodal ellipses") {
  auto geom = EllipseGeometry::from_eccentricity(1, 0.3);
  CHECK(nodal_ellipses(find_lambda(geom, Kind::Even, 0, 1)).empty());
  auto m = find_lambda(geom, Kind::Odd, 1, 3);
  auto ng = nodal_geometry(m);
  REQUIRE(ng.ellipse_axes.size() == 2);
  for (auto [a, b] : ng.ellipse_axes) {
    CHECK(a * a - b * b == doctest::Approx(geom.c * geom.c).epsilon(1e-12));
    CHECK(a < geom.semi_major());
  }
  for (double b : ng.ellipse_betas) CHECK(std::abs(m.Q->eval(b).Q) <= 1e-10 * std::abs(m.Q->norm()) + 1e-12);

  // a mode with a wrong radial index cannot pass the count check
  auto fake = m;
  fake.spec.i = 2;
  CHECK_THROWS_AS(nodal_ellipses(fake), NumericError);
}

TEST_CASE("near-circular nodal ellipses approach the circle radii") {
  const double e = 0.05;
  auto geom = EllipseGeometry::from_eccentricity(1, e);
  auto ng = nodal_geometry(find_lambda(geom, Kind::Even, 0, 3));
  auto circ = circle_modes(1, 0, 3);
  REQUIRE(ng.ellipse_axes.size() == 2);
  // inner ellipses are more eccentric than the boundary; compare mean radii
  const double mean_boundary = 0.5 * (geom.semi_major() + geom.semi_minor());
  for (int k = 0; k < 2; ++k) {
    double r = circ[k].tau / circ[2].tau;
    double mean = 0.5 * (ng.ellipse_axes[k].first + ng.ellipse_axes[k].second) / mean_boundary;
    CHECK(std::abs(mean - r) / r <= 2 * e * e);
  }
}

TEST_CASE("superposed degenerate pair") {
  auto geom = EllipseGeometry::from_eccentricity(1, 0.2);
  auto ev = find_lambda(geom, Kind::Even, 3, 1);
  auto od = find_lambda(geom, Kind::Odd, 3, 1);
  REQUIRE(degenerate_pair_gap(geom, 3, 1) < 0.05);

  auto pure = superposed_nodal(ev, od, 1, 0, {.grid = 128});
  CHECK(pure.axis_symmetric);
  auto ref = hyperbolic_nodal_angles(od).hyperbolic_alphas;
  REQUIRE(pure.alpha_roots.size() == ref.size());
  for (std::size_t k = 0; k < ref.size(); ++k) CHECK(pure.alpha_roots[k] == doctest::Approx(ref[k]));

  for (double t : {0.1, 0.7, 1.3, 2.2, 3.0}) {
    double A = std::cos(t), B = std::sin(t);
    auto s = superposed_nodal(ev, od, A, B, {.grid = 128});
    CHECK(s.alpha_roots.size() == 3);
    CHECK_FALSE(s.axis_symmetric);
    CHECK(s.pi_shift_sign == -1);
    CHECK_FALSE(s.level_set.empty());
  }

  // points on the extracted level set are zeros of the combined field
  auto s = superposed_nodal(ev, od, 1, 0.6, {.grid = 256});
  auto field = [&](double x, double y) {
    auto pt = cartesian_to_elliptic(geom.c, x, y);
    return od.shape(pt.alpha, pt.beta) + 0.6 * ev.shape(pt.alpha, pt.beta);
  };
  double vmax = 0;
  for (int k = 0; k < 64; ++k) vmax = std::max(vmax, std::abs(field(0.5 * std::cos(k * 0.1), 0.3 * std::sin(k * 0.1))));
  for (const auto& line : s.level_set)
    for (std::size_t p = 0; p < line.size(); p += 7) CHECK(std::abs(field(line[p].first, line[p].second)) < 0.02 * vmax);
}

TEST_CASE("superposition with even g is invariant under a half turn") {
  auto geom = EllipseGeometry::from_eccentricity(1, 0.15);
  auto ev = find_lambda(geom, Kind::Even, 2, 1);
  auto od = find_lambda(geom, Kind::Odd, 2, 1);
  auto s = superposed_nodal(ev, od, 1, 1, {.grid = 64});
  CHECK(s.pi_shift_sign == 1);
  CHECK(s.alpha_roots.size() == 2);
  for (double a : {0.2, 0.9, 1.7, 2.6})
    CHECK(od.P->eval(a + pi).first + ev.P->eval(a + pi).first ==
          doctest::Approx(od.P->eval(a).first + ev.P->eval(a).first).epsilon(1e-10));
}

TEST_CASE("superposition refuses separated pairs") {
  auto geom = EllipseGeometry::from_eccentricity(1, 0.8);
  auto ev = find_lambda(geom, Kind::Even, 1, 1);
  auto od = find_lambda(geom, Kind::Odd, 1, 1);
  CHECK_THROWS_AS(superposed_nodal(ev, od, 1, 1), DomainError);
  CHECK_THROWS_AS(superposed_nodal(od, ev, 1, 1), DomainError);
  auto other = find_lambda(geom, Kind::Odd, 2, 1);
  CHECK_THROWS_AS(superposed_nodal(ev, other, 1, 1), DomainError);
}

TEST_CASE("symmetry across the major axis") {
  auto geom = EllipseGeometry::from_eccentricity(1, 0.6);
  for (int g = 1; g <= 3; ++g) {
    auto od = find_lambda(geom, Kind::Odd, g, 2);
    auto ev = find_lambda(geom, Kind::Even, g, 2);
    for (double a : {0.3, 1.1, 2.5})
      for (double b : {0.1, 0.5}) {
        CHECK(od.shape(-a, b) == doctest::Approx(-od.shape(a, b)).epsilon(1e-10));
        CHECK(ev.shape(-a, b) == doctest::Approx(ev.shape(a, b)).epsilon(1e-10));
      }
  }
}

TEST_CASE("amplitude near the focal segment") {
  auto geom = EllipseGeometry::from_eccentricity(1, 0.6);
  const double d = 1e-3;
  for (int g : {2, 3}) {
    auto m = find_lambda(geom, Kind::Even, g, 1);
    REQUIRE(m.cv.M() > 0);
    // m on the segment between the foci, m' just off it on the same hyperbola
    for (double a : {0.2, 1.2, 2.0}) {
      if (std::abs(m.shape(a, 0)) < 1e-3) continue;
      CHECK(std::abs(m.shape(a, 0)) < std::abs(m.shape(a, d)));
    }
    // n between focus and vertex, n' just off it on the same ellipse
    for (double b : {0.2, 0.5}) {
      if (std::abs(m.shape(0, b)) < 1e-3) continue;
      CHECK(std::abs(m.shape(0, b)) > std::abs(m.shape(d, b)));
    }
  }
}

TEST_CASE("svg and csv output") {
  auto geom = EllipseGeometry::from_eccentricity(1, 0.5);
  NodalGeometry empty;
  auto bare = nodal_svg(geom, empty);
  CHECK(count(bare, "<ellipse") == 1);
  CHECK(count(bare, "<polyline") == 0);
  CHECK(count(bare, "<line") == 0);

  auto ng = nodal_geometry(find_lambda(geom, Kind::Even, 2, 2));
  auto svg = nodal_svg(geom, ng);
  CHECK(count(svg, "class=\"hyperbola\"") == 4);
  CHECK(count(svg, "class=\"nodal-ellipse\"") == 1);

  auto dir = std::filesystem::temp_directory_path() / "ellmem_nodal_test";
  std::filesystem::create_directories(dir);
  auto p1 = (dir / "a.svg").string(), p2 = (dir / "b.svg").string();
  export_nodal_svg(geom, ng, p1);
  export_nodal_svg(geom, nodal_geometry(find_lambda(geom, Kind::Even, 2, 2)), p2);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(slurp(p1) == slurp(ELLMEM_GOLDEN_DIR "/nodal_even_g2_i2.svg"));
  CHECK_THROWS_AS(export_nodal_svg(geom, ng, (dir / "missing" / "x.svg").string()), Error);

  auto csv = nodal_csv(ng);
  CHECK(csv.rfind("root,type,count_weight\n", 0) == 0);
  CHECK(count(csv, ",hyperbola,1\n") == 2);
  CHECK(count(csv, ",ellipse,1\n") == 1);
  CHECK(csv.find('\r') == std::string::npos);
  auto odd = nodal_csv(hyperbolic_nodal_angles(find_lambda(geom, Kind::Odd, 1, 1)));
  CHECK(count(odd, ",major_axis,1\n") == 1);
}
