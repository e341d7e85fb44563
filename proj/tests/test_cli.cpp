#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "ellmem/cli.hpp"
#include "oracle.hpp"

using namespace ellmem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> cells(const std::string& row) {
  std::vector<std::string> v;
  std::istringstream in(row);
  for (std::string c; std::getline(in, c, ',');) v.push_back(c);
  return v;
}

// first non-comment line after the header row
std::vector<std::string> first_row(const std::string& out) {
  bool header = false;
  for (auto& l : lines(out)) {
    if (l.empty() || l[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    return cells(l);
  }
  return {};
}

std::filesystem::path scratch_dir() {
  auto d = std::filesystem::temp_directory_path() / "ellmem_cli_test";
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("charval") {
  auto r = run({"charval", "--order", "2", "--kind", "even", "--h", "0.5", "--method", "both"});
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[1] == "method,name,R,M");
  double Rs = std::stod(cells(ls[2])[2]), Rh = std::stod(cells(ls[3])[2]);
  CHECK(cells(ls[2])[0] == "series");
  CHECK(cells(ls[3])[0] == "shooting");
  double bound = std::stod(ls[4].substr(ls[4].find("bound=") + 6));
  CHECK(std::abs(Rs - Rh) <= bound);

  auto odd = run({"charval", "--order", "3", "--kind", "odd", "--h", "0.4"});
  REQUIRE(odd.code == 0);
  CHECK(cells(lines(odd.out)[2])[1] == "R'");

  auto zero = run({"charval", "--order", "1", "--kind", "even", "--h", "0"});
  REQUIRE(zero.code == 0);
  CHECK(std::stod(cells(lines(zero.out)[2])[2]) == 1.0);

  CHECK(run({"charval", "--order", "0", "--kind", "odd", "--h", "0.5"}).code == 2);
  CHECK(run({"charval", "--order", "2", "--kind", "sideways", "--h", "0.5"}).code == 2);
  CHECK(run({"charval", "--order", "2", "--kind", "even"}).code == 2);
  CHECK(run({"charval", "--order", "2", "--kind", "even", "--h", "-1"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  // series diverges far outside its range
  CHECK(run({"charval", "--order", "1", "--kind", "even", "--h", "6", "--method", "series"}).code == 3);
}

TEST_CASE("modes") {
  const double e = 0.05;
  const std::string B = std::to_string(std::sqrt(1 - e * e));
  std::vector<std::string> args{"modes", "--semi-axes", "1," + B, "--max-order", "2", "--max-index", "2",
                                "--wave-speed", "1"};
  auto r = run(args);
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  CHECK(ls[0].rfind("# c=", 0) == 0);
  CHECK(ls[0].find(" A=1 ") != std::string::npos);
  CHECK(ls[2] == "kind,g,i,lambda,R,frequency");
  CHECK(ls.size() == 3 + 10);
  auto row = first_row(r.out);
  CHECK(row[0] == "even");
  CHECK(row[1] == "0");
  double tau = oracle::bessel_zero(0, 1) / 2;
  CHECK(std::abs(std::stod(row[3]) - tau) / tau <= 2 * e * e);
  double prev = 0;
  for (std::size_t k = 3; k < ls.size(); ++k) {
    double f = std::stod(cells(ls[k])[5]);
    CHECK(f >= prev);
    prev = f;
  }
  CHECK(run(args).out == r.out);
  CHECK(r.out.find('\r') == std::string::npos);

  auto minimal = run({"modes", "--focal-c", "0.5", "--theta", "1", "--max-order", "0", "--max-index", "1"});
  REQUIRE(minimal.code == 0);
  CHECK(lines(minimal.out).size() == 4);

  CHECK(run({"modes", "--focal-c", "0.5", "--max-order", "0", "--max-index", "1"}).code == 2);
  CHECK(run({"modes", "--semi-axes", "1,2", "--max-order", "0", "--max-index", "1"}).code == 2);
  CHECK(run({"modes", "--semi-axes", "1,0.5", "--max-order", "0", "--max-index", "0"}).code == 2);
  CHECK(run({"--scan-ceiling", "0.5", "modes", "--semi-axes", "1,0.5", "--max-order", "0", "--max-index", "2"}).code ==
        3);
}

TEST_CASE("configuration file and overrides") {
  auto dir = scratch_dir();
  auto cfg = (dir / "good.ini").string();
  std::ofstream(cfg) << "tol = 1e-8\nquad-order = 32\n";
  auto bad = (dir / "bad.ini").string();
  std::ofstream(bad) << "bogus = 1\n";
  std::vector<std::string> base{"modes", "--semi-axes", "1,0.8", "--max-order", "0", "--max-index", "1"};

  auto with = [&](std::vector<std::string> pre, std::vector<std::string> post) {
    pre.insert(pre.end(), base.begin(), base.end());
    pre.insert(pre.end(), post.begin(), post.end());
    return run(pre);
  };
  auto d = with({}, {});
  CHECK(lines(d.out)[1] == "# tol=1e-10 scan_ceiling=0 quad_order=64");
  auto f = with({"--config", cfg}, {});
  CHECK(lines(f.out)[1] == "# tol=1e-08 scan_ceiling=0 quad_order=32");
  auto o = with({"--config", cfg, "--tol", "1e-9"}, {});
  CHECK(lines(o.out)[1] == "# tol=1e-09 scan_ceiling=0 quad_order=32");
  auto after = with({"--config", cfg}, {"--quad-order", "128"});
  CHECK(lines(after.out)[1] == "# tol=1e-08 scan_ceiling=0 quad_order=128");
  CHECK(with({"--config", bad}, {}).code == 2);
  CHECK(with({"--quad-order", "48"}, {}).code == 2);

  ::setenv("MATHIEU_CONFIG", cfg.c_str(), 1);
  auto env = with({}, {});
  CHECK(lines(env.out)[1] == "# tol=1e-08 scan_ceiling=0 quad_order=32");
  CHECK(with({"--tol", "1e-9"}, {}).out.find("# tol=1e-09 ") != std::string::npos);
  ::setenv("MATHIEU_CONFIG", (dir / "absent.ini").string().c_str(), 1);
  CHECK(with({}, {}).code == 2);
  ::unsetenv("MATHIEU_CONFIG");
}

TEST_CASE("nodal") {
  auto svg = (scratch_dir() / "n.svg").string();
  std::filesystem::remove(svg);
  auto r = run({"nodal", "--semi-axes", "1,0.6", "--order", "2", "--index", "3", "--kind", "even", "--svg", svg});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("root,type,count_weight\n") != std::string::npos);
  int ell = 0, hyp = 0;
  for (auto& l : lines(r.out)) {
    ell += l.find(",ellipse,") != std::string::npos;
    hyp += l.find(",hyperbola,") != std::string::npos;
  }
  CHECK(ell == 2);
  CHECK(hyp == 2);
  CHECK(std::filesystem::file_size(svg) > 0);
  CHECK(run({"nodal", "--semi-axes", "1,0.6", "--order", "2", "--index", "1", "--kind", "even", "--svg",
             (scratch_dir() / "no" / "such" / "dir.svg").string()})
            .code != 0);
}

TEST_CASE("annulus") {
  auto r = run({"annulus", "--focal-c", "1", "--theta-inner", "0.3", "--theta-outer", "1.2", "--order", "2", "--kind",
                "even", "--max-index", "3"});
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[1] == "kind,g,i,lambda,R,boundary_residual,interior_zeros");
  for (int i = 1; i <= 3; ++i) {
    auto c = cells(ls[1 + i]);
    CHECK(std::stoi(c[6]) == i - 1);
    CHECK(std::stod(c[5]) < 1e-10);
  }
  CHECK(run({"annulus", "--focal-c", "1", "--theta-inner", "1.3", "--theta-outer", "1.2", "--order", "2", "--kind",
             "even", "--max-index", "1"})
            .code == 2);
}

TEST_CASE("expand") {
  std::vector<std::string> args{"expand", "--semi-axes", "1,0.8", "--field", "bump", "--max-order", "1",
                                "--max-index", "1"};
  auto r = run(args);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("kind,g,i,lambda,coeff\n") != std::string::npos);
  CHECK(r.out.find("# residual_norm=") != std::string::npos);
  CHECK(run(args).out == r.out);

  // the same field sampled to a grid gives nearly the same coefficients
  auto csv = (scratch_dir() / "field.csv").string();
  {
    std::ofstream f(csv);
    f << "alpha,beta,value\n" << std::setprecision(17);
    const double c = 0.6, th = std::atanh(0.8), A = 1, Bm = 0.8;
    for (int i = 0; i < 96; ++i)
      for (int j = 0; j < 48; ++j) {
        double a = 2 * std::numbers::pi * i / 96, b = th * j / 47;
        double x = c * std::cosh(b) * std::cos(a), y = c * std::sinh(b) * std::sin(a);
        double s = 1 - x * x / (A * A) - y * y / (Bm * Bm);
        f << a << ',' << b << ',' << s * s * (1 + 0.5 * x / A + 0.7 * y / Bm) << '\n';
      }
  }
  auto g = run({"expand", "--semi-axes", "1,0.8", "--field-csv", csv, "--max-order", "1", "--max-index", "1"});
  REQUIRE(g.code == 0);
  auto la = lines(r.out), lb = lines(g.out);
  REQUIRE(la.size() == lb.size());
  for (std::size_t k = 4; k < la.size(); ++k)
    CHECK(std::stod(cells(lb[k])[4]) == doctest::Approx(std::stod(cells(la[k])[4])).epsilon(1e-3));

  CHECK(run({"expand", "--semi-axes", "1,0.8", "--max-order", "1", "--max-index", "1"}).code == 2);
  CHECK(run({"expand", "--semi-axes", "1,0.8", "--field", "plaid", "--max-order", "1", "--max-index", "1"}).code == 2);
  CHECK(run({"expand", "--semi-axes", "1,0.8", "--field-csv", "/nonexistent/x.csv", "--max-order", "1",
             "--max-index", "1"})
            .code == 2);
}

TEST_CASE("circle") {
  auto r = run({"circle", "--order", "1", "--count", "3", "--radius", "2"});
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[1] == "n,s,tau,lambda");
  for (int s = 1; s <= 3; ++s) {
    auto c = cells(ls[1 + s]);
    CHECK(std::stod(c[2]) == doctest::Approx(oracle::bessel_zero(1, s) / 2).epsilon(1e-14));
    CHECK(std::stod(c[3]) == doctest::Approx(std::stod(c[2]) / 2).epsilon(1e-14));
  }
  CHECK(run({"circle", "--order", "1", "--count", "0"}).code == 2);
}
