#include "ellmem/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ellmem/format.hpp"
#include "ellmem/nodal.hpp"
#include "ellmem/synthesis.hpp"

namespace ellmem {

namespace {

struct GeometryFlags {
  std::optional<double> c, theta;
  std::vector<double> axes;

  void attach(CLI::App* cmd) {
    cmd->add_option("--focal-c", c, "focal half-distance c");
    cmd->add_option("--theta", theta, "boundary coordinate (beta = theta)");
    cmd->add_option("--semi-axes", axes, "A,B semi-axes instead of c and theta")
        ->delimiter(',')
        ->expected(2);
  }

  EllipseGeometry resolve() const {
    const bool focal = c || theta;
    if (focal && !axes.empty()) throw DomainError("give either --focal-c/--theta or --semi-axes, not both");
    if (!axes.empty()) return EllipseGeometry::from_axes(axes[0], axes[1]);
    if (!c || !theta) throw DomainError("geometry needs --focal-c and --theta, or --semi-axes A,B");
    return EllipseGeometry::from_focal(*c, *theta);
  }
};

Kind parse_kind(const std::string& s) { return s == "odd" ? Kind::Odd : Kind::Even; }

void geometry_header(std::ostream& out, const EllipseGeometry& g) {
  out << "# c=" << fmt_g(g.c) << " theta=" << fmt_g(g.theta) << " A=" << fmt_g(g.semi_major())
      << " B=" << fmt_g(g.semi_minor()) << " e=" << fmt_g(g.eccentricity()) << '\n';
}

const char* char_name(Kind k) { return k == Kind::Odd ? "R'" : "R"; }

// Modes of every (kind, g <= max_order) family, i <= max_index, ordered by lambda.
std::vector<MembraneMode> all_modes(const EllipseGeometry& geom, int max_order, int max_index,
                                    const SpectrumOptions& opt) {
  std::vector<std::future<std::vector<MembraneMode>>> jobs;
  for (int g = 0; g <= max_order; ++g)
    for (Kind k : {Kind::Even, Kind::Odd}) {
      if (k == Kind::Odd && g == 0) continue;
      jobs.push_back(std::async(std::launch::async,
                                [=] { return find_lambdas(geom, k, g, max_index, opt); }));
    }
  std::vector<MembraneMode> modes;
  for (auto& j : jobs) {
    auto ms = j.get();
    modes.insert(modes.end(), ms.begin(), ms.end());
  }
  std::stable_sort(modes.begin(), modes.end(), [](const auto& a, const auto& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return a.spec < b.spec;
  });
  return modes;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vibration modes of elliptic membranes"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file; also read from MATHIEU_CONFIG")
      ->envname("MATHIEU_CONFIG");
  app.allow_config_extras(CLI::config_extras_mode::error);

  double tol = 1e-10, scan_ceiling = 0;
  int quad_order = 64;
  app.add_option("--tol", tol, "root-finding tolerance")->check(CLI::PositiveNumber);
  app.add_option("--quad-order", quad_order, "starting Gauss-Legendre order")
      ->check(CLI::IsMember({16, 32, 64, 128, 256, 512}));
  app.add_option("--scan-ceiling", scan_ceiling, "lambda scan ceiling; 0 estimates it")
      ->check(CLI::NonNegativeNumber);

  const auto kinds = CLI::IsMember({"even", "odd"});

  // charval
  auto* charval = app.add_subcommand("charval", "characteristic value R of order g");
  charval->set_help_flag("--help", "print help");  // frees the name h
  int cv_g = 0;
  std::string cv_kind, cv_method = "shooting";
  double cv_h = 0;
  charval->add_option("--order", cv_g, "order g")->required()->check(CLI::NonNegativeNumber);
  charval->add_option("--kind", cv_kind, "even or odd")->required()->check(kinds);
  charval->add_option("--h", cv_h, "h = lambda c")->required()->check(CLI::NonNegativeNumber);
  charval->add_option("--method", cv_method)->check(CLI::IsMember({"series", "shooting", "both"}));

  // modes
  auto* modes = app.add_subcommand("modes", "membrane eigenvalues sorted by frequency");
  GeometryFlags m_geom;
  int m_order = 0, m_index = 1;
  double wave_speed = 1;
  m_geom.attach(modes);
  modes->add_option("--max-order", m_order)->required()->check(CLI::NonNegativeNumber);
  modes->add_option("--max-index", m_index)->required()->check(CLI::PositiveNumber);
  modes->add_option("--wave-speed", wave_speed, "m, with m^2 = tension / density")
      ->check(CLI::PositiveNumber);

  // nodal
  auto* nodal = app.add_subcommand("nodal", "nodal lines of one mode");
  GeometryFlags n_geom;
  int n_g = 0, n_i = 1;
  std::string n_kind, n_svg;
  n_geom.attach(nodal);
  nodal->add_option("--order", n_g)->required()->check(CLI::NonNegativeNumber);
  nodal->add_option("--index", n_i)->required()->check(CLI::PositiveNumber);
  nodal->add_option("--kind", n_kind)->required()->check(kinds);
  nodal->add_option("--svg", n_svg, "write the nodal diagram here");

  // annulus
  auto* annulus = app.add_subcommand("annulus", "modes between two confocal ellipses");
  double a_c = 0, a_in = 0, a_out = 0;
  int a_g = 0, a_n = 1;
  std::string a_kind;
  annulus->add_option("--focal-c", a_c)->required()->check(CLI::PositiveNumber);
  annulus->add_option("--theta-inner", a_in)->required()->check(CLI::NonNegativeNumber);
  annulus->add_option("--theta-outer", a_out)->required()->check(CLI::PositiveNumber);
  annulus->add_option("--order", a_g)->required()->check(CLI::NonNegativeNumber);
  annulus->add_option("--kind", a_kind)->required()->check(kinds);
  annulus->add_option("--max-index", a_n)->required()->check(CLI::PositiveNumber);

  // expand
  auto* expand = app.add_subcommand("expand", "expand an initial velocity field in modes");
  GeometryFlags e_geom;
  int e_order = 0, e_index = 1;
  std::string e_field, e_csv;
  e_geom.attach(expand);
  expand->add_option("--max-order", e_order)->required()->check(CLI::NonNegativeNumber);
  expand->add_option("--max-index", e_index)->required()->check(CLI::PositiveNumber);
  expand->add_option("--wave-speed", wave_speed)->check(CLI::PositiveNumber);
  auto* f_named = expand->add_option("--field", e_field, "built-in field: even, odd, bump");
  auto* f_csv = expand->add_option("--field-csv", e_csv, "CSV grid alpha,beta,value");
  f_named->excludes(f_csv);

  // circle
  auto* circle = app.add_subcommand("circle", "circular membrane reference roots");
  double c_radius = 1;
  int c_n = 0, c_count = 1;
  circle->add_option("--radius", c_radius)->check(CLI::PositiveNumber);
  circle->add_option("--order", c_n)->required()->check(CLI::NonNegativeNumber);
  circle->add_option("--count", c_count)->required()->check(CLI::PositiveNumber);

  if (const char* cfg = std::getenv("MATHIEU_CONFIG"); cfg && *cfg && !std::ifstream(cfg)) {
    err << "error: MATHIEU_CONFIG names an unreadable file: " << cfg << '\n';
    return 2;
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  SpectrumOptions sopt{tol, scan_ceiling};
  try {
    std::ostringstream buf;  // nothing reaches `out` unless the command succeeds
    auto settings = [&] {
      buf << "# tol=" << fmt_g(tol) << " scan_ceiling=" << fmt_g(scan_ceiling) << " quad_order=" << quad_order
          << '\n';
    };
    if (*charval) {
      Kind k = parse_kind(cv_kind);
      if (k == Kind::Odd && cv_g == 0) throw DomainError("odd kind needs --order >= 1");
      buf << "# charval order=" << cv_g << " kind=" << cv_kind << " h=" << fmt_g(cv_h) << '\n';
      buf << "method,name,R,M\n";
      std::optional<CharacteristicValue> series, shoot;
      if (cv_method != "shooting") series = charval_series(cv_g, k, cv_h);
      if (cv_method != "series") shoot = charval_shoot(cv_g, k, cv_h, std::min(tol, 1e-11));
      for (const auto& [name, cv] : {std::pair{"series", series}, std::pair{"shooting", shoot}})
        if (cv) buf << name << ',' << char_name(k) << ',' << fmt_g(cv->R) << ',' << fmt_g(cv->M()) << '\n';
      if (series && shoot) {
        // the last retained term bounds the truncation error of a decreasing series
        auto r = charval_series_coeffs(cv_g, k);
        double bound = 1e-10, pw = 1;
        for (std::size_t j = 0; j < r.size(); ++j, pw *= cv_h * cv_h)
          if (j > 0 && r[j] != 0) bound = std::max(1e-10, std::abs(r[j] * pw));
        buf << "# disagreement=" << fmt_g(std::abs(series->R - shoot->R)) << " bound=" << fmt_g(bound)
            << '\n';
      }
    } else if (*modes) {
      auto geom = m_geom.resolve();
      MembraneMaterial mat{wave_speed};
      geometry_header(buf, geom);
      settings();
      buf << "kind,g,i,lambda,R,frequency\n";
      for (const auto& m : all_modes(geom, m_order, m_index, sopt))
        buf << kind_name(m.spec.kind) << ',' << m.spec.g << ',' << m.spec.i << ',' << fmt_g(m.lambda) << ','
            << fmt_g(m.cv.R) << ',' << fmt_g(frequency(m.lambda, mat)) << '\n';
    } else if (*nodal) {
      auto geom = n_geom.resolve();
      Kind k = parse_kind(n_kind);
      if (k == Kind::Odd && n_g == 0) throw DomainError("odd kind needs --order >= 1");
      auto mode = find_lambda(geom, k, n_g, n_i, tol);
      auto ng = nodal_geometry(mode);
      geometry_header(buf, geom);
      buf << "# mode kind=" << n_kind << " g=" << n_g << " i=" << n_i << " lambda=" << fmt_g(mode.lambda)
          << " hyperbolic_lines=" << ng.counted_hyperbolic_lines
          << " ellipses=" << ng.ellipse_betas.size() << '\n';
      buf << nodal_csv(ng);
      if (!n_svg.empty()) export_nodal_svg(geom, ng, n_svg);
    } else if (*annulus) {
      if (!(a_out > a_in)) throw DomainError("--theta-outer must exceed --theta-inner");
      Kind k = parse_kind(a_kind);
      if (k == Kind::Odd && a_g == 0) throw DomainError("odd kind needs --order >= 1");
      buf << "# annulus c=" << fmt_g(a_c) << " theta_inner=" << fmt_g(a_in) << " theta_outer=" << fmt_g(a_out)
          << '\n';
      buf << "kind,g,i,lambda,R,boundary_residual,interior_zeros\n";
      for (int i = 1; i <= a_n; ++i) {
        auto m = annulus_find_lambda(a_c, a_in, a_out, k, a_g, i, tol);
        buf << a_kind << ',' << a_g << ',' << i << ',' << fmt_g(m.lambda) << ',' << fmt_g(m.cv.R) << ','
            << fmt_g(m.boundary_residual) << ',' << m.interior_zeros.size() << '\n';
      }
    } else if (*expand) {
      auto geom = e_geom.resolve();
      MembraneMaterial mat{wave_speed};
      VelocityField field;
      if (!e_csv.empty())
        field = field_from_csv(read_file(e_csv));
      else if (!e_field.empty())
        field = builtin_field(e_field, geom);
      else
        throw DomainError("expand needs --field or --field-csv");
      auto ms = all_modes(geom, e_order, e_index, sopt);
      auto ex = expand_velocity(field, ms, mat, quad_order);
      geometry_header(buf, geom);
      settings();
      buf << "# residual_norm=" << fmt_g(ex.residual_norm) << '\n';
      buf << "kind,g,i,lambda,coeff\n";
      std::vector<ModalTerm> terms = ex.terms;
      std::stable_sort(terms.begin(), terms.end(),
                       [](const auto& a, const auto& b) { return a.mode.spec < b.mode.spec; });
      for (const auto& t : terms)
        buf << kind_name(t.mode.spec.kind) << ',' << t.mode.spec.g << ',' << t.mode.spec.i << ','
            << fmt_g(t.mode.lambda) << ',' << fmt_g(t.coeff) << '\n';
    } else if (*circle) {
      buf << "# circle radius=" << fmt_g(c_radius) << '\n';
      buf << "n,s,tau,lambda\n";
      for (const auto& m : circle_modes(c_radius, c_n, c_count))
        buf << m.n << ',' << m.s << ',' << fmt_g(m.tau) << ',' << fmt_g(m.lambda) << '\n';
    }
    out << buf.str();
    return 0;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace ellmem
