#include "spou/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "spou/config.hpp"
#include "spou/errors.hpp"
#include "spou/frame.hpp"
#include "spou/pou.hpp"
#include "spou/report.hpp"
#include "spou/spline.hpp"
#include "spou/transform.hpp"

namespace spou::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    const size_t end = s.find(sep, start);
    out.push_back(s.substr(start, end == std::string::npos ? end : end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

// Writes either to a file or to stdout when path is empty.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw io_error("cannot write output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    if (file_.is_open()) {
      file_.flush();
      if (!file_) throw io_error("write failed");
    }
  }

 private:
  std::ofstream file_;
};

struct SystemArgs {
  std::string profile;
  std::string matrix;
  std::string norm = "euclid";
  bool nonneg = false;
};

void add_system_options(CLI::App* cmd, SystemArgs& args) {
  cmd->add_option("--profile", args.profile, "radial profile: config file or builtin spec")
      ->required();
  cmd->add_option("--matrix", args.matrix, "matrix config file")->required();
  cmd->add_option("--norm", args.norm, "norm: euclid | max");
  cmd->add_flag("--nonneg", args.nonneg, "require the nonnegativity guarantee");
}

PartitionSystem build_system(const SystemArgs& args) {
  const RadialProfile prof = load_profile(args.profile);
  const SquareMatrix m = load_matrix(args.matrix);
  return build_radial_pou(prof, m, parse_norm(args.norm), args.nonneg);
}

void print_certificate(std::ostream& os, const ExpansionCertificate& cert) {
  os << "is_expanding = " << (cert.is_expanding ? "true" : "false") << '\n';
  os << "spectral_radius_of_inverse = " << fmt_double(cert.spectral_radius_of_inverse) << '\n';
  os << "norm_monotone = " << (cert.norm_monotone ? "true" : "false") << '\n';
  if (cert.growth) {
    os << "growth_C = " << fmt_double(cert.growth->C) << " # sampled witness, not a proof\n";
    os << "growth_alpha = " << fmt_double(cert.growth->alpha) << '\n';
  }
}

std::string pair_summary(const FrameGeneratorPair& pair) {
  KeyValueConfig cfg;
  cfg.set("kind", pair.kind);
  if (pair.kind == "spline-dual") {
    cfg.set_int("n", pair.spline_order);
    cfg.set_double("c", pair.spline_ratio);
  }
  cfg.set_double("b", pair.b);
  cfg.set_double("r_eff", pair.r_eff);
  cfg.set("psi_support", "[" + fmt_double(pair.psi_support.r_lo) + ", " +
                             fmt_double(pair.psi_support.r_hi) + "]");
  cfg.set("psi_dual_support", "[" + fmt_double(pair.psi_dual_support.r_lo) + ", " +
                                  fmt_double(pair.psi_dual_support.r_hi) + "]");
  cfg.set("plateau_value", fmt_double(pair.plateau_value));
  cfg.set("m_nonzero_route",
          pair.support_disjointness_route ? "support-disjointness" : "not-established");
  if (pair.index_set) {
    cfg.set_int("j_min", pair.index_set->j_min);
    cfg.set_int("j_max", pair.index_set->j_max);
  }
  return cfg.dump();
}

int cmd_pou_build(const SystemArgs& args) {
  const PartitionSystem sys = build_system(args);
  std::cout << "system = " << sys.description << '\n';
  std::cout << "norm = " << norm_name(sys.norm) << '\n';
  std::cout << "target = " << fmt_double(sys.target_constant) << '\n';
  if (sys.g.support) {
    std::cout << "support = [" << fmt_double(sys.g.support->r_lo) << ", "
              << fmt_double(sys.g.support->r_hi) << "]\n";
  }
  std::cout << "nonneg_guaranteed = " << (sys.nonneg_guaranteed ? "true" : "false") << '\n';
  std::cout << "square_sum_lower_bounded = "
            << (sys.square_sum_lower_bounded ? "true" : "false") << '\n';
  if (sys.certificate) print_certificate(std::cout, *sys.certificate);
  return 0;
}

struct VerifyArgs {
  SystemArgs sys;
  int samples = 1024;
  bool band_only = false;
  double tol = 1e-10;
  std::string range;  // lo:hi overriding the band
  std::string csv;
};

int cmd_pou_verify(const VerifyArgs& args) {
  const PartitionSystem sys = build_system(args.sys);

  GridSpec grid;
  grid.n_radii = args.samples;
  grid.n_directions = sys.M.dim() == 1 ? 2 : 64;
  if (!args.range.empty() && !args.band_only) {
    const auto parts = split(args.range, ':');
    if (parts.size() != 2) throw input_error("--range expects lo:hi");
    grid.r_lo = std::stod(parts[0]);
    grid.r_hi = std::stod(parts[1]);
  } else {
    const auto band = default_band(sys);
    grid.r_lo = band.r_lo;
    grid.r_hi = band.r_hi;
  }

  const auto pts = make_grid(grid, sys.M.dim());
  auto rep = verify_partition(sys, pts, args.tol, !args.csv.empty());
  rep.grid_spec = grid.describe();
  std::cout << to_keyvalue(rep);

  if (!args.csv.empty()) {
    OutputTarget out(args.csv);
    write_samples_csv(out.stream(), rep, "sum", true, false);
    out.finish();
  }
  return rep.passed ? 0 : 1;
}

struct TransformArgs {
  std::string f = "exp-abs";
  double c = 0.5;
  std::string grid = "0:2:101";
  std::string out;
};

int cmd_transform_eval(const TransformArgs& args) {
  Function1D f;
  if (args.f.rfind("spline:", 0) == 0) {
    const int n = std::stoi(args.f.substr(7));
    f = as_integrand(build_spline(n, args.c));
  } else {
    f = integrands::from_spec(args.f);
  }
  const GridSpec grid = parse_grid_spec(args.grid, /*default_log=*/false);
  const auto radii = spaced_radii(grid.r_lo, grid.r_hi, grid.n_radii, grid.log_spacing);

  OutputTarget out(args.out);
  out.stream() << "gamma,value,quad_error\n";
  for (double gamma : radii) {
    const auto r = transform_1d_result(f, args.c, gamma, {});
    out.stream() << fmt_double(gamma) << ',' << fmt_double(r.value) << ','
                 << fmt_double(r.error_bound) << '\n';
  }
  out.finish();
  return 0;
}

struct SplineArgs {
  int n = 2;
  double c = 0.5;
  std::string emit = "pieces";
  std::string grid = "0:1:101";
  std::string out;
};

int cmd_spline_build(const SplineArgs& args) {
  const PiecewiseEvenSpline s = build_spline(args.n, args.c);
  OutputTarget out(args.out);
  if (args.emit == "pieces") {
    // one line per interval, coefficients in ascending powers
    for (const auto& p : s.pieces()) {
      out.stream() << '[' << fmt_double(p.lo) << ',' << fmt_double(p.hi) << "] :";
      for (double a : p.coeff) out.stream() << ' ' << fmt_double(a);
      out.stream() << '\n';
    }
  } else if (args.emit == "csv") {
    const GridSpec grid = parse_grid_spec(args.grid, /*default_log=*/false);
    const auto radii = spaced_radii(grid.r_lo, grid.r_hi, grid.n_radii, grid.log_spacing);
    out.stream() << "gamma,value\n";
    for (double gamma : radii)
      out.stream() << fmt_double(gamma) << ',' << fmt_double(s(gamma)) << '\n';
  } else {
    throw input_error("--emit must be pieces or csv");
  }
  out.finish();
  return 0;
}

struct Frame1dArgs {
  int n = 2;
  double c = 0.5;
  double b = 0.25;
  std::string out;
};

int cmd_frame_build1d(const Frame1dArgs& args) {
  const FrameGeneratorPair pair = build_spline_dual_pair(args.n, args.c, args.b);
  std::cout << pair_summary(pair);
  if (!args.out.empty()) save_pair(pair, args.out);
  return 0;
}

struct FrameRadialArgs {
  std::string profile;
  std::string matrix;
  std::string norm = "euclid";
  double b = -1.0;
  std::string out;
};

int cmd_frame_buildradial(const FrameRadialArgs& args) {
  const RadialProfile prof = load_profile(args.profile);
  const SquareMatrix m = load_matrix(args.matrix);
  std::optional<double> b;
  if (args.b > 0.0) b = args.b;
  const FrameGeneratorPair pair = build_radial_dual_pair(prof, m, b, parse_norm(args.norm));
  std::cout << pair_summary(pair);
  if (!args.out.empty()) save_pair(pair, args.out);
  return 0;
}

struct FrameVerifyArgs {
  std::string pair_file;
  std::string grid;
  std::string csv;
  double tol = 1e-10;
};

int cmd_frame_verify(const FrameVerifyArgs& args) {
  const FrameGeneratorPair pair = load_pair(args.pair_file);

  GridSpec grid;
  if (!args.grid.empty()) {
    grid = parse_grid_spec(args.grid, /*default_log=*/true);
  } else {
    grid.r_lo = pair.psi_support.r_lo * (1.0 + 1e-9);
    grid.r_hi = pair.psi_support.r_hi;
    grid.n_radii = 1024;
    grid.n_directions = pair.dim() == 1 ? 2 : 64;
  }

  auto rep = verify_dual_relation(pair, grid, {}, !args.csv.empty());
  rep.base.tolerance = args.tol;
  rep.base.finalize();
  std::cout << to_keyvalue(rep.base);
  std::cout << "support_check = " << (rep.support_check_passed ? "pass" : "fail") << '\n';
  std::cout << "plateau_max_dev = " << fmt_double(rep.plateau_max_dev) << '\n';

  const auto est = frame_bounds(pair.psi_hat, pair.freq_dilation, pair.b, grid);
  std::cout << "A_est = " << fmt_double(est.A_est) << '\n';
  std::cout << "B_est = " << fmt_double(est.B_est) << '\n';
  std::cout << "bounds_note = " << est.notes << '\n';

  if (!args.csv.empty()) {
    OutputTarget out(args.csv);
    write_samples_csv(out.stream(), rep.base, "dual_sum", false, true);
    out.finish();
  }
  return rep.base.passed && rep.support_check_passed ? 0 : 1;
}

}  // namespace

GridSpec parse_grid_spec(const std::string& text, bool default_log) {
  const auto parts = split(text, ':');
  if (parts.size() < 3) throw input_error("grid spec expects lo:hi:n[:dirs][:log|lin]");
  auto number = [&](const std::string& tok) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw input_error("grid spec: bad number '" + tok + "'");
    }
    if (used != tok.size()) throw input_error("grid spec: bad number '" + tok + "'");
    return v;
  };
  GridSpec g;
  g.r_lo = number(parts[0]);
  g.r_hi = number(parts[1]);
  g.n_radii = static_cast<int>(number(parts[2]));
  g.log_spacing = default_log;
  size_t i = 3;
  if (parts.size() > i && parts[i] != "log" && parts[i] != "lin") {
    g.n_directions = static_cast<int>(number(parts[i]));
    ++i;
  }
  if (parts.size() > i) {
    if (parts[i] == "log")
      g.log_spacing = true;
    else if (parts[i] == "lin")
      g.log_spacing = false;
    else
      throw input_error("grid spacing must be log or lin");
  }
  return g;
}

void emit_grid(const ScalarField& field, const GridSpec& grid, std::ostream& os) {
  const int d = field.dim();
  const auto radii = spaced_radii(grid.r_lo, grid.r_hi, grid.n_radii, grid.log_spacing);
  if (d == 1) {
    os << "gamma,value\n";
    for (double r : radii) {
      const double x[1] = {r};
      os << fmt_double(r) << ',' << fmt_double(field(x)) << '\n';
    }
    return;
  }
  const auto dirs = sphere_directions(d, grid.n_directions, grid.seed);
  os << "radius";
  for (int i = 0; i < d; ++i) os << ",dir_" << i;
  os << ",value\n";
  std::vector<double> x(d);
  for (double r : radii)
    for (const auto& dir : dirs) {
      for (int i = 0; i < d; ++i) x[i] = r * dir[i];
      os << fmt_double(r);
      for (int i = 0; i < d; ++i) os << ',' << fmt_double(dir[i]);
      os << ',' << fmt_double(field(x)) << '\n';
    }
}

int run(int argc, const char* const* argv) {
  CLI::App app{"scaling partitions of unity, geometric-knot splines and dual wavelet frames"};
  app.require_subcommand(1);

  // pou
  auto* pou = app.add_subcommand("pou", "build and verify scaling partitions of unity");
  pou->require_subcommand(1);
  SystemArgs pou_build_args;
  auto* pou_build = pou->add_subcommand("build", "construct a radial partition system");
  add_system_options(pou_build, pou_build_args);
  VerifyArgs pou_verify_args;
  auto* pou_verify = pou->add_subcommand("verify", "check the dilation sum against its target");
  add_system_options(pou_verify, pou_verify_args.sys);
  pou_verify->add_option("--samples", pou_verify_args.samples, "radii per direction");
  pou_verify->add_flag("--band-only", pou_verify_args.band_only, "sample one scale band");
  pou_verify->add_option("--tol", pou_verify_args.tol, "pass/fail tolerance");
  pou_verify->add_option("--range", pou_verify_args.range, "radius range lo:hi (log spaced)");
  pou_verify->add_option("--csv", pou_verify_args.csv, "write per-sample rows to a CSV file");

  // transform
  auto* tr = app.add_subcommand("transform", "the shell integral transform");
  tr->require_subcommand(1);
  TransformArgs tr_args;
  auto* tr_eval = tr->add_subcommand("eval", "evaluate the transform on a gamma grid");
  tr_eval->add_option("--f", tr_args.f, "integrand: builtin spec or spline:<n>");
  tr_eval->add_option("--c", tr_args.c, "shell ratio in (0,1)");
  tr_eval->add_option("--grid", tr_args.grid, "gamma grid lo:hi:n[:log|lin]");
  tr_eval->add_option("--out", tr_args.out, "CSV output path (stdout when absent)");

  // spline
  auto* sp = app.add_subcommand("spline", "geometric-knot spline family");
  sp->require_subcommand(1);
  SplineArgs sp_args;
  auto* sp_build = sp->add_subcommand("build", "build and dump one spline");
  sp_build->add_option("-n,--order", sp_args.n, "spline order >= 1");
  sp_build->add_option("-c,--ratio", sp_args.c, "knot ratio in (0,1)");
  sp_build->add_option("--emit", sp_args.emit, "pieces | csv");
  sp_build->add_option("--grid", sp_args.grid, "eval grid for --emit csv");
  sp_build->add_option("--out", sp_args.out, "output path (stdout when absent)");

  // frame
  auto* fr = app.add_subcommand("frame", "dual wavelet frame generator pairs");
  fr->require_subcommand(1);
  Frame1dArgs fr1_args;
  auto* fr1 = fr->add_subcommand("build-1d", "spline generator pair");
  fr1->add_option("-n,--order", fr1_args.n, "spline order >= 2");
  fr1->add_option("-c,--ratio", fr1_args.c, "knot ratio in (0,1)");
  fr1->add_option("-b,--step", fr1_args.b, "translation step, 0 < b <= c^{n-1}/2");
  fr1->add_option("--out", fr1_args.out, "write the pair file here");
  FrameRadialArgs frr_args;
  auto* frr = fr->add_subcommand("build-radial", "radial plateau generator pair");
  frr->add_option("--profile", frr_args.profile, "plateau profile: file or builtin spec")
      ->required();
  frr->add_option("--matrix", frr_args.matrix, "matrix config file")->required();
  frr->add_option("--norm", frr_args.norm, "norm: euclid | max");
  frr->add_option("-b,--step", frr_args.b, "translation step (largest admissible when absent)");
  frr->add_option("--out", frr_args.out, "write the pair file here");
  FrameVerifyArgs frv_args;
  auto* frv = fr->add_subcommand("verify", "verify a stored pair");
  frv->add_option("--pair", frv_args.pair_file, "pair file")->required();
  frv->add_option("--grid", frv_args.grid, "grid lo:hi:n[:dirs][:log|lin]");
  frv->add_option("--csv", frv_args.csv, "write per-sample rows to a CSV file");
  frv->add_option("--tol", frv_args.tol, "pass/fail tolerance for the dual sum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (pou_build->parsed()) return cmd_pou_build(pou_build_args);
    if (pou_verify->parsed()) return cmd_pou_verify(pou_verify_args);
    if (tr_eval->parsed()) return cmd_transform_eval(tr_args);
    if (sp_build->parsed()) return cmd_spline_build(sp_args);
    if (fr1->parsed()) return cmd_frame_build1d(fr1_args);
    if (frr->parsed()) return cmd_frame_buildradial(frr_args);
    if (frv->parsed()) return cmd_frame_verify(frv_args);
    std::cerr << "error: no command selected\n";
    return 2;
  } catch (const io_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const quadrature_error& e) {
    std::cerr << "quadrature error: " << e.what()
              << " (best estimate " << fmt_double(e.best_estimate) << ", bound "
              << fmt_double(e.error_bound) << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.push_back("spou");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& s : full) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace spou::cli
