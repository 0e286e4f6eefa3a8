#pragma once

// sponge-spectra command-line front end. Exit codes: 0 success, 1 failed
// verification, 2 configuration error, 3 degenerate request.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sponge/dimension.hpp"
#include "sponge/io.hpp"
#include "sponge/localdim.hpp"
#include "sponge/optimize.hpp"
#include "sponge/spectra.hpp"
#include "sponge/sponge.hpp"

namespace sponge::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kDegenerate = 3 };

struct RunConfig {
  std::string command;
  std::string sponge_path;
  std::string potential_path;
  std::string measure_path;
  std::string kind = "packing";
  std::size_t grid = 201;
  std::string out_path;
  std::string format = "csv";
  std::string range;
  std::vector<std::string> boxes;
  unsigned jobs = 0;
  double solver_gap = 0.0;  // test hook; 0 keeps the default
};

namespace detail {

inline std::string num(double x) { return io::format_number(x); }

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

inline Interval parse_pair(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::Config, std::string(what) + " must be lo,hi");
  try {
    std::size_t used = 0;
    const std::string lo = text.substr(0, comma), hi = text.substr(comma + 1);
    Interval r{std::stod(lo, &used), 0.0};
    if (used != lo.size()) throw std::invalid_argument(lo);
    r.hi = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(hi);
    if (!(r.lo <= r.hi)) throw Error(ErrorCode::Config, std::string(what) + " needs lo <= hi");
    return r;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::Config, std::string(what) + " must be two numbers lo,hi");
  }
}

inline SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions opt;
  if (cfg.solver_gap > 0) opt.gap_tolerance = cfg.solver_gap;
  return opt;
}

inline std::string replace_extension(const std::string& path, const std::string& ext) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ext;
  return path.substr(0, dot) + ext;
}

// Writes the curve per --format/--out. Without --out the CSV (or SVG) goes to stdout.
inline void emit_curve(const RunConfig& cfg, const SpectrumCurve& curve, std::ostream& out) {
  const bool csv = cfg.format == "csv" || cfg.format == "both";
  const bool svg = cfg.format == "svg" || cfg.format == "both";
  if (cfg.out_path.empty()) {
    if (csv && svg) throw Error(ErrorCode::Config, "--format both needs --out");
    out << (csv ? io::curve_to_csv(curve) : io::curve_to_svg(curve));
    return;
  }
  if (csv) io::write_file(cfg.out_path, io::curve_to_csv(curve));
  if (svg) io::write_file(csv ? replace_extension(cfg.out_path, ".svg") : cfg.out_path, io::curve_to_svg(curve));
  out << "points " << curve.grid.size() << "\n";
  out << "dropped " << curve.dropped() << "\n";
  for (const auto& t : curve.transitions) out << "transition " << num(t.alpha) << " +- " << num(t.uncertainty) << "\n";
}

inline std::vector<double> curve_grid(const RunConfig& cfg, Interval dom) {
  const Interval range = cfg.range.empty() ? dom : parse_pair(cfg.range, "--range");
  return uniform_grid(range, cfg.grid);
}

}  // namespace detail

inline int cmd_dim(const RunConfig& cfg, std::ostream& out) {
  const SpongeSpec spec = io::load_sponge(cfg.sponge_path);
  const DimensionReport r = dimension_report(spec, {100, 1000, 10000}, detail::solver_options(cfg));
  out << "hausdorff " << detail::num(r.hausdorff) << "\n";
  out << "packing " << detail::num(r.packing) << "\n";
  if (r.mcmullen) out << "mcmullen " << detail::num(*r.mcmullen) << "\n";
  for (const auto& [n, est] : r.box_estimates) out << "box n=" << n << " " << detail::num(est) << "\n";
  for (std::size_t i = 0; i < r.optimizer.size(); ++i) {
    out << "optimizer " << to_string(r.optimizer.alphabet()[i]) << " " << detail::num(r.optimizer[i]) << "\n";
  }
  return kOk;
}

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SpongeSpec spec = io::load_sponge(cfg.sponge_path);
  if (cfg.potential_path.empty()) throw Error(ErrorCode::Config, "spectrum needs --potential");
  const Potential phi = io::load_potential(spec, cfg.potential_path);
  if (phi.components() != 1) throw Error(ErrorCode::Config, "curves need a scalar potential");
  const SpectrumKind kind = cfg.kind == "packing" ? SpectrumKind::PackingBirkhoff : SpectrumKind::HausdorffBirkhoff;
  const Interval dom = birkhoff_domain(spec, phi);
  if (dom.lo == dom.hi && cfg.grid > 1) {
    err << "A(phi) is the single point " << detail::num(dom.lo) << "; no curve to sample\n";
    return kDegenerate;
  }
  const SolverOptions opt = detail::solver_options(cfg);
  auto eval = [&](double alpha) {
    return kind == SpectrumKind::PackingBirkhoff ? packing_spectrum_point(spec, phi, alpha, opt)
                                                 : hausdorff_spectrum_point(spec, phi, alpha, opt);
  };
  const SpectrumCurve curve = sample_curve(kind, detail::curve_grid(cfg, dom), eval, cfg.jobs);
  detail::emit_curve(cfg, curve, out);
  return kOk;
}

inline int cmd_diverge(const RunConfig& cfg, std::ostream& out) {
  const SpongeSpec spec = io::load_sponge(cfg.sponge_path);
  if (cfg.potential_path.empty()) throw Error(ErrorCode::Config, "diverge needs --potential");
  const Potential phi = io::load_potential(spec, cfg.potential_path);
  std::vector<Interval> box;
  for (const auto& b : cfg.boxes) box.push_back(detail::parse_pair(b, "--box"));
  if (box.size() != phi.components()) throw Error(ErrorCode::Config, "give one --box per potential component");
  out << "divergence " << detail::num(divergence_spectrum(spec, phi, box, detail::solver_options(cfg))) << "\n";
  return kOk;
}

inline int cmd_localdim(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SpongeSpec spec = io::load_sponge(cfg.sponge_path);
  if (cfg.measure_path.empty()) throw Error(ErrorCode::Config, "localdim needs --measure");
  const ProbVector p = io::load_measure(spec, cfg.measure_path);
  const LocalDimSetup setup = pj_potential(spec, p);
  const Interval dom = localdim_domain(setup);
  if (dom.lo == dom.hi && cfg.grid > 1) {
    err << "local dimension is the constant " << detail::num(dom.lo) << "; no curve to sample\n";
    return kDegenerate;
  }
  const SolverOptions opt = detail::solver_options(cfg);
  const bool exact = setup.level.has_value();
  auto eval = [&](double alpha) {
    return exact ? localdim_packing_exact(setup, alpha, opt) : localdim_packing_lower(setup, alpha, opt);
  };
  const SpectrumCurve curve =
      sample_curve(exact ? SpectrumKind::LocalDim : SpectrumKind::LocalDimLower, detail::curve_grid(cfg, dom), eval, cfg.jobs);
  detail::emit_curve(cfg, curve, out);
  return kOk;
}

namespace detail {

struct Check {
  std::string name;
  enum { Pass, Fail, Skipped } state = Pass;
  double max_error = 0.0;
};

inline void print_check(std::ostream& out, const Check& c) {
  static const char* names[] = {"PASS", "FAIL", "SKIPPED"};
  out << "CHECK " << c.name << " " << names[c.state] << " " << sci(c.max_error) << "\n";
}

inline Check grid_vs_solver(const SpongeSpec& spec, const Potential& phi, const Interval& dom, const SolverOptions& opt) {
  Check c{"grid-vs-solver"};
  const std::size_t m = spec.digit_count();
  if (m > 5) {
    c.state = Check::Skipped;
    return c;
  }
  const int resolution = m <= 4 ? 200 : 60;
  const double tolerance = 0.6 / resolution;
  for (double alpha : uniform_grid(dom, dom.lo == dom.hi ? 1 : 11)) {
    EntropyProgram prog = EntropyProgram::simplex(m);
    prog.equalities.push_back({phi.column(0), alpha});
    add_weighted_entropy_terms(spec, prog);
    const OptReport solved = maximize_entropy_program(prog, opt);
    const GridResult grid = grid_maximize(prog, resolution);
    const double diff = solved.value - grid.value;
    c.max_error = std::max(c.max_error, std::abs(diff));
    if (diff < -1e-9 || diff > tolerance) c.state = Check::Fail;
  }
  return c;
}

}  // namespace detail

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  using detail::Check;
  const SpongeSpec spec = io::load_sponge(cfg.sponge_path);
  const Potential phi = cfg.potential_path.empty() ? Potential::indicator(spec, spec.digits().front())
                                                   : io::load_potential(spec, cfg.potential_path);
  if (phi.components() != 1) throw Error(ErrorCode::Config, "verify needs a scalar potential");
  const SolverOptions opt = detail::solver_options(cfg);
  const Interval dom = birkhoff_domain(spec, phi);
  const double packing = packing_dimension(spec);
  const HausdorffResult hausdorff = hausdorff_dimension(spec, opt);
  std::vector<Check> checks;

  checks.push_back(detail::grid_vs_solver(spec, phi, dom, opt));

  Check mcmullen{"mcmullen"};
  if (spec.dim() == 2) {
    mcmullen.max_error = std::abs(hausdorff.value - mcmullen_closed_form(spec));
    if (mcmullen.max_error > 1e-7) mcmullen.state = Check::Fail;
  } else {
    mcmullen.state = Check::Skipped;
  }
  checks.push_back(mcmullen);

  Check box{"box-count"};
  const double log_ad = std::log(static_cast<double>(spec.base(spec.dim())));
  for (std::int64_t n : {100, 1000, 10000}) {
    const double error = std::abs(box_dim_estimate(spec, n) - packing);
    const double bound = static_cast<double>(spec.dim()) * std::log(static_cast<double>(spec.digit_count())) /
                         (static_cast<double>(n) * log_ad);
    box.max_error = std::max(box.max_error, error);
    if (error > bound + 1e-12) box.state = Check::Fail;
  }
  checks.push_back(box);

  Check concavity{"concavity"};
  std::vector<double> spectrum_values;
  if (dom.lo == dom.hi) {
    concavity.state = Check::Skipped;
  } else {
    for (auto kind : {SpectrumKind::PackingBirkhoff, SpectrumKind::HausdorffBirkhoff}) {
      const SpectrumCurve curve = spectrum_curve(spec, phi, {101, std::nullopt}, kind, opt, cfg.jobs);
      const ConcavityReport r = verify_concavity(curve);
      concavity.max_error = std::max(concavity.max_error, r.max_violation);
      if (!r.pass || curve.dropped() > 0) concavity.state = Check::Fail;
      for (const auto& v : curve.values) {
        if (v) spectrum_values.push_back(*v);
      }
    }
  }
  checks.push_back(concavity);

  Check affine{"affine-invariance"};
  for (const auto& [a, b] : {std::pair{2.0, 1.0}, std::pair{-3.0, 0.5}}) {
    const Potential psi = phi.affine(a, b);
    for (double alpha : uniform_grid(dom, dom.lo == dom.hi ? 1 : 5)) {
      const double beta = a * alpha + b;
      const double dp = std::abs(packing_spectrum_point(spec, psi, beta, opt) - packing_spectrum_point(spec, phi, alpha, opt));
      const double dh =
          std::abs(hausdorff_spectrum_point(spec, psi, beta, opt) - hausdorff_spectrum_point(spec, phi, alpha, opt));
      affine.max_error = std::max({affine.max_error, dp, dh});
    }
  }
  if (affine.max_error > 1e-10) affine.state = Check::Fail;
  checks.push_back(affine);

  Check order{"dimension-order"};
  order.max_error = std::max(0.0, hausdorff.value - packing);
  for (double v : spectrum_values) order.max_error = std::max(order.max_error, v - packing);
  if (order.max_error > 1e-9) order.state = Check::Fail;
  checks.push_back(order);

  bool ok = true;
  for (const auto& c : checks) {
    detail::print_check(out, c);
    ok = ok && c.state != Check::Fail;
  }
  return ok ? kOk : kVerifyFailed;
}

/// Runs the CLI on `args` (without the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Dimensions and multifractal spectra of self-affine sponges", "sponge-spectra"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--jobs", cfg.jobs, "Worker threads for curve sampling (0: all cores)");

  auto* dim = app.add_subcommand("dim", "Hausdorff, packing and box dimensions");
  dim->add_option("sponge", cfg.sponge_path, "Sponge JSON")->required();

  auto* spectrum = app.add_subcommand("spectrum", "Sample a Birkhoff spectrum curve");
  spectrum->add_option("sponge", cfg.sponge_path, "Sponge JSON")->required();
  spectrum->add_option("--potential", cfg.potential_path, "Potential JSON")->required();
  spectrum->add_option("--kind", cfg.kind, "packing or hausdorff")->check(CLI::IsMember({"packing", "hausdorff"}));
  spectrum->add_option("--grid", cfg.grid, "Number of grid points")->check(CLI::Range(3, 1000000));
  spectrum->add_option("--out", cfg.out_path, "Output path");
  spectrum->add_option("--format", cfg.format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));
  spectrum->add_option("--range", cfg.range, "Override the alpha range as lo,hi");

  auto* diverge = app.add_subcommand("diverge", "Packing dimension of a divergence set");
  diverge->add_option("sponge", cfg.sponge_path, "Sponge JSON")->required();
  diverge->add_option("--potential", cfg.potential_path, "Potential JSON")->required();
  diverge->add_option("--box", cfg.boxes, "lo,hi per potential component")->required();

  auto* localdim = app.add_subcommand("localdim", "Packing spectrum of local dimension");
  localdim->add_option("sponge", cfg.sponge_path, "Sponge JSON")->required();
  localdim->add_option("--measure", cfg.measure_path, "Measure JSON")->required();
  localdim->add_option("--grid", cfg.grid, "Number of grid points")->check(CLI::Range(3, 1000000));
  localdim->add_option("--out", cfg.out_path, "Output path");
  localdim->add_option("--format", cfg.format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));
  localdim->add_option("--range", cfg.range, "Override the alpha range as lo,hi");

  auto* verify = app.add_subcommand("verify", "Run the numerical self-checks");
  verify->add_option("sponge", cfg.sponge_path, "Sponge JSON")->required();
  verify->add_option("--potential", cfg.potential_path, "Potential JSON");
  verify->add_option("--solver-gap", cfg.solver_gap)->group("");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*dim) return cmd_dim(cfg, out);
    if (*spectrum) return cmd_spectrum(cfg, out, err);
    if (*diverge) return cmd_diverge(cfg, out);
    if (*localdim) return cmd_localdim(cfg, out, err);
    if (*verify) return cmd_verify(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::OutsideDomain ? kDegenerate : kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace sponge::cli
