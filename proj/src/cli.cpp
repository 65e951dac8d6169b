#include "coexist/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "coexist/svg.hpp"

namespace coexist {

namespace {

constexpr const char* kSurrogateNote =
    "index values are desk-scale surrogates: finite-dimensional Brouwer degrees on "
    "polygonal regions, with boundary conditions checked on finite samples; the "
    "operator-level index in function space is not directly computable";

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct Outputs {
  std::optional<std::string> csv, svg;
};

SolverOptions solver_options(const ProblemSpec& spec) {
  SolverOptions so;
  so.tol = spec.solver.tol;
  so.max_iter = spec.solver.max_iter;
  so.anderson = spec.solver.acceleration;
  so.window = spec.solver.window;
  return so;
}

// ---- integral systems ------------------------------------------------------

ojson kernel_report(const ProblemSpec& spec, size_t k, int n, std::vector<std::string>& notes,
                    bool& bounds_fail) {
  const KernelSpec& G = spec.kernels[k].spec;
  const KernelConstants kc = kernel_constants(G, n);
  const KernelBoundsReport kb = verify_kernel_bounds(G);
  ojson e;
  e["name"] = G.name.empty() ? "kernel-" + std::to_string(k + 1) : G.name;
  e["constants"] = to_json(kc);
  e["bounds"] = to_json(kb);
  if (!kb.pass) bounds_fail = true;

  const ojson& expected = spec.kernels[k].expected;
  if (!expected.is_null()) {
    const double got[6] = {kc.d, kc.D, kc.S, kc.Sc, kc.s_in, kc.sc_in};
    const char* keys[6] = {"d", "D", "S", "Sc", "s", "sc"};
    ojson rows = ojson::array();
    bool agrees = true;
    for (int i = 0; i < 6; ++i) {
      if (!expected.contains(keys[i])) continue;
      const double want = expected.at(keys[i]).get<double>();
      const double rel = std::abs(got[i] - want) / std::max(1.0, std::abs(want));
      rows.push_back(ojson{{"name", keys[i]},
                           {"computed", got[i]},
                           {"reference", want},
                           {"rel-diff", rel},
                           {"agrees", rel <= 1e-6}});
      if (rel > 1e-6) agrees = false;
    }
    e["reference-comparison"] = rows;
    e["reference-agrees"] = agrees;
    if (!agrees)
      notes.push_back(e["name"].get<std::string>() +
                      ": computed constants disagree with the reference values in the "
                      "problem file; the computed values are used downstream");
  }
  return e;
}

int cmd_constants(const ProblemSpec& spec, ojson& results, std::vector<std::string>& notes) {
  bool bounds_fail = false;
  ojson arr = ojson::array();
  for (size_t k = 0; k < spec.kernels.size(); ++k)
    arr.push_back(kernel_report(spec, k, spec.grid, notes, bounds_fail));
  results["kernels"] = arr;
  for (const auto& e : arr) {
    std::cout << e.at("name").get<std::string>() << ": d=" << e["constants"]["d"]
              << " D=" << e["constants"]["D"] << " S=" << e["constants"]["S"]
              << " Sc=" << e["constants"]["Sc"] << " s=" << e["constants"]["s"]
              << " sc=" << e["constants"]["sc"]
              << (e["bounds"]["pass"].get<bool>() ? "" : "  [bounds FAIL]") << "\n";
  }
  return bounds_fail ? 2 : 0;
}

Certificate hammerstein_certificate(const ProblemSpec& spec) {
  CertifyOptions co;
  co.n = spec.grid;
  co.box_grid = spec.box_grid;
  return certify_shell(*spec.theorem, spec.kernel_specs(), spec.nonlinearities(), *spec.r,
                       *spec.R, *spec.A, *spec.B, co);
}

void print_certificate(const Certificate& cert) {
  for (const auto& ch : cert.checks)
    std::cout << "  " << ch.name << ": " << (ch.pass ? "pass" : "FAIL") << " (" << ch.lhs
              << (ch.strict ? " vs " : " vs ") << ch.rhs << ", margin " << ch.margin << ")"
              << (ch.note.empty() ? "" : "  [" + ch.note + "]") << "\n";
  std::cout << "verdict: " << (cert.verdict ? "PASS" : "FAIL") << "\n";
}

int solve_hammerstein(const ProblemSpec& spec, ojson& results, Outputs& out, bool want_svg) {
  const NystromOperator T(spec.kernel_specs(), spec.nonlinearities(), make_grid(spec.grid));
  SolverResult res = solve_system(T, spec.initial_guess(T.grid()), solver_options(spec));
  bool local_fail = false;
  if (res.converged && spec.theorem && spec.r && spec.R) {
    res.localization = theorem_localization(*spec.theorem, T, res.x, *spec.r, *spec.R);
    res.localized = true;
    for (const auto& l : res.localization) res.localized = res.localized && l.pass;
    local_fail = !res.localized;
  }
  results["solve"] = to_json(res);

  std::cout << (res.converged ? "converged" : "NOT CONVERGED") << " in " << res.iterations
            << " iterations, residual " << res.residual << "\n";
  for (const auto& l : res.localization)
    std::cout << "  " << l.name << ": " << (l.pass ? "pass" : "FAIL") << " (" << l.value
              << (l.lower ? " > " : " < ") << l.bound << ")\n";
  if (!res.converged) return 3;

  out.csv = solution_csv(T.grid(), res.x[0], res.x[1]);
  if (want_svg) {
    std::optional<Interval> J = spec.kernels[0].spec.J;
    out.svg = solution_svg(T.grid(), res.x[0], res.x[1], J, spec.r, spec.R);
  }
  const bool trivial_fail = spec.scalar() ? res.trivial[0] : (res.trivial[0] || res.trivial[1]);
  if (trivial_fail) std::cout << "trivial component detected\n";
  return (local_fail || trivial_fail) ? 2 : 0;
}

// ---- Phi-Laplacian systems --------------------------------------------------

ojson search_json(const SmallRadiusSearch& sr) {
  ojson j;
  j["found"] = sr.found;
  j["tried"] = sr.tried;
  if (sr.found) {
    j["r"] = sr.r;
    j["certificate"] = to_json(sr.certificate);
  }
  return j;
}

// Resolves the localization radii of a Phi-Laplacian spec, running the
// small-radius search when the spec asks for it.  Returns false on a
// certified failure.
bool philap_radii(const ProblemSpec& spec, const PhiProblem& P, ojson& results,
                  std::optional<std::array<double, 2>>& r) {
  r = spec.r;
  if (r || !spec.search_small) return true;
  CertifyOptions co;
  co.box_grid = spec.box_grid;
  const SmallRadiusSearch sr = search_small_r(P, *spec.R, co);
  results["small-r-search"] = search_json(sr);
  if (!sr.found) {
    std::cout << "small-radius search: no passing radius found\n";
    return false;
  }
  std::cout << "small-radius search: r = " << sr.r << " after " << sr.tried.size()
            << " candidates\n";
  r = std::array<double, 2>{sr.r, sr.r};
  return true;
}

int cmd_certify_philap(const ProblemSpec& spec, ojson& results) {
  const PhiProblem P = spec.phi_problem();
  CertifyOptions co;
  co.box_grid = spec.box_grid;
  if (!spec.r && spec.search_small) {
    const SmallRadiusSearch sr = search_small_r(P, *spec.R, co);
    results["small-r-search"] = search_json(sr);
    if (!sr.found) {
      std::cout << "small-radius search: no passing radius found\n";
      return 2;
    }
    std::cout << "small-radius search: r = " << sr.r << " after " << sr.tried.size()
              << " candidates\n";
    print_certificate(sr.certificate);
    return 0;
  }
  if (!spec.r || !spec.R) {
    std::cerr << "error: certify needs 'r' and 'R' (or search-small-r)\n";
    return 1;
  }
  const Certificate cert = certify_philap(P, *spec.r, *spec.R, co);
  results["certificate"] = to_json(cert);
  print_certificate(cert);
  return cert.verdict ? 0 : 2;
}

int solve_philap_cmd(const ProblemSpec& spec, ojson& results, Outputs& out, bool want_svg) {
  const PhiProblem P = spec.phi_problem();
  std::optional<std::array<double, 2>> r;
  if (!philap_radii(spec, P, results, r)) return 2;

  SolverResult res = solve_philap(P, spec.initial_guess(*P.grid), solver_options(spec));
  bool local_fail = false;
  if (res.converged && r && spec.R) {
    res.localization = philap_localization(P, res.x, *r, *spec.R);
    res.localized = true;
    for (const auto& l : res.localization) res.localized = res.localized && l.pass;
    local_fail = !res.localized;
  }
  results["solve"] = to_json(res);

  std::cout << (res.converged ? "converged" : "NOT CONVERGED") << " in " << res.iterations
            << " iterations, residual " << res.residual << "\n";
  for (const auto& l : res.localization)
    std::cout << "  " << l.name << ": " << (l.pass ? "pass" : "FAIL") << " (" << l.value
              << (l.lower ? " > " : " < ") << l.bound << ")\n";
  if (!res.converged) return 3;

  out.csv = solution_csv(*P.grid, res.x[0], res.x[1]);
  if (want_svg) out.svg = solution_svg(*P.grid, res.x[0], res.x[1], std::nullopt, r, spec.R);
  const bool trivial_fail = res.trivial[0] || res.trivial[1];
  if (trivial_fail) std::cout << "trivial component detected\n";
  return (local_fail || trivial_fail) ? 2 : 0;
}

int cmd_asymptotics(const ProblemSpec& spec, ojson& results) {
  const AsymptoticsReport rep = check_asymptotics(spec.phi_problem());
  results["asymptotics"] = to_json(rep);
  std::cout << "phi ratios bounded: " << (rep.ratios_bounded ? "yes" : "NO")
            << ", f/phi diverges at 0: " << (rep.diverges ? "yes" : "NO") << "\n";
  return rep.ratios_bounded && rep.diverges ? 0 : 2;
}

// Richardson refinement of the localization functional gamma under grid
// doubling; second-order quadrature should give ratios near 4.
ojson philap_refinement(const ProblemSpec& spec) {
  const int fine = spec.grid;
  const int mid = (fine + 1) / 2, coarse = (mid + 1) / 2;
  std::array<std::array<double, 2>, 3> gam{};
  const int grids[3] = {coarse, mid, fine};
  for (int g = 0; g < 3; ++g) {
    const PhiProblem P = spec.phi_problem(grids[g]);
    const SolverResult res = solve_philap(P, spec.initial_guess(*P.grid), solver_options(spec));
    for (int j = 0; j < 2; ++j)
      gam[g][j] = res.converged ? gamma_functional(*P.grid, res.x[j])
                                : std::numeric_limits<double>::quiet_NaN();
  }
  ojson out;
  out["grids"] = {grids[0], grids[1], grids[2]};
  out["gamma"] = {ojson{gam[0][0], gam[1][0], gam[2][0]},
                  ojson{gam[0][1], gam[1][1], gam[2][1]}};
  ojson ratios = ojson::array();
  for (int j = 0; j < 2; ++j)
    ratios.push_back((gam[0][j] - gam[1][j]) / (gam[1][j] - gam[2][j]));
  out["gamma-ratios"] = ratios;
  return out;
}

// ---- planar example ---------------------------------------------------------

ojson bump_results(const ProblemSpec& spec, BumpReport& rep) {
  BumpOptions opts = spec.bump;
  opts.seed = spec.seed;
  rep = verify_bump_map(spec.bump_map(), opts);
  ojson results;
  results["bump"] = to_json(rep);
  results["per-component-index"] = {rep.component_index.degree, rep.component_index.degree};
  results["product-index"] = rep.component_index.degree * rep.component_index.degree;
  return results;
}

void print_bump(const BumpReport& rep) {
  std::cout << "norm margins: inner " << rep.norms[0].margin << ", outer "
            << rep.norms[1].margin << (rep.margins_pass ? " (pass)" : " (FAIL)") << "\n"
            << "non-expansion witness on every sphere: "
            << (rep.witness_everywhere ? "yes" : "NO") << "\n"
            << "component index: " << rep.component_index.degree << " (predicted "
            << rep.predicted << ")\n"
            << "fixed points located: " << rep.fixed_points.size() << ", worst curve defect "
            << rep.worst_curve_defect << "\n";
}

// ---- dispatch ---------------------------------------------------------------

int dispatch(const CliOptions& opt, const ProblemSpec& spec, ojson& results,
             std::vector<std::string>& notes, Outputs& out) {
  const bool ham = spec.kind == SpecKind::Hammerstein;
  const bool phl = spec.kind == SpecKind::PhiLaplacian;
  const bool pla = spec.kind == SpecKind::Planar;

  auto usage = [&](const char* msg) {
    std::cerr << "error: " << msg << "\n";
    return 1;
  };

  if (opt.command == "constants") {
    if (!ham) return usage("'constants' applies to integral-system specs");
    return cmd_constants(spec, results, notes);
  }

  if (opt.command == "certify") {
    if (ham) {
      if (!spec.theorem) return usage("'certify' needs a 'theorem' field in the spec");
      const Certificate cert = hammerstein_certificate(spec);
      results["certificate"] = to_json(cert);
      const ConditionFlags flags = theorem_flags(*spec.theorem);
      results["condition-pattern"] = {to_string(flags.component[0]),
                                      to_string(flags.component[1])};
      results["predicted-index"] = predicted_index(flags);
      print_certificate(cert);
      return cert.verdict ? 0 : 2;
    }
    if (phl) return cmd_certify_philap(spec, results);
    BumpReport rep;
    results = bump_results(spec, rep);
    notes.push_back(kSurrogateNote);
    print_bump(rep);
    return rep.margins_pass && rep.witness_everywhere ? 0 : 2;
  }

  if (opt.command == "solve") {
    if (pla) return usage("'solve' applies to integral and Phi-Laplacian specs");
    return ham ? solve_hammerstein(spec, results, out, opt.svg)
               : solve_philap_cmd(spec, results, out, opt.svg);
  }

  if (opt.command == "index") {
    notes.push_back(kSurrogateNote);
    if (pla) {
      BumpReport rep;
      results = bump_results(spec, rep);
      print_bump(rep);
      return rep.component_index.degree == rep.predicted && rep.margins_pass ? 0 : 2;
    }
    ConditionFlags flags;
    if (ham) {
      if (!spec.theorem) return usage("'index' needs a 'theorem' field in the spec");
      flags = theorem_flags(*spec.theorem);
    }
    results["condition-pattern"] = {to_string(flags.component[0]),
                                    to_string(flags.component[1])};
    results["expansive-count"] = flags.expansive_count();
    results["predicted-index"] = predicted_index(flags);
    std::cout << "condition pattern (" << to_string(flags.component[0]) << ", "
              << to_string(flags.component[1]) << "), predicted index "
              << predicted_index(flags) << "\n";
    return 0;
  }

  if (opt.command == "asymptotics") {
    if (!phl) return usage("'asymptotics' applies to Phi-Laplacian specs");
    return cmd_asymptotics(spec, results);
  }

  // report: everything applicable to the spec kind
  int worst = 0;
  auto fold = [&worst](int code) { worst = std::max(worst, code); };
  if (ham) {
    bool bounds_fail = false;
    ojson arr = ojson::array();
    for (size_t k = 0; k < spec.kernels.size(); ++k)
      arr.push_back(kernel_report(spec, k, spec.grid, notes, bounds_fail));
    results["kernels"] = arr;
    if (bounds_fail) fold(2);
    if (spec.theorem) {
      const Certificate cert = hammerstein_certificate(spec);
      results["certificate"] = to_json(cert);
      const ConditionFlags flags = theorem_flags(*spec.theorem);
      results["condition-pattern"] = {to_string(flags.component[0]),
                                      to_string(flags.component[1])};
      results["predicted-index"] = predicted_index(flags);
      notes.push_back(kSurrogateNote);
      print_certificate(cert);
      if (!cert.verdict) fold(2);
    }
    fold(solve_hammerstein(spec, results, out, opt.svg));
  } else if (phl) {
    fold(cmd_asymptotics(spec, results));
    const PhiProblem P = spec.phi_problem();
    std::optional<std::array<double, 2>> r;
    if (!philap_radii(spec, P, results, r))
      fold(2);
    else if (r && spec.R && !results.contains("small-r-search")) {
      CertifyOptions co;
      co.box_grid = spec.box_grid;
      const Certificate cert = certify_philap(P, *r, *spec.R, co);
      results["certificate"] = to_json(cert);
      print_certificate(cert);
      if (!cert.verdict) fold(2);
    }
    {
      // reuse the resolved radii for the solve stage
      ProblemSpec solved = spec;
      solved.r = r;
      solved.search_small = false;
      fold(solve_philap_cmd(solved, results, out, opt.svg));
    }
    results["refinement"] = philap_refinement(spec);
    results["condition-pattern"] = {"compress", "compress"};
    results["predicted-index"] = 1;
    notes.push_back(kSurrogateNote);
  } else {
    BumpReport rep;
    results = bump_results(spec, rep);
    notes.push_back(kSurrogateNote);
    print_bump(rep);
    if (!(rep.margins_pass && rep.witness_everywhere &&
          rep.component_index.degree == rep.predicted))
      fold(2);
  }
  return worst;
}

}  // namespace

int run_command(const CliOptions& opt) {
  ProblemSpec spec;
  try {
    spec = load_spec(opt.spec_path);
  } catch (const SpecError& e) {
    std::cerr << "error: cannot load '" << opt.spec_path << "'\n";
    for (const auto& msg : e.errors) std::cerr << "  - " << msg << "\n";
    return 1;
  }

  if (opt.grid_override > 0) {
    if (spec.kind == SpecKind::Planar) {
      std::cerr << "error: planar problems take no grid\n";
      return 1;
    }
    if (spec.kind == SpecKind::Hammerstein &&
        (opt.grid_override < 65 || opt.grid_override % 2 == 0)) {
      std::cerr << "error: integral systems need an odd node count of at least 65\n";
      return 1;
    }
    if (spec.kind == SpecKind::PhiLaplacian && opt.grid_override < 33) {
      std::cerr << "error: needs at least 33 grid nodes\n";
      return 1;
    }
    spec.grid = opt.grid_override;
    spec.resolved["grid"] = spec.grid;
  }
  if (opt.seed_override) {
    spec.seed = *opt.seed_override;
    spec.resolved["seed"] = spec.seed;
  }

  const std::string stem = std::filesystem::path(opt.spec_path).stem().string();
  ojson report;
  report["tool"] = ojson{{"name", kToolName}, {"version", kToolVersion}};
  report["command"] = opt.command;
  report["spec-file"] = std::filesystem::path(opt.spec_path).filename().string();
  report["config"] = spec.resolved;

  ojson results;
  std::vector<std::string> notes;
  Outputs out;
  int code = 0;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    code = dispatch(opt, spec, results, notes, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    results["error"] = e.what();
    code = 3;
  }

  if (spec.scalar())
    notes.push_back("single-component problem: the second component is identically zero");
  report["results"] = results;
  report["notes"] = notes;
  finalize_report(report);
  report["timings-ms"] = ojson{{"total", ms_since(t0)}};

  std::error_code ec;
  std::filesystem::create_directories(opt.out_dir, ec);
  const auto path = [&](const char* suffix) {
    return (std::filesystem::path(opt.out_dir) / (stem + suffix)).string();
  };
  write_text_file(path("-report.json"), report.dump(2) + "\n");
  if (out.csv) write_text_file(path("-solution.csv"), *out.csv);
  if (out.svg) write_text_file(path("-solution.svg"), *out.svg);
  std::cout << "report: " << path("-report.json") << "\n";
  return code;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"certified localization of coexistence fixed points"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CliOptions opt;
  static const char* commands[] = {"constants", "certify",     "solve",
                                   "index",     "asymptotics", "report"};
  static const char* blurbs[] = {
      "kernel constants and majorant bounds",
      "check the hypotheses of the selected localization theorem",
      "iterate the discretized operator to a fixed point",
      "fixed point index of the problem's condition pattern",
      "asymptotic evidence for the small-radius hypotheses",
      "full pipeline: constants, certificate, solve and index",
  };
  static uint64_t seed_tmp = 0;
  for (int i = 0; i < 6; ++i) {
    auto* sub = app.add_subcommand(commands[i], blurbs[i]);
    sub->add_option("spec", opt.spec_path, "problem spec JSON file")->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--grid", opt.grid_override, "override the grid node count");
    auto* sopt = sub->add_option("--seed", seed_tmp, "override the sampling seed");
    sub->add_flag("--svg", opt.svg, "also write an SVG plot of the solution");
    sub->callback([&opt, sopt, name = commands[i]]() {
      opt.command = name;
      if (sopt->count() > 0) opt.seed_override = seed_tmp;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // fold CLI11's parse-error codes into the documented contract: help and
    // version stay 0, everything unusable is 1
    return app.exit(e) == 0 ? 0 : 1;
  }
  return run_command(opt);
}

}  // namespace coexist
