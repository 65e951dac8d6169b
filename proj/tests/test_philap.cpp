#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <stdexcept>

#include "coexist/philap.hpp"
#include "doctest.h"

using namespace coexist;

namespace {

// the closing power-type system: f1 = (x1 x2)^(1/4), f2 = sqrt(x1) + sqrt(x2)
PhiProblem power_system(int n = 513) {
  PhiProblem P;
  P.phi = {minkowski(1.0), minkowski(1.0)};
  P.f = {[](double x, double y) { return std::pow(x, 0.25) * std::pow(y, 0.25); },
         [](double x, double y) { return std::sqrt(x) + std::sqrt(y); }};
  P.grid = make_grid(n);
  P.f_monotone = true;
  return P;
}

dvec ramp_down(const Grid& g, double level) {
  dvec x(g.size());
  for (int k = 0; k < g.size(); ++k) x[k] = level * (1.0 - g.node(k));
  return x;
}

}  // namespace

TEST_CASE("homeomorphism pairs and their inverses") {
  const PhiSpec p2 = p_laplacian(2.0);
  CHECK(phi_eval(p2, 0.7) == doctest::Approx(0.7));
  CHECK(phi_inverse(p2, -0.3) == doctest::Approx(-0.3));
  CHECK(!p2.singular());

  const PhiSpec p3 = p_laplacian(3.0);
  CHECK(phi_eval(p3, 2.0) == doctest::Approx(4.0));
  CHECK(phi_eval(p3, -2.0) == doctest::Approx(-4.0));  // odd
  CHECK(phi_inverse(p3, 9.0) == doctest::Approx(3.0));

  const PhiSpec mk = minkowski(1.0);
  CHECK(mk.singular());
  CHECK(phi_eval(mk, 0.6) == doctest::Approx(0.75));  // 0.6 / 0.8
  CHECK(phi_eval(mk, -0.6) == doctest::Approx(-0.75));
  CHECK(phi_inverse(mk, 0.75) == doctest::Approx(0.6));
  CHECK(std::abs(phi_inverse(mk, 1e6)) < 1.0);  // image inside (-a, a)
  CHECK_THROWS_AS(phi_eval(mk, 1.0), std::domain_error);
  CHECK_THROWS_AS(phi_eval(mk, -1.5), std::domain_error);

  const PhiSpec mk2 = minkowski(2.0);
  CHECK(phi_eval(mk2, 1.0) == doctest::Approx(2.0 / std::sqrt(3.0)));
  for (double x : {0.1, 0.9, 1.7}) CHECK(phi_inverse(mk2, phi_eval(mk2, x)) == doctest::Approx(x));

  CHECK_THROWS_AS(p_laplacian(1.0), std::invalid_argument);
  CHECK_THROWS_AS(minkowski(0.0), std::invalid_argument);

  const PhiSpec cu = custom_phi([](double x) { return x * x * x; },
                                [](double y) { return std::cbrt(y); },
                                std::numeric_limits<double>::infinity());
  CHECK(phi_inverse(cu, phi_eval(cu, 1.7)) == doctest::Approx(1.7));
}

TEST_CASE("operator closed forms on the grid") {
  PhiProblem P;
  P.grid = make_grid(513);
  const Grid& g = *P.grid;

  // f = 0 gives the zero output
  P.phi = {p_laplacian(2.0), p_laplacian(2.0)};
  P.f = {[](double, double) { return 0.0; }, [](double, double) { return 0.0; }};
  std::array<dvec, 2> x{dvec::Ones(513), dvec::Ones(513)};
  auto out = apply_philap(P, x);
  CHECK(out[0].cwiseAbs().maxCoeff() == 0.0);
  CHECK(out[1].cwiseAbs().maxCoeff() == 0.0);

  // f = 1 with the identity homeomorphism: T(t) = (1 - t^2)/2, exact
  P.f = {[](double, double) { return 1.0; }, [](double, double) { return 1.0; }};
  out = apply_philap(P, x);
  for (int k = 0; k < 513; ++k) {
    const double t = g.node(k);
    CHECK(std::abs(out[0][k] - (1 - t * t) / 2) <= 1e-12);
  }

  // f = 1 with the mean-curvature operator: T(t) = sqrt(2) - sqrt(1 + t^2)
  P.phi = {minkowski(1.0), minkowski(1.0)};
  out = apply_philap(P, x);
  double worst = 0.0;
  for (int k = 0; k < 513; ++k) {
    const double t = g.node(k);
    worst = std::max(worst, std::abs(out[0][k] - (std::sqrt(2.0) - std::sqrt(1 + t * t))));
  }
  CHECK(worst <= 1e-6);  // trapezoid at h = 1/512
  CHECK(out[0][512] == 0.0);
  CHECK(cone_defect_K(out[0]) <= 1e-12);

  CHECK(gamma_functional(g, ramp_down(g, 1.0)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cone defect measures each violation") {
  const GridPtr g = make_grid(257);
  const int n = 257;
  const double h = g->h();

  dvec good(n);
  for (int k = 0; k < n; ++k) good[k] = 0.1 + 1 - g->node(k) * g->node(k);
  CHECK(cone_defect_K(good) < 0.0);

  dvec up(n);
  for (int k = 0; k < n; ++k) up[k] = g->node(k);
  CHECK(cone_defect_K(up) == doctest::Approx(h));  // rising first difference

  dvec convex(n);  // nonincreasing but curved the wrong way
  for (int k = 0; k < n; ++k) convex[k] = (1 - g->node(k)) * (1 - g->node(k));
  CHECK(cone_defect_K(convex) == doctest::Approx(2 * h * h));  // positive curvature

  dvec neg = dvec::Constant(n, -0.25);
  CHECK(cone_defect_K(neg) == doctest::Approx(0.25));
}

TEST_CASE("operator output lands in the cone for random input") {
  const PhiProblem P = power_system();
  const Grid& g = *P.grid;
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> amp(0.0, 3.0);

  for (int trial = 0; trial < 200; ++trial) {
    std::array<dvec, 2> x;
    for (int j = 0; j < 2; ++j) {
      x[j].resize(g.size());
      for (int k = 0; k < g.size(); ++k) x[j][k] = amp(rng);
    }
    const auto out = apply_philap(P, x);
    for (int j = 0; j < 2; ++j) {
      CAPTURE(trial);
      CHECK(cone_defect_K(out[j]) <= 1e-12);
      CHECK(out[j].minCoeff() >= 0.0);
      CHECK(out[j][g.size() - 1] == 0.0);
      const double sup = out[j].maxCoeff();
      CHECK(sup < 1.0);  // mean-curvature outputs stay below the height
      CHECK(gamma_functional(g, out[j]) >= 0.5 * sup - 1e-9);
    }
  }
}

TEST_CASE("certificate of the power system across radii") {
  const PhiProblem P = power_system();

  CHECK_THROWS_AS(certify_philap(P, {0.3, 0.3}, {0.5, 1.0}, {}), std::domain_error);
  CHECK_THROWS_AS(certify_philap(P, {0.0, 0.1}, {1.0, 1.0}, {}), std::domain_error);
  CHECK_THROWS_AS(certify_philap(P, {0.1, 0.1}, {1.5, 1.0}, {}), std::domain_error);

  // r = 1/64: the box minima sit at the lower corners, m1 = sqrt(r/2) and
  // m2 = sqrt(2 r), and phi^-1(m/2) clears 8r/3 in both components
  const double r = 1.0 / 64;
  const Certificate ok = certify_philap(P, {r, r}, {1.0, 1.0});
  CHECK(ok.verdict);
  CHECK(ok.checks.size() == 6);
  const CertCheck* m1 = ok.find("phiinv(m/2)>8r/3[1]");
  REQUIRE(m1 != nullptr);
  const double mor1 = std::sqrt(r / 2) / 2;
  CHECK(m1->lhs == doctest::Approx(mor1 / std::sqrt(1 + mor1 * mor1)).epsilon(1e-9));
  CHECK(m1->rhs == doctest::Approx(8.0 / 3 * r).epsilon(1e-12));
  CHECK(m1->pass);
  const CertCheck* m2 = ok.find("phiinv(m/2)>8r/3[2]");
  REQUIRE(m2 != nullptr);
  const double mor2 = std::sqrt(2 * r) / 2;
  CHECK(m2->lhs == doctest::Approx(mor2 / std::sqrt(1 + mor2 * mor2)).epsilon(1e-9));
  CHECK(m2->pass);
  for (int j = 1; j <= 2; ++j) {
    const CertCheck* M = ok.find("phiinv(M)<R[" + std::to_string(j) + "]");
    REQUIRE(M != nullptr);
    CHECK(M->pass);
    CHECK(M->note == "automatic: singular Phi with R at its height");
    const CertCheck* nn = ok.find("f>=0[" + std::to_string(j) + "]");
    REQUIRE(nn != nullptr);
    CHECK(nn->pass);
  }

  // one halving earlier the first component's margin is still negative
  const Certificate bad = certify_philap(P, {2 * r, 2 * r}, {1.0, 1.0});
  CHECK(!bad.verdict);
  const CertCheck* fail1 = bad.find("phiinv(m/2)>8r/3[1]");
  REQUIRE(fail1 != nullptr);
  CHECK(!fail1->pass);
  CHECK(fail1->margin < 0.0);

  // away from the singular height the M side is a real check
  const Certificate half = certify_philap(P, {0.05, 0.05}, {0.8, 0.8});
  const CertCheck* M1 = half.find("phiinv(M)<R[1]");
  REQUIRE(M1 != nullptr);
  CHECK(M1->note.empty());
  // max of (x1 x2)^(1/4) over [0, 4/5]^2 is sqrt(4/5)
  const double Mv = std::sqrt(0.8);
  CHECK(M1->lhs == doctest::Approx(Mv / std::sqrt(1 + Mv * Mv)).epsilon(1e-9));
  CHECK(M1->pass);
}

TEST_CASE("asymptotic evidence for the small-radius hypotheses") {
  const PhiProblem P = power_system();
  const AsymptoticsReport rep = check_asymptotics(P);
  CHECK(rep.ratios_bounded);
  CHECK(rep.diverges);
  CHECK(rep.label == "numerical evidence, not a proof");

  REQUIRE(rep.ratio_rows[0].size() == 3);
  const auto& rows = rep.ratio_rows[0];
  CHECK(rows[0].tau == doctest::Approx(2.0));
  CHECK(rows[1].tau == doctest::Approx(16.0 / 3));
  CHECK(rows[2].tau == doctest::Approx(10.0));
  // samples with tau * 2^-k past the singular height are skipped
  CHECK(rows[0].used == 39);
  CHECK(rows[1].used == 38);
  CHECK(rows[2].used == 37);
  for (const auto& row : rows) {
    CHECK(row.bounded);
    CHECK(row.tail_ratio == doctest::Approx(row.tau).epsilon(1e-9));
    // the worst ratio is at the largest admissible x = 2^-k
    double xm = 0.5;
    while (row.tau * xm >= 1.0) xm /= 2;
    const double worst = row.tau * std::sqrt(1 - xm * xm) /
                         std::sqrt(1 - row.tau * xm * row.tau * xm);
    CHECK(row.max_ratio == doctest::Approx(worst).epsilon(1e-9));
  }

  // f1(x,x) = sqrt(x), so f/Phi ~ x^(-1/2): factor 32 between 2^-30 and 2^-40
  CHECK(rep.divergence[0].g_mid == doctest::Approx(std::ldexp(1.0, 15)).epsilon(1e-9));
  CHECK(rep.divergence[0].g_tail == doctest::Approx(std::ldexp(1.0, 20)).epsilon(1e-9));
  CHECK(rep.divergence[0].growth == doctest::Approx(32.0).epsilon(1e-9));
  CHECK(rep.divergence[1].g_mid == doctest::Approx(std::ldexp(1.0, 16)).epsilon(1e-9));
  CHECK(rep.divergence[0].divergent);
  CHECK(rep.divergence[1].divergent);

  // a power law keeps every ratio pinned at tau^(p-1)
  PhiProblem cubic = power_system();
  cubic.phi = {p_laplacian(3.0), p_laplacian(3.0)};
  const AsymptoticsReport prep = check_asymptotics(cubic);
  CHECK(prep.ratios_bounded);
  for (const auto& row : prep.ratio_rows[1]) {
    CHECK(row.used == 40);  // nothing is skipped without a singular height
    CHECK(row.max_ratio == doctest::Approx(row.tau * row.tau).epsilon(1e-12));
    CHECK(std::abs(row.slope) <= 1e-12);
  }

  // linear growth never satisfies the divergence hypothesis
  PhiProblem lin = power_system();
  lin.f = {[](double x, double y) { return 0.5 * (x + y); },
           [](double x, double y) { return 0.5 * (x + y); }};
  const AsymptoticsReport lrep = check_asymptotics(lin);
  CHECK(lrep.ratios_bounded);
  CHECK(!lrep.diverges);
  CHECK(lrep.divergence[0].growth == doctest::Approx(1.0).epsilon(1e-6));

  // Phi(x) = sign(x) exp(-ln(|x|)^2 / 20) has ratios that creep upward as
  // x -> 0 (slope 0.1 ln tau), which the trend detector flags
  PhiProblem creep = power_system();
  auto creeping = [](double x) {
    if (x == 0.0) return 0.0;
    const double l = std::log(std::abs(x));
    return std::copysign(std::exp(-0.05 * l * l), x);
  };
  creep.phi[0] = custom_phi(creeping, [](double y) { return y; },  // inverse unused
                            std::numeric_limits<double>::infinity());
  const AsymptoticsReport crep = check_asymptotics(creep);
  CHECK(!crep.ratios_bounded);
  CHECK(!crep.ratio_rows[0][0].bounded);
  // the ratio grows toward 0+, i.e. falls along x: slope -0.1 ln(tau)
  CHECK(crep.ratio_rows[0][0].slope < -0.05);
  CHECK(crep.ratio_rows[1][0].bounded);  // the untouched component is fine
}

TEST_CASE("small-radius search walks down to the first certificate") {
  const PhiProblem P = power_system();
  const SmallRadiusSearch s = search_small_r(P, {1.0, 1.0});
  CHECK(s.found);
  CHECK(s.r == 0.015625);  // a/4, halved four times
  REQUIRE(s.tried.size() == 5);
  CHECK(s.tried.front() == 0.25);
  CHECK(s.tried.back() == s.r);
  CHECK(s.certificate.verdict);
  CHECK(s.certificate.r[0] == doctest::Approx(s.r));

  PhiProblem undeclared = power_system();
  undeclared.f_monotone = false;
  CHECK_THROWS_AS(search_small_r(undeclared, {1.0, 1.0}), std::invalid_argument);

  PhiProblem regular = power_system();
  regular.phi[1] = p_laplacian(3.0);
  CHECK_THROWS_AS(search_small_r(regular, {1.0, 1.0}), std::invalid_argument);

  PhiProblem lin = power_system();
  lin.f = {[](double x, double y) { return 0.5 * (x + y); },
           [](double x, double y) { return 0.5 * (x + y); }};
  CHECK_THROWS_AS(search_small_r(lin, {1.0, 1.0}), std::domain_error);
}

TEST_CASE("solver: fixed points, semi-trivial detection, divergence") {
  PhiProblem P;
  P.grid = make_grid(513);
  P.phi = {p_laplacian(2.0), p_laplacian(2.0)};
  P.f = {[](double, double) { return 1.0; }, [](double, double) { return 1.0; }};
  const Grid& g = *P.grid;

  // constant nonlinearity: the operator is constant, two sweeps suffice
  SolverResult res = solve_philap(P, {dvec::Zero(513), dvec::Zero(513)});
  REQUIRE(res.converged);
  CHECK(res.iterations == 2);
  double worst = 0.0;
  for (int k = 0; k < 513; ++k)
    worst = std::max(worst, std::abs(res.x[0][k] - (1 - g.node(k) * g.node(k)) / 2));
  CHECK(worst <= 1e-12);

  // zero nonlinearity: converges to the origin, both components trivial
  P.f = {[](double, double) { return 0.0; }, [](double, double) { return 0.0; }};
  res = solve_philap(P, {ramp_down(g, 1.0), ramp_down(g, 1.0)});
  REQUIRE(res.converged);
  CHECK(res.trivial[0]);
  CHECK(res.trivial[1]);

  // the power system has a genuine coexistence fixed point
  const PhiProblem W = power_system();
  res = solve_philap(W, {ramp_down(g, 0.5), ramp_down(g, 0.5)});
  REQUIRE(res.converged);
  CHECK(!res.trivial[0]);
  CHECK(!res.trivial[1]);
  CHECK(res.residual <= 1e-10 * 2);
  for (int j = 0; j < 2; ++j) {
    CHECK(cone_defect_K(res.x[j]) <= 1e-10);
    CHECK(res.x[j].maxCoeff() < 1.0);
  }
  const auto loc = philap_localization(W, res.x, {1.0 / 64, 1.0 / 64}, {1.0, 1.0});
  REQUIRE(loc.size() == 4);
  CHECK(loc[0].name == "gamma>r[1]");
  CHECK(loc[1].name == "sup<R[1]");
  CHECK(loc[2].name == "gamma>r[2]");
  CHECK(loc[3].name == "sup<R[2]");
  for (const auto& l : loc) {
    CAPTURE(l.name);
    CHECK(l.pass);
    CHECK(l.margin > 0.05);
  }

  // a dead first component stays dead and is flagged, not silently accepted
  const SolverResult semi = solve_philap(W, {dvec::Zero(513), ramp_down(g, 0.5)});
  REQUIRE(semi.converged);
  CHECK(semi.trivial[0]);
  CHECK(!semi.trivial[1]);
  const auto sloc = philap_localization(W, semi.x, {1.0 / 64, 1.0 / 64}, {1.0, 1.0});
  CHECK(!sloc[0].pass);
  CHECK(sloc[2].pass);

  CHECK_THROWS_AS(solve_philap(W, {dvec::Zero(65), dvec::Zero(513)}),
                  std::invalid_argument);

  // a superlinear inverse with steep growth blows up and is reported
  PhiProblem wild;
  wild.grid = make_grid(129);
  wild.phi = {p_laplacian(1.5), p_laplacian(1.5)};
  wild.f = {[](double x, double y) { return 50 * (x + y); },
            [](double x, double y) { return 50 * (x + y); }};
  CHECK_THROWS_AS(
      solve_philap(wild, {ramp_down(*wild.grid, 1.0), ramp_down(*wild.grid, 1.0)}),
      std::runtime_error);
}

TEST_CASE("midpoint lower bound on the certified boundary slice") {
  // x_j = 2 r (1 - t) has gamma_j = r; on a certified problem the iterate
  // clears half of phi^-1(m/2) at the midpoint
  const PhiProblem P = power_system();
  const Grid& g = *P.grid;
  const double r = 1.0 / 64;
  std::array<dvec, 2> x{ramp_down(g, 2 * r), ramp_down(g, 2 * r)};
  CHECK(gamma_functional(g, x[0]) == doctest::Approx(r).epsilon(1e-12));

  const auto out = apply_philap(P, x);
  const int mid = (g.size() - 1) / 2;
  const double m1 = std::sqrt(r / 2), m2 = std::sqrt(2 * r);
  CHECK(out[0][mid] >= 0.5 * phi_inverse(P.phi[0], m1 / 2) - 1e-9);
  CHECK(out[1][mid] >= 0.5 * phi_inverse(P.phi[1], m2 / 2) - 1e-9);
}

TEST_CASE("grid refinement converges at second order") {
  std::array<double, 2> gamma129, gamma257, gamma513;
  for (int pass = 0; pass < 3; ++pass) {
    const int n = pass == 0 ? 129 : pass == 1 ? 257 : 513;
    const PhiProblem P = power_system(n);
    SolverOptions opt;
    opt.tol = 1e-12;
    opt.max_iter = 2000;
    const SolverResult res =
        solve_philap(P, {ramp_down(*P.grid, 0.5), ramp_down(*P.grid, 0.5)}, opt);
    REQUIRE(res.converged);
    for (int j = 0; j < 2; ++j) {
      const double v = gamma_functional(*P.grid, res.x[j]);
      (pass == 0 ? gamma129 : pass == 1 ? gamma257 : gamma513)[j] = v;
    }
  }
  for (int j = 0; j < 2; ++j) {
    const double ratio = (gamma129[j] - gamma257[j]) / (gamma257[j] - gamma513[j]);
    CAPTURE(j);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
}
