#pragma once

#include "coexist/hammerstein.hpp"

namespace coexist {

enum class PhiKind { PLaplacian, Minkowski, Custom };

// Odd increasing homeomorphism Phi.  Singular variants map (-a, a) onto the
// reals (finite a); regular variants are defined on the whole line.
struct PhiSpec {
  PhiKind kind = PhiKind::Minkowski;
  double p = 2.0;  // p-Laplacian exponent
  double a = 1.0;  // singular height; infinity for regular Phi
  Fn1 fwd, inv;    // custom pair

  bool singular() const { return std::isfinite(a); }
};

PhiSpec p_laplacian(double p);
PhiSpec minkowski(double a = 1.0);
PhiSpec custom_phi(Fn1 fwd, Fn1 inv, double a);

double phi_eval(const PhiSpec& phi, double x);
double phi_inverse(const PhiSpec& phi, double y);

// System T_j x (t) = int_t^1 Phi_j^{-1}( int_0^s f_j(x1, x2) dtau ) ds on the
// cone of nonnegative, nonincreasing, concave functions; trapezoid grid.
struct PhiProblem {
  std::array<PhiSpec, 2> phi;
  std::array<std::function<double(double, double)>, 2> f;
  GridPtr grid;  // trapezoid grid, default 513 nodes
  bool f_monotone = false;  // f_j nondecreasing in each argument
};

std::array<dvec, 2> apply_philap(const PhiProblem& P, const std::array<dvec, 2>& x);

// Max violation of (nonneg, nonincreasing, concave) for a grid function.
double cone_defect_K(const dvec& x);

// Integral functional gamma(x) = int_0^1 x; the localization functional.
double gamma_functional(const Grid& g, const dvec& x);

// Hypothesis checks: Phi_j^{-1}(m_j / 2) > (8/3) r_j with m_j the minimum of
// f_j over [r_j/2, 2 r_j] x [r_i/2, R_i], and Phi_j^{-1}(M_j) < R_j with M_j
// the maximum over [0, R_1] x [0, R_2]; the latter holds automatically when
// Phi_j is singular and R_j equals its height.  Needs 2 r_j < R_j.
Certificate certify_philap(const PhiProblem& P, std::array<double, 2> r,
                           std::array<double, 2> R, const CertifyOptions& opt = {});

struct AsymptoticsRow {
  double tau = 0.0;
  double max_ratio = 0.0, tail_ratio = 0.0;
  double slope = 0.0;  // d log(ratio) / d log(x) at the tail
  bool bounded = false;
  int used = 0;  // sample points with tau * x inside the domain
};

struct DivergenceRow {
  double g_mid = 0.0, g_tail = 0.0;  // f(x,x)/Phi(x) at x = 2^-30 and 2^-40
  double growth = 0.0;
  bool divergent = false;
};

// Evidence for the small-radius hypotheses: Phi_j(tau x)/Phi_j(x) stays
// bounded as x -> 0+ for tau in {2, 16/3, 10}, and f_j(x,x)/Phi_j(x) blows
// up.  Sampled on x = 2^-k, k = 1..40; numerical evidence, not a proof.
struct AsymptoticsReport {
  std::array<std::vector<AsymptoticsRow>, 2> ratio_rows;
  std::array<DivergenceRow, 2> divergence;
  bool ratios_bounded = false;
  bool diverges = false;
  std::string label = "numerical evidence, not a proof";
};

AsymptoticsReport check_asymptotics(const PhiProblem& P);

// Scans r = a_1/4, a_1/8, ... down to 2^-40 and returns the first radius
// whose certificate passes.  Requires monotone nonlinearities, singular Phi
// in both components and positive asymptotic evidence.
struct SmallRadiusSearch {
  bool found = false;
  double r = 0.0;
  Certificate certificate;
  std::vector<double> tried;
};

SmallRadiusSearch search_small_r(const PhiProblem& P, std::array<double, 2> R,
                                 const CertifyOptions& opt = {});

// Picard iteration for the coexistence fixed point.
SolverResult solve_philap(const PhiProblem& P, std::array<dvec, 2> init,
                          const SolverOptions& opt = {});

// gamma_j(x_j) > r_j and sup x_j < R_j.
std::vector<Localization> philap_localization(const PhiProblem& P,
                                              const std::array<dvec, 2>& x,
                                              std::array<double, 2> r,
                                              std::array<double, 2> R, double tol = 1e-9);

}  // namespace coexist
