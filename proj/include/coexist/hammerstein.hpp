#pragma once

#include <functional>

#include "coexist/certificate.hpp"
#include "coexist/conditions.hpp"

namespace coexist {

enum class KernelKind { Dirichlet, MixedDN, Custom };

// Kernel of one Hammerstein component together with its cone data: the
// window J, the lower-bound constant c and the majorant Phi with
// c * Phi(s) <= G(t,s) <= Phi(s) on J x [0,1].
struct KernelSpec {
  KernelKind kind = KernelKind::Dirichlet;
  Interval J{0.25, 0.75};
  double c = 0.25;
  Fn1 majorant;                                // default depends on kind
  std::function<double(double, double)> custom;  // (t, s)
  std::string name;
};

double kernel_eval(const KernelSpec& G, double t, double s);
double kernel_majorant(const KernelSpec& G, double s);

// d = 1 / max_t int_0^1 G, D = 1 / min_{t in J} int_J G,
// S/Sc = max_t of the window / complement integrals, and s/sc the same
// maxima restricted to t in J.  Inner integrals use composite Simpson split
// at the diagonal kink; outer extrema use the t-grid plus golden refinement.
struct KernelConstants {
  double d = 0.0, D = 0.0;
  double S = 0.0, Sc = 0.0;
  double s_in = 0.0, sc_in = 0.0;
  int n = 0;
  double max_rel_change = 0.0;  // between n and 2n-1, all six values
};

KernelConstants kernel_constants(const KernelSpec& G, int n, double rel_tol = 1e-6);

// Sampled verification of the majorant sandwich and of int_J Phi > 0.
struct KernelBoundsReport {
  bool pass = false;
  double upper_margin = 0.0;  // min of Phi(s) - G(t,s)
  double lower_margin = 0.0;  // min over t in J of G(t,s) - c Phi(s)
  double window_integral = 0.0;
  std::array<double, 2> upper_witness{}, lower_witness{};  // (t, s)
  int samples = 0;
};

KernelBoundsReport verify_kernel_bounds(const KernelSpec& G, int n = 257);

// Nonlinearity of one component: (s, x1, x2) -> f_j.
using Fn3 = std::function<double(double, double, double)>;

struct Box {
  std::array<double, 2> lo{}, hi{};
};

// Union of closed s-intervals (a point is a degenerate interval).
struct SRange {
  std::vector<Interval> parts;
};

SRange s_window(Interval J);
SRange s_complement(Interval J);
SRange s_full();
SRange s_point(double s);

// Extremum of f over an s-range times a box: full grid scan (grid points per
// axis) followed by coordinate-descent golden refinement, with the change
// against a twice-finer scan reported as `refinement`.
struct BoundEstimate {
  double value = 0.0;
  double refinement = 0.0;
  std::array<double, 3> arg{};  // (s, x1, x2)
  int grid = 0;
};

BoundEstimate box_extremum(const Fn3& f, const Box& box, const SRange& srange,
                           bool maximize, int grid = 64);

enum class TheoremKind { MinShell, NormShell, MixedShell, HalfSumShell };

const char* theorem_token(TheoremKind k);  // "min" "annulus" "mixed" "halfsum"
TheoremKind theorem_from_token(const std::string& token);

struct CertifyOptions {
  int n = 257;                  // quadrature nodes for the kernel constants
  int box_grid = 64;            // scan resolution for bound estimates
  double tol = 1e-9;            // margin tolerance, scaled by check magnitude
  double box_refine_tol = 1e-3;  // admissible refinement change of a bound
};

// Checks the hypotheses of the selected localization theorem for the system
// with kernels G and nonlinearities f.  Radius-ordering preconditions throw;
// everything else is recorded as a named check.
Certificate certify_shell(TheoremKind kind, const std::array<KernelSpec, 2>& G,
                          const std::array<Fn3, 2>& f, std::array<double, 2> r,
                          std::array<double, 2> R, std::array<double, 2> A,
                          std::array<double, 2> B, const CertifyOptions& opt = {});

// Per-component condition pattern of a theorem (compress/expand), and the
// fixed point index it predicts.
ConditionFlags theorem_flags(TheoremKind kind);

// Discretized integral operator: collocation on a Simpson grid with the
// diagonal kink panel integrated exactly against the local quadratic
// interpolant (two-point Gauss on each side of the kink).
class NystromOperator {
public:
  NystromOperator(std::array<KernelSpec, 2> G, std::array<Fn3, 2> f, GridPtr grid);

  const Grid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  const std::array<KernelSpec, 2>& kernels() const { return G_; }
  const std::array<Fn3, 2>& nonlinearities() const { return f_; }

  dvec apply_component(int j, const dvec& x1, const dvec& x2) const;
  std::array<dvec, 2> apply(const std::array<dvec, 2>& x) const;

  // Nystrom interpolation of T_j x at an arbitrary point t.
  double interpolate(int j, double t, const dvec& x1, const dvec& x2) const;

  // Cone defect of a component output (<= 0 inside the lower-bound cone).
  double cone_defect(int j, const dvec& y) const;

private:
  std::array<KernelSpec, 2> G_;
  std::array<Fn3, 2> f_;
  GridPtr grid_;
  std::array<Eigen::MatrixXd, 2> W_;
  dvec fvals(int j, const dvec& x1, const dvec& x2) const;
};

dvec nystrom_row(const KernelSpec& G, const Grid& g, double tau);

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 500;
  bool anderson = true;
  int window = 5;
};

struct Localization {
  std::string name;
  double value = 0.0, bound = 0.0;
  bool lower = false;  // true: need value > bound, false: need value < bound
  bool pass = false;
  double margin = 0.0;
};

struct SolverResult {
  std::array<dvec, 2> x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::array<bool, 2> trivial{};  // sup norm below 1e-8 * max(1, other)
  std::vector<Localization> localization;
  bool localized = false;
};

// Picard iteration with optional Anderson acceleration; accelerated steps
// that leave the cone fall back to the plain Picard update.
SolverResult solve_system(const NystromOperator& T, std::array<dvec, 2> init,
                          const SolverOptions& opt = {});

// The localization functionals a theorem promises for its solution.
std::vector<Localization> theorem_localization(TheoremKind kind, const NystromOperator& T,
                                               const std::array<dvec, 2>& x,
                                               std::array<double, 2> r,
                                               std::array<double, 2> R, double tol = 1e-9);

}  // namespace coexist
