#pragma once

#include <optional>

#include "coexist/functional.hpp"

namespace coexist {

// Relatively open set { x in K : phi(x) < r }, strictly star-shaped about 0,
// together with the ball radius r0 (closed norm ball inside the set) and the
// interior anchor h used by the retraction.
struct StarSet {
  FunctionalSpec phi;
  double r = 1.0;
  double r0 = 0.25;
  dvec h;
  double tol = 1e-9;  // relative boundary classification tolerance

  double c_lower = 0.0, c_upper = 0.0;  // sampled norm-equivalence constants

  bool in_closure(const dvec& x) const;
  bool on_boundary(const dvec& x) const;
};

// Estimates the norm-equivalence constants by sampling, picks
// r0 = 0.5 * r * c_lower / c_upper unless given, normalizes the anchor
// (default: constant direction), and verifies by sampling that the closed
// r0-ball lies inside the set.  Throws with a witness on failure.
StarSet make_star_set(FunctionalSpec phi, double r,
                      std::optional<double> r0 = std::nullopt,
                      std::optional<dvec> h = std::nullopt,
                      uint64_t seed = 20260814u, int nsamples = 512);

// Unique scale beta >= 1 with phi(beta * x) = r, for x in the closure, x != 0.
double beta_ray(const StarSet& s, const dvec& x);

// Root sigma > 0 of phi(sigma * d) = r along an arbitrary ray d != 0.
double boundary_scale(const StarSet& s, const dvec& d);

// Retraction of the closure onto the boundary: points with ||x|| <= r0 are
// pushed through the anchor shift before the radial projection.
dvec retract_rho(const StarSet& s, const dvec& x);

// Extension of the retraction to the whole cone: identity outside the set.
dvec extend_theta(const StarSet& s, const dvec& x);

}  // namespace coexist
