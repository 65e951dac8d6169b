#pragma once

#include <cstdint>
#include <random>

#include "coexist/grid.hpp"

namespace coexist {

enum class Ambient { Plane, GridFn };
enum class Constraint { Nonneg, LowerBound };

// A cone of nonnegative elements, either in the plane or in a space of grid
// functions; the LowerBound variant additionally demands
// x(t) >= c * max(x) for t in the window J.
struct ConeSpec {
  Ambient ambient = Ambient::GridFn;
  GridPtr grid;  // null in the plane
  Constraint constraint = Constraint::Nonneg;
  double c = 0.0;
  Interval J{0.25, 0.75};

  int dim() const;
  double norm(const dvec& x) const;  // plane: euclidean, grid: sup
  // Largest constraint violation; <= 0 exactly when x lies in the cone.
  double violation(const dvec& x) const;
  bool contains(const dvec& x, double tol = 1e-9) const;
  void require_member(const dvec& x, const char* where, double tol = 1e-7) const;
  // Smallest cone element dominating x (clamps, then lifts the J window).
  dvec project(const dvec& x) const;
};

ConeSpec plane_quadrant();
ConeSpec grid_cone(GridPtr g);
ConeSpec grid_cone(GridPtr g, double c, Interval J);

// Deterministic pseudo-random cone elements.  Directions rotate through a few
// qualitatively different profiles; element norms span several decades.
class ConeSampler {
public:
  ConeSampler(ConeSpec cone, uint64_t seed);

  dvec direction();  // unit cone norm
  dvec concave_direction();  // unit norm, nonincreasing and concave profile
  dvec element(double log10_lo = -1.5, double log10_hi = 1.5);
  double uniform(double lo, double hi);
  const ConeSpec& cone() const { return cone_; }

private:
  ConeSpec cone_;
  std::mt19937_64 rng_;
  int kind_ = 0;
  dvec raw_profile();
  dvec concave_profile();
};

}  // namespace coexist
