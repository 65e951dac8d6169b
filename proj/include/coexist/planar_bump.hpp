#pragma once

#include "coexist/conditions.hpp"
#include "coexist/index2d.hpp"

namespace coexist {

// Radial bump map on the closed first quadrant:
//   T(z) = lambda(|z|, theta) * z,  lambda = 1 + psi((|z| - rho(theta)) / eps)
// with rho(theta) = 1 / (cos theta + sin theta), the polar form of the
// segment x + y = 1.  The default psi(t) = (1 - t^2) / (1 + t^2) maps the
// line into (-1, 1], with psi(t) = 0 exactly at t = +-1, so the fixed points
// away from 0 fill the two curves |z| = rho(theta) +- eps.
struct BumpMap {
  double eps = 0.1;
  Fn1 psi;  // default used when empty

  double rho(double theta) const;
  double lambda(double r, double theta) const;
  vec2 operator()(const vec2& z) const;
};

double bump_default_psi(double t);

struct BumpWitness {
  double R = 0.0, theta = 0.0;
  double defect = 0.0;  // ||z|| - ||T z|| at the witness, >= 0 when found
  bool found = false;
};

struct BumpFixedPoint {
  double theta = 0.0, radius = 0.0;
  int branch = 0;           // -1 inner curve, +1 outer curve
  double curve_defect = 0.0;  // | |z| - rho(theta) -+ eps |
  double map_residual = 0.0;  // ||T z - z||
};

struct BumpReport {
  // norm conditions for the uncoupled product map on the region between
  // the linear-sum level set { x + y = 1 } and the norm ball of radius 2
  ConditionPair norms;
  bool margins_pass = false;

  // for every scanned radius R, a direction where the map does not expand:
  // the norm-ball compression hypothesis fails on each sphere
  std::vector<BumpWitness> witnesses;
  bool witness_everywhere = false;

  DegreeResult component_index;  // winding index on the polygonal annulus
  int predicted = 1;             // pattern (compress, compress)

  std::vector<BumpFixedPoint> fixed_points;
  double worst_curve_defect = 0.0;
  double worst_map_residual = 0.0;
};

struct BumpOptions {
  int boundary_samples = 256;
  uint64_t seed = 20260814u;
  int radius_count = 20;
  double radius_lo = 0.5, radius_hi = 2.5;
  int curve_points = 181;
  int annulus_segments = 256;
};

BumpReport verify_bump_map(const BumpMap& map, const BumpOptions& opt = {});

}  // namespace coexist
