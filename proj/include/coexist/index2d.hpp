#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace coexist {

using vec2 = Eigen::Vector2d;
using PlanarMap = std::function<vec2(const vec2&)>;

// Simple polygon, counterclockwise vertex order.
struct PlanarRegion {
  std::vector<vec2> vertices;

  double signed_area() const;
  double perimeter() const;
  bool contains(const vec2& p) const;        // strict interior (even-odd rule)
  double boundary_distance(const vec2& p) const;
  void validate() const;  // simple, CCW, >= 3 vertices; throws otherwise
};

PlanarRegion rectangle(double x0, double y0, double x1, double y1);

struct WindingOptions {
  double cap = M_PI / 2;       // max |turn| per accepted edge
  long budget = 1L << 20;      // max boundary evaluations
  double min_norm = 1e-9;      // smallest admissible |F| on the boundary
};

struct DegreeResult {
  int degree = 0;
  double total_turning = 0.0;   // accumulated signed angle
  double min_boundary_norm = 0.0;
  long evaluations = 0;
};

// Brouwer degree deg(F, U, 0) of a continuous planar field via the winding
// number of F along the polygon boundary.  Angle increments are computed by
// atan2 of cross/dot and edges are bisected recursively (in order) until each
// increment is below the cap.  Throws when the budget is exhausted or the
// field drops below min_norm on the boundary.
DegreeResult winding_degree(const PlanarMap& F, const PlanarRegion& U,
                            const WindingOptions& opt = {});

// Componentwise clamp onto the closed first quadrant.
vec2 clamp_quadrant(const vec2& z);

// Pushes maximal runs of boundary vertices that touch the coordinate axes
// outward to x = -d or y = -d, so the returned polygon contains the original
// one and crosses into the negative quadrants only along those runs.
// d defaults to one average edge length.
PlanarRegion extrude_axis_runs(const PlanarRegion& U, double d = 0.0);

// Fixed point index of N on U relative to the first quadrant:
// deg(I - N o clamp, extrude_axis_runs(U), 0).
DegreeResult cone_fixed_point_index(const PlanarMap& N, const PlanarRegion& U,
                                    const WindingOptions& opt = {});

// Polygon approximation of { x in quadrant : rho_in(theta) < |x| < R },
// for a positive continuous radial function rho_in < R on [0, pi/2].
PlanarRegion quadrant_annulus(const std::function<double(double)>& rho_in, double R,
                              int segments);

}  // namespace coexist
