#include "coexist/planar_bump.hpp"

#include <cmath>

namespace coexist {

double bump_default_psi(double t) { return (1 - t * t) / (1 + t * t); }

double BumpMap::rho(double theta) const { return 1.0 / (std::cos(theta) + std::sin(theta)); }

double BumpMap::lambda(double r, double theta) const {
  const double t = (r - rho(theta)) / eps;
  return 1.0 + (psi ? psi(t) : bump_default_psi(t));
}

vec2 BumpMap::operator()(const vec2& z) const {
  const double r = z.norm();
  if (r == 0.0) return z;
  return lambda(r, std::atan2(z.y(), z.x())) * z;
}

BumpReport verify_bump_map(const BumpMap& map, const BumpOptions& opt) {
  BumpReport rep;

  const ConeSpec K = plane_quadrant();
  ComponentRegion factor{
      make_star_set(linear_sum(K), 1.0),
      make_star_set(ambient_norm(K), 2.0),
  };
  ProductRegion region{{factor, factor}};
  region.validate(opt.seed);

  SystemMap T;
  T.T[0] = [&map](const dvec& x1, const dvec&) { return dvec(map(vec2(x1))); };
  T.T[1] = [&map](const dvec&, const dvec& x2) { return dvec(map(vec2(x2))); };

  SampleOptions sopt;
  sopt.count = opt.boundary_samples;
  sopt.seed = opt.seed;
  rep.norms = check_norm_conditions(T, region, 0, Mode::Compress, sopt);
  rep.margins_pass = rep.norms[0].pass && rep.norms[1].pass;

  // On each sphere |z| = R look for a direction where lambda <= 1, i.e. a
  // point the map fails to push outward.
  rep.witness_everywhere = true;
  for (int k = 0; k < opt.radius_count; ++k) {
    BumpWitness w;
    w.R = opt.radius_lo +
          (opt.radius_hi - opt.radius_lo) * (opt.radius_count == 1 ? 0.0 : double(k) / (opt.radius_count - 1));
    auto gap = [&](double th) { return std::abs(w.R - map.rho(th)); };
    const Extremum e = grid_extremum(gap, 0.0, M_PI / 2, 512, true);
    w.theta = e.arg;
    const double lam = map.lambda(w.R, w.theta);
    w.found = lam <= 1.0;
    w.defect = w.R * (1.0 - lam);
    rep.witness_everywhere = rep.witness_everywhere && w.found;
    rep.witnesses.push_back(w);
  }

  // index of a single factor on the annulus between the rho curve and |z| = 2;
  // the fixed point curve meets the axes inside the annulus, so the extruded
  // contour of the cone index is what keeps the boundary zero-free
  const PlanarRegion annulus = quadrant_annulus([&](double th) { return map.rho(th); }, 2.0,
                                                opt.annulus_segments);
  rep.component_index = cone_fixed_point_index([&](const vec2& z) { return map(z); }, annulus);

  rep.predicted = predicted_index(ConditionFlags{});

  // fixed point curves |z| = rho(theta) -+ eps
  for (int k = 0; k < opt.curve_points; ++k) {
    const double th = M_PI / 2 * k / (opt.curve_points - 1);
    const double r0 = map.rho(th);
    for (int branch : {-1, +1}) {
      auto g = [&](double r) { return map.lambda(r, th) - 1.0; };
      double lo = branch < 0 ? std::max(r0 - 2 * map.eps, 1e-6) : r0;
      double hi = branch < 0 ? r0 : r0 + 2 * map.eps;
      // lambda - 1 changes sign across each curve: positive strictly between
      // them, negative beyond eps on either side
      for (int it = 0; it < 200 && (hi - lo) > 1e-15 * r0; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool inside = g(mid) > 0.0;
        if (branch < 0) (inside ? hi : lo) = mid;
        else (inside ? lo : hi) = mid;
      }
      BumpFixedPoint fp;
      fp.theta = th;
      fp.radius = 0.5 * (lo + hi);
      fp.branch = branch;
      fp.curve_defect = std::abs(std::abs(fp.radius - r0) - map.eps);
      const vec2 z(fp.radius * std::cos(th), fp.radius * std::sin(th));
      fp.map_residual = (map(z) - z).norm();
      rep.worst_curve_defect = std::max(rep.worst_curve_defect, fp.curve_defect);
      rep.worst_map_residual = std::max(rep.worst_map_residual, fp.map_residual);
      rep.fixed_points.push_back(fp);
    }
  }
  return rep;
}

}  // namespace coexist
