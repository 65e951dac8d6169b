#include "coexist/index2d.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace coexist {

double PlanarRegion::signed_area() const {
  double a = 0.0;
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const vec2& p = vertices[i];
    const vec2& q = vertices[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return a / 2;
}

double PlanarRegion::perimeter() const {
  double l = 0.0;
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) l += (vertices[(i + 1) % n] - vertices[i]).norm();
  return l;
}

bool PlanarRegion::contains(const vec2& p) const {
  bool inside = false;
  const size_t n = vertices.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const vec2& a = vertices[i];
    const vec2& b = vertices[j];
    if ((a.y() > p.y()) != (b.y() > p.y()) &&
        p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x())
      inside = !inside;
  }
  return inside;
}

double PlanarRegion::boundary_distance(const vec2& p) const {
  double d = std::numeric_limits<double>::infinity();
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const vec2& a = vertices[i];
    const vec2 e = vertices[(i + 1) % n] - a;
    const double t = std::clamp((p - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
    d = std::min(d, (p - (a + t * e)).norm());
  }
  return d;
}

namespace {

bool segments_cross(const vec2& a, const vec2& b, const vec2& c, const vec2& d) {
  auto orient = [](const vec2& p, const vec2& q, const vec2& r) {
    const double v = (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
  };
  return orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0;
}

}  // namespace

void PlanarRegion::validate() const {
  const size_t n = vertices.size();
  if (n < 3) throw std::invalid_argument("region: need at least 3 vertices");
  for (size_t i = 0; i < n; ++i)
    if ((vertices[(i + 1) % n] - vertices[i]).norm() < 1e-14)
      throw std::invalid_argument("region: repeated vertex");
  for (size_t i = 0; i < n; ++i)
    for (size_t k = i + 1; k < n; ++k) {
      if (k == i || (k + 1) % n == i || (i + 1) % n == k) continue;
      if (segments_cross(vertices[i], vertices[(i + 1) % n], vertices[k], vertices[(k + 1) % n]))
        throw std::invalid_argument("region: self-intersecting boundary");
    }
  if (!(signed_area() > 0))
    throw std::invalid_argument("region: vertices must be counterclockwise");
}

PlanarRegion rectangle(double x0, double y0, double x1, double y1) {
  return {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

namespace {

struct WindingWalk {
  const PlanarMap& F;
  const WindingOptions& opt;
  DegreeResult res;

  vec2 eval(const vec2& z) {
    if (++res.evaluations > opt.budget)
      throw std::runtime_error("winding: evaluation budget exhausted");
    const vec2 v = F(z);
    const double n = v.norm();
    if (n < opt.min_norm) {
      std::ostringstream os;
      os << "winding: |F| = " << n << " below " << opt.min_norm << " at boundary point ("
         << z.x() << ", " << z.y() << "); zero too close to the boundary";
      throw std::runtime_error(os.str());
    }
    res.min_boundary_norm = std::min(res.min_boundary_norm, n);
    return v;
  }

  static double turn(const vec2& a, const vec2& b) {
    return std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
  }

  // in-order recursive bisection until each accepted increment is below cap
  double walk(const vec2& z0, const vec2& v0, const vec2& z1, const vec2& v1, int depth) {
    const double t = turn(v0, v1);
    if (std::abs(t) < opt.cap && depth > 0) return t;
    if (depth > 48) throw std::runtime_error("winding: bisection depth exceeded");
    const vec2 zm = 0.5 * (z0 + z1);
    const vec2 vm = eval(zm);
    return walk(z0, v0, zm, vm, depth + 1) + walk(zm, vm, z1, v1, depth + 1);
  }
};

}  // namespace

DegreeResult winding_degree(const PlanarMap& F, const PlanarRegion& U,
                            const WindingOptions& opt) {
  U.validate();
  WindingWalk w{F, opt, {}};
  w.res.min_boundary_norm = std::numeric_limits<double>::infinity();
  const size_t n = U.vertices.size();
  std::vector<vec2> vals(n);
  for (size_t i = 0; i < n; ++i) vals[i] = w.eval(U.vertices[i]);
  double total = 0.0;
  for (size_t i = 0; i < n; ++i)
    total += w.walk(U.vertices[i], vals[i], U.vertices[(i + 1) % n], vals[(i + 1) % n], 0);
  w.res.total_turning = total;
  const double raw = total / (2 * M_PI);
  w.res.degree = int(std::lround(raw));
  if (std::abs(total - 2 * M_PI * w.res.degree) >= M_PI / 4)
    throw std::runtime_error("winding: accumulated turning too far from a multiple of 2*pi");
  return w.res;
}

vec2 clamp_quadrant(const vec2& z) { return {std::max(0.0, z.x()), std::max(0.0, z.y())}; }

PlanarRegion extrude_axis_runs(const PlanarRegion& U, double d) {
  U.validate();
  const size_t n = U.vertices.size();
  if (d <= 0) d = U.perimeter() / double(n);
  const double tol = 1e-12;

  std::vector<bool> onax(n);
  size_t start = n;
  for (size_t i = 0; i < n; ++i) {
    onax[i] = U.vertices[i].x() <= tol || U.vertices[i].y() <= tol;
    if (!onax[i] && start == n) start = i;
  }
  if (start == n) throw std::invalid_argument("extrude: every vertex touches the axes");

  auto displaced = [&](const vec2& v) {
    return vec2(v.x() <= tol ? -d : v.x(), v.y() <= tol ? -d : v.y());
  };

  // traverse starting off-axis so each maximal axis run is contiguous
  PlanarRegion out;
  out.vertices.reserve(n + 8);
  for (size_t k = 0; k < n; ++k) {
    const size_t i = (start + k) % n;
    if (!onax[i]) {
      out.vertices.push_back(U.vertices[i]);
      continue;
    }
    size_t len = 1;
    while (len < n && onax[(i + len) % n]) ++len;
    out.vertices.push_back(U.vertices[i]);
    out.vertices.push_back(displaced(U.vertices[i]));
    const size_t last = (i + len - 1) % n;
    if (last != i) out.vertices.push_back(displaced(U.vertices[last]));
    out.vertices.push_back(U.vertices[last]);
    for (size_t skip = 1; skip + 1 < len; ++skip) {
      const size_t m = (i + skip) % n;
      const vec2 dm = displaced(U.vertices[m]);
      // interior run vertices that bend around the origin keep their shifts
      if ((dm - displaced(U.vertices[i])).norm() > tol &&
          (dm - displaced(U.vertices[last])).norm() > tol)
        out.vertices.insert(out.vertices.end() - 2, dm);
    }
    k += len - 1;
  }
  out.validate();
  return out;
}

DegreeResult cone_fixed_point_index(const PlanarMap& N, const PlanarRegion& U,
                                    const WindingOptions& opt) {
  const PlanarRegion V = extrude_axis_runs(U);
  auto F = [&N](const vec2& z) { return vec2(z - N(clamp_quadrant(z))); };
  return winding_degree(F, V, opt);
}

PlanarRegion quadrant_annulus(const std::function<double(double)>& rho_in, double R,
                              int segments) {
  if (segments < 2) throw std::invalid_argument("quadrant_annulus: need >= 2 segments");
  PlanarRegion out;
  for (int i = 0; i <= segments; ++i) {
    const double th = M_PI / 2 * i / segments;
    out.vertices.emplace_back(R * std::cos(th), R * std::sin(th));
  }
  for (int i = segments; i >= 0; --i) {
    const double th = M_PI / 2 * i / segments;
    const double r = rho_in(th);
    if (!(r > 0 && r < R)) throw std::invalid_argument("quadrant_annulus: need 0 < rho < R");
    out.vertices.emplace_back(r * std::cos(th), r * std::sin(th));
  }
  out.validate();
  return out;
}

}  // namespace coexist
