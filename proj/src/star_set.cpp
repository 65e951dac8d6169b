#include "coexist/star_set.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace coexist {

bool StarSet::in_closure(const dvec& x) const { return phi(x) <= r * (1 + tol); }

bool StarSet::on_boundary(const dvec& x) const { return std::abs(phi(x) - r) <= r * tol; }

StarSet make_star_set(FunctionalSpec phi, double r, std::optional<double> r0,
                      std::optional<dvec> h, uint64_t seed, int nsamples) {
  if (!(r > 0)) throw std::invalid_argument("make_star_set: need r > 0");
  StarSet s;
  s.phi = std::move(phi);
  s.r = r;

  ConeSampler sampler(s.phi.domain, seed);
  double clo = std::numeric_limits<double>::infinity(), chi = 0.0;
  for (int i = 0; i < nsamples; ++i) {
    const dvec x = sampler.element();
    const double ratio = s.phi(x) / s.phi.domain.norm(x);
    clo = std::min(clo, ratio);
    chi = std::max(chi, ratio);
  }
  if (!(clo > 0))
    throw std::domain_error("make_star_set: functional not bounded below by the norm on samples");
  s.c_lower = clo;
  s.c_upper = chi;

  s.r0 = r0 ? *r0 : 0.5 * r * clo / chi;
  if (!(s.r0 > 0)) throw std::invalid_argument("make_star_set: need r0 > 0");

  if (h) {
    s.h = *h;
  } else if (s.phi.domain.ambient == Ambient::Plane) {
    s.h = dvec::Constant(2, 1.0 / std::sqrt(2.0));
  } else {
    s.h = dvec::Constant(s.phi.domain.dim(), 1.0);
  }
  s.phi.domain.require_member(s.h, "make_star_set anchor");
  const double nh = s.phi.domain.norm(s.h);
  if (!(nh > 0)) throw std::invalid_argument("make_star_set: anchor must be nonzero");
  s.h /= nh;

  // sampled inclusion of the closed r0-ball in { phi < r }
  for (int i = 0; i < nsamples; ++i) {
    const dvec d = sampler.direction();
    const double scale = s.r0 * sampler.uniform(0.0, 1.0);
    const dvec x = scale * d;
    const double v = s.phi(x);
    if (!(v < r)) {
      std::ostringstream os;
      os << "make_star_set: r0 ball escapes the set: phi(x) = " << v << " >= r = " << r
         << " at ||x|| = " << scale << "; decrease r0";
      throw std::domain_error(os.str());
    }
  }
  return s;
}

namespace {

double bracket_and_bisect(const std::function<double(double)>& g, double lo, double hi) {
  // g(lo) <= 0 < g(hi) on entry
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((hi - lo) <= 1e-12 * std::abs(lo)) break;
    (g(mid) <= 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double beta_ray(const StarSet& s, const dvec& x) {
  const double nx = s.phi.domain.norm(x);
  if (!(nx > 0)) throw std::domain_error("beta_ray: x must be nonzero");
  const double px = s.phi(x);
  if (px > s.r * (1 + s.tol)) {
    std::ostringstream os;
    os << "beta_ray: x outside the closure (phi(x) = " << px << " > r = " << s.r << ")";
    throw std::domain_error(os.str());
  }
  if (px >= s.r) return 1.0;
  if (s.phi.homogeneous()) {
    if (!(px > 0)) throw std::domain_error("beta_ray: phi(x) = 0 on a homogeneous ray");
    return s.r / px;
  }
  auto g = [&](double b) { return s.phi.eval_unchecked(b * x) - s.r; };
  double hi = 1.0;
  int doubles = 0;
  while (g(hi) <= 0) {
    hi *= 2;
    if (++doubles > 64) throw std::runtime_error("beta_ray: no boundary crossing within 2^64");
  }
  return bracket_and_bisect(g, hi / 2, hi);
}

double boundary_scale(const StarSet& s, const dvec& d) {
  const double nd = s.phi.domain.norm(d);
  if (!(nd > 0)) throw std::domain_error("boundary_scale: direction must be nonzero");
  const double pd = s.phi(d);
  if (s.phi.homogeneous()) {
    if (!(pd > 0)) throw std::domain_error("boundary_scale: phi vanishes along the ray");
    return s.r / pd;
  }
  auto g = [&](double b) { return s.phi.eval_unchecked(b * d) - s.r; };
  double lo = 1.0, hi = 1.0;
  int steps = 0;
  if (pd < s.r) {
    while (g(hi) <= 0) {
      hi *= 2;
      if (++steps > 64) throw std::runtime_error("boundary_scale: no crossing found");
    }
    lo = hi / 2;
  } else {
    while (g(lo) > 0) {
      lo /= 2;
      if (++steps > 64) throw std::runtime_error("boundary_scale: no crossing found");
    }
    hi = lo * 2;
  }
  return bracket_and_bisect(g, lo, hi);
}

dvec retract_rho(const StarSet& s, const dvec& x) {
  const ConeSpec& K = s.phi.domain;
  K.require_member(x, "retract_rho");
  const double px = s.phi.eval_unchecked(x);
  if (px > s.r * (1 + s.tol)) {
    std::ostringstream os;
    os << "retract_rho: x outside the closure (phi(x) = " << px << ", r = " << s.r << ")";
    throw std::domain_error(os.str());
  }
  const double nx = K.norm(x);
  if (nx <= s.r0) {
    dvec y = x + (s.r0 - nx) * s.h;
    y *= s.r0 / K.norm(y);
    return beta_ray(s, y) * y;
  }
  return beta_ray(s, x) * x;
}

dvec extend_theta(const StarSet& s, const dvec& x) {
  const double px = s.phi(x);
  return px < s.r ? retract_rho(s, x) : x;
}

}  // namespace coexist
