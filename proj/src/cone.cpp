#include "coexist/cone.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace coexist {

int ConeSpec::dim() const { return ambient == Ambient::Plane ? 2 : grid->size(); }

double ConeSpec::norm(const dvec& x) const {
  return ambient == Ambient::Plane ? x.norm() : x.cwiseAbs().maxCoeff();
}

double ConeSpec::violation(const dvec& x) const {
  double v = -x.minCoeff();
  if (constraint == Constraint::LowerBound) {
    const double target = c * x.maxCoeff();
    for (int i : grid->mask(J)) v = std::max(v, target - x[i]);
  }
  return v;
}

bool ConeSpec::contains(const dvec& x, double tol) const {
  return violation(x) <= tol * (1 + norm(x));
}

void ConeSpec::require_member(const dvec& x, const char* where, double tol) const {
  if (x.size() != dim()) {
    std::ostringstream os;
    os << where << ": dimension mismatch (" << x.size() << " vs " << dim() << ")";
    throw std::invalid_argument(os.str());
  }
  if (!contains(x, tol)) {
    std::ostringstream os;
    os << where << ": point outside the cone (violation " << violation(x) << ")";
    throw std::domain_error(os.str());
  }
}

dvec ConeSpec::project(const dvec& x) const {
  dvec y = x.cwiseMax(0.0);
  if (constraint == Constraint::LowerBound) {
    const double target = c * y.maxCoeff();
    for (int i : grid->mask(J)) y[i] = std::max(y[i], target);
  }
  return y;
}

ConeSpec plane_quadrant() {
  ConeSpec k;
  k.ambient = Ambient::Plane;
  return k;
}

ConeSpec grid_cone(GridPtr g) {
  ConeSpec k;
  k.grid = std::move(g);
  return k;
}

ConeSpec grid_cone(GridPtr g, double c, Interval J) {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("grid_cone: need 0 < c < 1");
  ConeSpec k;
  k.grid = std::move(g);
  k.constraint = Constraint::LowerBound;
  k.c = c;
  k.J = J;
  return k;
}

ConeSampler::ConeSampler(ConeSpec cone, uint64_t seed) : cone_(std::move(cone)), rng_(seed) {}

double ConeSampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

dvec ConeSampler::raw_profile() {
  const int n = cone_.dim();
  std::normal_distribution<double> gauss(0.0, 1.0);
  dvec x(n);
  const int kind = kind_++ % 3;
  if (cone_.ambient == Ambient::Plane) {
    const double th = uniform(0.0, M_PI / 2);
    x << std::cos(th), std::sin(th);
    return x;
  }
  const dvec& t = cone_.grid->nodes();
  if (kind == 0) {
    dvec a(5), b(5);
    for (int k = 0; k < 5; ++k) { a[k] = gauss(rng_); b[k] = gauss(rng_); }
    for (int i = 0; i < n; ++i) {
      double v = 0.0;
      for (int k = 0; k < 5; ++k)
        v += a[k] * std::sin((k + 1) * M_PI * t[i]) + b[k] * std::cos((k + 1) * M_PI * t[i]);
      x[i] = std::abs(v);
    }
  } else if (kind == 1) {
    x = concave_profile();
  } else {
    for (int i = 0; i < n; ++i) x[i] = uniform(0.0, 1.0);
  }
  return x;
}

// Nonincreasing concave profile: slope -g with g >= 0 nondecreasing, so the
// function decays ever faster toward t = 1 while staying >= base there.
dvec ConeSampler::concave_profile() {
  const int n = cone_.dim();
  std::normal_distribution<double> gauss(0.0, 1.0);
  dvec g(n);
  double run = 0.0;
  for (int i = 0; i < n; ++i) { run += std::abs(gauss(rng_)); g[i] = run; }
  const double h = cone_.ambient == Ambient::Plane ? 0.5 : cone_.grid->h();
  const double base = 0.3 * std::abs(gauss(rng_)) * g[n - 1] * h;
  dvec x(n);
  double acc = base;
  for (int i = n - 1; i >= 0; --i) { x[i] = acc; acc += g[i] * h; }
  return x;
}

dvec ConeSampler::concave_direction() {
  dvec x = concave_profile();
  return x / cone_.norm(x);
}

dvec ConeSampler::direction() {
  for (int attempt = 0; attempt < 64; ++attempt) {
    dvec x = cone_.project(raw_profile());
    const double m = cone_.norm(x);
    if (m > 1e-12) return x / m;
  }
  throw std::runtime_error("cone sampler: degenerate profiles");
}

dvec ConeSampler::element(double log10_lo, double log10_hi) {
  return std::pow(10.0, uniform(log10_lo, log10_hi)) * direction();
}

}  // namespace coexist
