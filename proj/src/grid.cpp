#include "coexist/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coexist {

Grid::Grid(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("grid: need at least 2 nodes");
  h_ = 1.0 / (n - 1);
  nodes_ = dvec::LinSpaced(n, 0.0, 1.0);
  trap_ = dvec::Constant(n, h_);
  trap_[0] = trap_[n - 1] = h_ / 2;
  has_simpson_ = (n % 2 == 1);
  if (has_simpson_) {
    simp_ = dvec::Zero(n);
    for (int i = 0; i + 2 < n; i += 2) {
      simp_[i] += h_ / 3;
      simp_[i + 1] += 4 * h_ / 3;
      simp_[i + 2] += h_ / 3;
    }
  }
}

const dvec& Grid::simpson() const {
  if (!has_simpson_) throw std::invalid_argument("grid: Simpson weights need an odd node count");
  return simp_;
}

std::vector<int> Grid::mask(const Interval& J) const {
  std::vector<int> idx;
  for (int i = 0; i < n_; ++i)
    if (J.contains(nodes_[i])) idx.push_back(i);
  return idx;
}

double Grid::integrate_simpson(const dvec& f) const { return simpson().dot(f); }
double Grid::integrate_trapezoid(const dvec& f) const { return trap_.dot(f); }

GridPtr make_grid(int n) { return std::make_shared<const Grid>(n); }

double simpson(const Fn1& f, double a, double b, int m) {
  if (!(b > a)) return 0.0;
  if (m < 3) m = 3;
  if (m % 2 == 0) ++m;
  const double h = (b - a) / (m - 1);
  double acc = 0.0;
  for (int i = 0; i + 2 < m; i += 2) {
    const double x0 = a + i * h, x1 = x0 + h, x2 = x0 + 2 * h;
    acc += (h / 3) * (f(x0) + 4 * f(x1) + f(x2));
  }
  return acc;
}

double simpson_split(const Fn1& f, double a, double b,
                     const std::vector<double>& kinks, int m) {
  std::vector<double> cuts{a};
  for (double k : kinks)
    if (k > a && k < b) cuts.push_back(k);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) acc += simpson(f, cuts[i], cuts[i + 1], m);
  return acc;
}

Extremum golden_extremum(const Fn1& f, double lo, double hi, bool maximize, int iters) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  const double sgn = maximize ? 1.0 : -1.0;
  for (int i = 0; i < iters && (b - a) > 1e-14 * (1 + std::abs(a) + std::abs(b)); ++i) {
    if (sgn * fc > sgn * fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  const double mid = (a + b) / 2;
  return {mid, f(mid)};
}

Extremum grid_extremum(const Fn1& f, double lo, double hi, int m, bool maximize) {
  if (m < 2) m = 2;
  const double sgn = maximize ? 1.0 : -1.0;
  Extremum best{lo, f(lo)};
  for (int i = 1; i < m; ++i) {
    const double t = lo + (hi - lo) * i / (m - 1);
    const double v = f(t);
    if (sgn * v > sgn * best.value) best = {t, v};
  }
  const double h = (hi - lo) / (m - 1);
  const double a = std::max(lo, best.arg - h), b = std::min(hi, best.arg + h);
  Extremum ref = golden_extremum(f, a, b, maximize);
  if (sgn * ref.value > sgn * best.value) best = ref;
  return best;
}

}  // namespace coexist
