#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

namespace coexist {

using dvec = Eigen::VectorXd;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
};

// Uniform grid on [0,1].  Simpson weights require an odd node count;
// trapezoid weights work for any n >= 2.
class Grid {
public:
  explicit Grid(int n);

  int size() const { return n_; }
  double h() const { return h_; }
  double node(int i) const { return nodes_[i]; }
  const dvec& nodes() const { return nodes_; }
  const dvec& simpson() const;  // throws for even n
  const dvec& trapezoid() const { return trap_; }

  std::vector<int> mask(const Interval& J) const;

  double integrate_simpson(const dvec& f) const;
  double integrate_trapezoid(const dvec& f) const;

private:
  int n_;
  double h_;
  dvec nodes_, simp_, trap_;
  bool has_simpson_;
};

using GridPtr = std::shared_ptr<const Grid>;
GridPtr make_grid(int n);

using Fn1 = std::function<double(double)>;

// Composite Simpson on [a,b] with m nodes (odd, >= 3).  Returns 0 for a >= b.
double simpson(const Fn1& f, double a, double b, int m);

// Simpson applied separately on the pieces cut out of [a,b] by the kink
// points that fall strictly inside it; each nonempty piece gets m nodes.
double simpson_split(const Fn1& f, double a, double b,
                     const std::vector<double>& kinks, int m);

struct Extremum {
  double arg = 0.0;
  double value = 0.0;
};

// Golden-section refinement of a smooth interior extremum inside [lo,hi].
Extremum golden_extremum(const Fn1& f, double lo, double hi, bool maximize,
                         int iters = 120);

// Scan a uniform m-point grid on [lo,hi], then refine around the discrete
// extremum with golden sections on the two adjacent cells.
Extremum grid_extremum(const Fn1& f, double lo, double hi, int m, bool maximize);

}  // namespace coexist
