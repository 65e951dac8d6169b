#pragma once

#include <functional>
#include <string>

#include "coexist/cone.hpp"

namespace coexist {

enum class Family {
  WeightedMinSup,  // alpha * min_J x + beta * sup x      (grid)
  MinOnJ,          // min_J x                             (grid, lower-bound cone)
  MaxOnJ,          // max_J x                             (grid)
  HalfSum,         // (min_J x + sup x) / 2               (grid)
  L1Norm,          // integral of |x|                     (grid)
  AmbientNorm,     // sup norm on grids, euclidean norm in the plane
  LinearSum,       // x1 + x2                             (plane)
  Custom,
};

// Nonnegative functional on a cone, vanishing only at 0, with
//   c * ||x|| <= phi(x)            for some c > 0 and
//   phi(lambda x) <= lambda phi(x) for lambda in [0,1).
// The built-in families are positively homogeneous, so both hold with
// equality in the second axiom; custom functionals must declare themselves.
struct FunctionalSpec {
  Family family = Family::AmbientNorm;
  ConeSpec domain;
  double alpha = 0.0, beta = 1.0;
  Interval J{0.25, 0.75};
  std::function<double(const dvec&)> custom;
  bool custom_homogeneous = false;
  std::string name;

  double operator()(const dvec& x) const;
  double eval_unchecked(const dvec& x) const;
  bool homogeneous() const;
};

FunctionalSpec weighted_min_sup(ConeSpec domain, double alpha, double beta, Interval J);
FunctionalSpec min_on_window(ConeSpec domain, Interval J);
FunctionalSpec max_on_window(ConeSpec domain, Interval J);
FunctionalSpec half_sum(ConeSpec domain, Interval J);
FunctionalSpec l1_norm(ConeSpec domain);
FunctionalSpec ambient_norm(ConeSpec domain);
FunctionalSpec linear_sum(ConeSpec domain);
FunctionalSpec custom_functional(ConeSpec domain, std::function<double(const dvec&)> f,
                                 bool homogeneous, std::string name);

struct AxiomReport {
  double c_lower = 0.0;  // largest sampled c with c*||x|| <= phi(x)
  double c_upper = 0.0;  // smallest sampled C with phi(x) <= C*||x||
  bool lower_pass = false;
  dvec lower_witness;
  double subhom_defect = 0.0;  // max of phi(lambda x) - lambda phi(x)
  bool subhom_pass = false;
  dvec subhom_witness;
  double subhom_lambda = 0.0;
  int samples = 0;
};

AxiomReport verify_functional_axioms(const FunctionalSpec& phi, ConeSampler& sampler,
                                     int nsamples = 1024, int nlambda = 33,
                                     double tol = 1e-10);

}  // namespace coexist
