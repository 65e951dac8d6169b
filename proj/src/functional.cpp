#include "coexist/functional.hpp"

#include <cmath>
#include <stdexcept>

namespace coexist {

namespace {

double window_min(const ConeSpec& k, const Interval& J, const dvec& x) {
  double m = std::numeric_limits<double>::infinity();
  for (int i : k.grid->mask(J)) m = std::min(m, x[i]);
  return m;
}

double window_max(const ConeSpec& k, const Interval& J, const dvec& x) {
  double m = -std::numeric_limits<double>::infinity();
  for (int i : k.grid->mask(J)) m = std::max(m, x[i]);
  return m;
}

}  // namespace

double FunctionalSpec::eval_unchecked(const dvec& x) const {
  switch (family) {
    case Family::WeightedMinSup:
      return alpha * window_min(domain, J, x) + beta * x.cwiseAbs().maxCoeff();
    case Family::MinOnJ:
      return window_min(domain, J, x);
    case Family::MaxOnJ:
      return window_max(domain, J, x);
    case Family::HalfSum:
      return 0.5 * (window_min(domain, J, x) + x.cwiseAbs().maxCoeff());
    case Family::L1Norm:
      return domain.grid->integrate_trapezoid(x.cwiseAbs());
    case Family::AmbientNorm:
      return domain.norm(x);
    case Family::LinearSum:
      return x[0] + x[1];
    case Family::Custom:
      return custom(x);
  }
  throw std::logic_error("functional: unknown family");
}

double FunctionalSpec::operator()(const dvec& x) const {
  domain.require_member(x, name.empty() ? "functional" : name.c_str());
  return eval_unchecked(x);
}

bool FunctionalSpec::homogeneous() const {
  return family == Family::Custom ? custom_homogeneous : true;
}

static FunctionalSpec base(Family fam, ConeSpec domain, std::string name) {
  FunctionalSpec f;
  f.family = fam;
  f.domain = std::move(domain);
  f.name = std::move(name);
  return f;
}

static void need_grid(const ConeSpec& k, const char* who) {
  if (k.ambient != Ambient::GridFn)
    throw std::invalid_argument(std::string(who) + ": needs a grid-function cone");
}

FunctionalSpec weighted_min_sup(ConeSpec domain, double alpha, double beta, Interval J) {
  need_grid(domain, "weighted_min_sup");
  if (alpha < 0 || beta <= 0) throw std::invalid_argument("weighted_min_sup: need alpha >= 0, beta > 0");
  FunctionalSpec f = base(Family::WeightedMinSup, std::move(domain), "weighted-min-sup");
  f.alpha = alpha;
  f.beta = beta;
  f.J = J;
  return f;
}

FunctionalSpec min_on_window(ConeSpec domain, Interval J) {
  need_grid(domain, "min_on_window");
  if (domain.constraint != Constraint::LowerBound)
    throw std::invalid_argument("min_on_window: positivity needs a lower-bound cone");
  FunctionalSpec f = base(Family::MinOnJ, std::move(domain), "min-on-window");
  f.J = J;
  return f;
}

FunctionalSpec max_on_window(ConeSpec domain, Interval J) {
  need_grid(domain, "max_on_window");
  FunctionalSpec f = base(Family::MaxOnJ, std::move(domain), "max-on-window");
  f.J = J;
  return f;
}

FunctionalSpec half_sum(ConeSpec domain, Interval J) {
  need_grid(domain, "half_sum");
  FunctionalSpec f = base(Family::HalfSum, std::move(domain), "half-sum");
  f.J = J;
  return f;
}

FunctionalSpec l1_norm(ConeSpec domain) {
  need_grid(domain, "l1_norm");
  return base(Family::L1Norm, std::move(domain), "l1-norm");
}

FunctionalSpec ambient_norm(ConeSpec domain) {
  return base(Family::AmbientNorm, std::move(domain), "ambient-norm");
}

FunctionalSpec linear_sum(ConeSpec domain) {
  if (domain.ambient != Ambient::Plane)
    throw std::invalid_argument("linear_sum: plane only");
  return base(Family::LinearSum, std::move(domain), "linear-sum");
}

FunctionalSpec custom_functional(ConeSpec domain, std::function<double(const dvec&)> f,
                                 bool homogeneous, std::string name) {
  FunctionalSpec spec = base(Family::Custom, std::move(domain), std::move(name));
  spec.custom = std::move(f);
  spec.custom_homogeneous = homogeneous;
  return spec;
}

AxiomReport verify_functional_axioms(const FunctionalSpec& phi, ConeSampler& sampler,
                                     int nsamples, int nlambda, double tol) {
  AxiomReport rep;
  rep.samples = nsamples;
  rep.c_lower = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  for (int s = 0; s < nsamples; ++s) {
    const dvec x = sampler.element();
    const double nx = phi.domain.norm(x);
    const double px = phi(x);
    scale = std::max(scale, std::abs(px));
    const double ratio = px / nx;
    if (ratio < rep.c_lower) {
      rep.c_lower = ratio;
      rep.lower_witness = x;
    }
    rep.c_upper = std::max(rep.c_upper, ratio);
    for (int l = 0; l < nlambda; ++l) {
      const double lam = double(l) / nlambda;  // stays below 1
      const double defect = phi(lam * x) - lam * px;
      if (defect > rep.subhom_defect) {
        rep.subhom_defect = defect;
        rep.subhom_witness = x;
        rep.subhom_lambda = lam;
      }
    }
  }
  rep.lower_pass = rep.c_lower > 0.0;
  rep.subhom_pass = rep.subhom_defect <= tol * scale;
  return rep;
}

}  // namespace coexist
