#include "coexist/conditions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace coexist {

const char* to_string(Flavor f) {
  switch (f) {
    case Flavor::Norm: return "norm";
    case Flavor::TwoNorm: return "two-norm";
    case Flavor::Homotopy: return "homotopy";
    case Flavor::Order: return "order";
    case Flavor::Functional: return "functional";
  }
  return "?";
}

const char* to_string(Side s) { return s == Side::Inner ? "inner" : "outer"; }
const char* to_string(Mode m) { return m == Mode::Compress ? "compress" : "expand"; }

void ProductRegion::validate(uint64_t seed, int nsamples) const {
  for (int j = 0; j < 2; ++j) {
    ConeSampler sampler(cone(j), seed + j);
    for (int i = 0; i < nsamples; ++i) {
      const dvec d = sampler.direction();
      const double si = boundary_scale(comp[j].inner, d);
      const double so = boundary_scale(comp[j].outer, d);
      if (!(si < so * (1 - 1e-9))) {
        std::ostringstream os;
        os << "product region: component " << j + 1
           << " inner boundary reaches the outer one along a sampled ray (" << si
           << " vs " << so << ")";
        throw std::domain_error(os.str());
      }
    }
  }
}

namespace {

std::vector<std::array<dvec, 2>> boundary_states(const ProductRegion& reg, int j, Side side,
                                                 const SampleOptions& opt) {
  const int i = 1 - j;
  ConeSampler sj(reg.cone(j), opt.seed * 2 + j);
  ConeSampler si(reg.cone(i), opt.seed * 2 + i + 0x9e3779b9u);
  const StarSet& bnd = side == Side::Inner ? reg.comp[j].inner : reg.comp[j].outer;

  std::vector<std::array<dvec, 2>> out;
  out.reserve(opt.count + opt.extra.size());
  for (int k = 0; k < opt.count; ++k) {
    const dvec dj = sj.direction();
    const dvec di = si.direction();
    const double sin_ = boundary_scale(reg.comp[i].inner, di);
    const double sout = boundary_scale(reg.comp[i].outer, di);
    std::array<dvec, 2> state;
    state[j] = boundary_scale(bnd, dj) * dj;
    state[i] = (sin_ + si.uniform(0.0, 1.0) * (sout - sin_)) * di;
    out.push_back(std::move(state));
  }
  for (const auto& e : opt.extra) {
    std::array<dvec, 2> state = e;
    state[j] *= boundary_scale(bnd, state[j]);
    out.push_back(std::move(state));
  }
  return out;
}

// Euclidean distance from v to the half line { mu * d : mu >= 0 }.
double halfline_distance(const dvec& v, const dvec& d) {
  const double dd = d.squaredNorm();
  if (!(dd > 0)) return v.norm();
  const double mu = std::max(0.0, v.dot(d) / dd);
  return (v - mu * d).norm();
}

// Euclidean distance from w to { lambda * x : lambda >= 1 }.
double ray_distance(const dvec& w, const dvec& x) {
  const double xx = x.squaredNorm();
  if (!(xx > 0)) return w.norm();
  const double lambda = std::max(1.0, w.dot(x) / xx);
  return (w - lambda * x).norm();
}

using Slack = std::function<double(const std::array<dvec, 2>&, const dvec&)>;

ConditionReport run_side(const SystemMap& T, const ProductRegion& reg, int j, Side side,
                         Mode mode, Flavor flavor, const Slack& slack,
                         const SampleOptions& opt) {
  ConditionReport rep;
  rep.flavor = flavor;
  rep.side = side;
  rep.component = j;
  rep.mode = mode;
  rep.margin = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  const auto states = boundary_states(reg, j, side, opt);
  for (const auto& st : states) {
    const dvec y = T.T[j](st[0], st[1]);
    reg.cone(j).require_member(y, "condition check: T output", 1e-6);
    scale = std::max({scale, reg.cone(j).norm(st[j]), reg.cone(j).norm(y)});
    const double q = slack(st, y);
    if (q < rep.margin) {
      rep.margin = q;
      rep.witness1 = st[0];
      rep.witness2 = st[1];
    }
  }
  rep.samples = int(states.size());
  rep.pass = rep.margin > 10 * opt.eval_tol * scale;
  return rep;
}

}  // namespace

ConditionPair check_norm_conditions(const SystemMap& T, const ProductRegion& reg, int j,
                                    Mode mode, const SampleOptions& opt) {
  const ConeSpec& K = reg.cone(j);
  auto grow = [&, j](const std::array<dvec, 2>& st, const dvec& y) {
    return K.norm(y) - K.norm(st[j]);
  };
  auto shrink = [&, j](const std::array<dvec, 2>& st, const dvec& y) {
    return K.norm(st[j]) - K.norm(y);
  };
  const bool comp = mode == Mode::Compress;
  return {run_side(T, reg, j, Side::Inner, mode, Flavor::Norm, comp ? Slack(grow) : Slack(shrink), opt),
          run_side(T, reg, j, Side::Outer, mode, Flavor::Norm, comp ? Slack(shrink) : Slack(grow), opt)};
}

ConditionPair check_deformation_conditions(const SystemMap& T, const ProductRegion& reg, int j,
                                           Mode mode, const RayFn& ray,
                                           const SampleOptions& opt) {
  auto away = [&, j](const std::array<dvec, 2>& st, const dvec& y) {
    return halfline_distance(st[j] - y, ray(st[0], st[1]));
  };
  auto along = [&, j](const std::array<dvec, 2>& st, const dvec& y) {
    return ray_distance(y, st[j]);
  };
  const bool comp = mode == Mode::Compress;
  return {run_side(T, reg, j, Side::Inner, mode, Flavor::Homotopy, comp ? Slack(away) : Slack(along), opt),
          run_side(T, reg, j, Side::Outer, mode, Flavor::Homotopy, comp ? Slack(along) : Slack(away), opt)};
}

ConditionPair check_homotopy_conditions(const SystemMap& T, const ProductRegion& reg, int j,
                                        Mode mode, const dvec& h, const SampleOptions& opt) {
  dvec anchor = h.size() ? h : reg.comp[j].inner.h;
  reg.cone(j).require_member(anchor, "check_homotopy_conditions anchor");
  if (!(reg.cone(j).norm(anchor) > 0))
    throw std::invalid_argument("check_homotopy_conditions: anchor must be nonzero");
  return check_deformation_conditions(
      T, reg, j, mode, [anchor](const dvec&, const dvec&) { return anchor; }, opt);
}

ConditionPair check_order_conditions(const SystemMap& T, const ProductRegion& reg, int j,
                                     Mode mode, const SampleOptions& opt) {
  const ConeSpec& K = reg.cone(j);
  auto not_below = [&, j](const std::array<dvec, 2>& st, const dvec& y) {
    return K.violation(st[j] - y);  // fails to have y <= x_j
  };
  auto not_above = [&, j](const std::array<dvec, 2>& st, const dvec& y) {
    return K.violation(y - st[j]);  // fails to have y >= x_j
  };
  const bool comp = mode == Mode::Compress;
  return {run_side(T, reg, j, Side::Inner, mode, Flavor::Order, comp ? Slack(not_below) : Slack(not_above), opt),
          run_side(T, reg, j, Side::Outer, mode, Flavor::Order, comp ? Slack(not_above) : Slack(not_below), opt)};
}

ConditionPair check_functional_conditions(const SystemMap& T, const ProductRegion& reg, int j,
                                          Mode mode, const SampleOptions& opt) {
  const StarSet& in = reg.comp[j].inner;
  const StarSet& out = reg.comp[j].outer;
  auto is_norm = [](const FunctionalSpec& f) {
    return f.family == Family::AmbientNorm || f.family == Family::L1Norm ||
           f.family == Family::LinearSum;
  };
  const Flavor flavor =
      is_norm(in.phi) && is_norm(out.phi) ? Flavor::TwoNorm : Flavor::Functional;
  auto above_r = [&](const std::array<dvec, 2>&, const dvec& y) {
    return in.phi.eval_unchecked(y) - in.r;
  };
  auto below_r = [&](const std::array<dvec, 2>&, const dvec& y) {
    return in.r - in.phi.eval_unchecked(y);
  };
  auto below_R = [&](const std::array<dvec, 2>&, const dvec& y) {
    return out.r - out.phi.eval_unchecked(y);
  };
  auto above_R = [&](const std::array<dvec, 2>&, const dvec& y) {
    return out.phi.eval_unchecked(y) - out.r;
  };
  const bool comp = mode == Mode::Compress;
  return {run_side(T, reg, j, Side::Inner, mode, flavor, comp ? Slack(above_r) : Slack(below_r), opt),
          run_side(T, reg, j, Side::Outer, mode, flavor, comp ? Slack(below_R) : Slack(above_R), opt)};
}

int ConditionFlags::expansive_count() const {
  int k = 0;
  for (Mode m : component)
    if (m == Mode::Expand) ++k;
  return k;
}

int predicted_index(const ConditionFlags& flags) {
  return flags.expansive_count() % 2 == 0 ? 1 : -1;
}

}  // namespace coexist
