#pragma once

#include <array>
#include <vector>

#include "coexist/star_set.hpp"

namespace coexist {

enum class Flavor { Norm, TwoNorm, Homotopy, Order, Functional };
enum class Side { Inner, Outer };
enum class Mode { Compress, Expand };

const char* to_string(Flavor f);
const char* to_string(Side s);
const char* to_string(Mode m);

struct ConditionReport {
  Flavor flavor = Flavor::Norm;
  Side side = Side::Inner;
  int component = 0;  // 0-based
  Mode mode = Mode::Compress;
  bool pass = false;
  double margin = 0.0;  // worst signed slack over the samples
  dvec witness1, witness2;  // full sampled state at the worst slack
  int samples = 0;
};

// One factor of the product region: a star set between an inner functional
// level set and an outer one (outer contains the closed inner set).
struct ComponentRegion {
  StarSet inner;
  StarSet outer;
};

struct ProductRegion {
  std::array<ComponentRegion, 2> comp;

  const ConeSpec& cone(int j) const { return comp[j].inner.phi.domain; }
  // Sampled containment of the closed inner set in the outer set.
  void validate(uint64_t seed = 20260814u, int nsamples = 256) const;
};

// Component maps take the full state (x1, x2) and return T_j applied to it.
using ComponentMap = std::function<dvec(const dvec&, const dvec&)>;

struct SystemMap {
  std::array<ComponentMap, 2> T;
};

struct SampleOptions {
  int count = 256;
  uint64_t seed = 20260814u;
  double eval_tol = 1e-12;
  // extra states appended to the random boundary samples (component j is
  // radially projected onto the requested boundary)
  std::vector<std::array<dvec, 2>> extra;
};

using ConditionPair = std::array<ConditionReport, 2>;  // [inner, outer]

// Compress: ||T_j x|| >= ||x_j|| on the inner boundary and <= on the outer
// one; Expand swaps the two inequalities.  Margins are worst signed slacks;
// pass demands margin > 10 * eval_tol * scale.
ConditionPair check_norm_conditions(const SystemMap& T, const ProductRegion& reg, int j,
                                    Mode mode, const SampleOptions& opt = {});

// Compress: T_j x != x_j - mu h (mu >= 0) on the inner boundary and
// T_j x != lambda x_j (lambda >= 1) on the outer one; Expand swaps the roles
// of the two half-line families between the boundaries.
ConditionPair check_homotopy_conditions(const SystemMap& T, const ProductRegion& reg, int j,
                                        Mode mode, const dvec& h = dvec(),
                                        const SampleOptions& opt = {});

// Same as check_homotopy_conditions, but the inner half-line direction is
// supplied per sample instead of being the fixed anchor h.
using RayFn = std::function<dvec(const dvec&, const dvec&)>;
ConditionPair check_deformation_conditions(const SystemMap& T, const ProductRegion& reg, int j,
                                           Mode mode, const RayFn& ray,
                                           const SampleOptions& opt = {});

// Compress: T_j x not <= x_j on the inner boundary, T_j x not >= x_j on the
// outer one (cone order); Expand swaps them.
ConditionPair check_order_conditions(const SystemMap& T, const ProductRegion& reg, int j,
                                     Mode mode, const SampleOptions& opt = {});

// Compress: phi_j(T_j x) >= r_j on the inner boundary, psi_j(T_j x) <= R_j on
// the outer one, with phi/psi the region's own functionals; Expand swaps the
// inequalities.  Reported flavor is TwoNorm when both functionals are norms.
ConditionPair check_functional_conditions(const SystemMap& T, const ProductRegion& reg, int j,
                                          Mode mode, const SampleOptions& opt = {});

struct ConditionFlags {
  std::array<Mode, 2> component{Mode::Compress, Mode::Compress};
  int expansive_count() const;
};

// Product fixed point index predicted from the per-component condition
// pattern: (-1)^k with k the number of expansive components.
int predicted_index(const ConditionFlags& flags);

}  // namespace coexist
