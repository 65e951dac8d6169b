#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace coexist {

struct CertCheck {
  std::string name;
  double lhs = 0.0, rhs = 0.0;
  double margin = 0.0;
  bool strict = false;    // strict inequalities need a positive margin
  bool pass = false;
  double refinement = 0.0;  // grid-refinement change of the bound, if any
  std::string note;
};

// Outcome of checking one localization theorem's hypotheses numerically.
// All bounds come from sampled extrema plus local refinement; the verdict is
// numerical evidence, not an interval-arithmetic proof.
struct Certificate {
  std::string theorem;
  std::array<double, 2> r{}, R{};
  std::optional<std::array<double, 2>> A, B;
  std::vector<CertCheck> checks;
  bool verdict = false;
  std::string note = "numerical bounds, not interval-verified";

  const CertCheck* find(const std::string& name) const;
};

}  // namespace coexist
