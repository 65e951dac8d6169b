#pragma once

#include <optional>
#include <string>

#include "coexist/grid.hpp"

namespace coexist {

// Line plot of the two solution components over [0,1], with the window J
// shaded and optional horizontal guides at the localization radii.
std::string solution_svg(const Grid& g, const dvec& x1, const dvec& x2,
                         std::optional<Interval> J = std::nullopt,
                         std::optional<std::array<double, 2>> r = std::nullopt,
                         std::optional<std::array<double, 2>> R = std::nullopt);

}  // namespace coexist
