#pragma once

#include <string>

#include "fw/field.hpp"

namespace fw {

// Initial-data mini-language: arithmetic over numbers, `x`, `sin(...)`,
// `cos(...)` and `gauss(x0, w)`. Gaussians are wrapped periodically by
// summing translated images until the tail drops below 1e-14.
// Examples: "0", "1 + 0.5*cos(2*x)", "0.1*sin(x) - gauss(0, 0.5)".
Field init_expression(const std::string& expr, const GridPtr& grid);

// Single-point evaluation (used by tests and the config loader).
double eval_expression(const std::string& expr, double x, double half_period);

}  // namespace fw
