#pragma once

#include "fw/spectral.hpp"

namespace fw {

// Horizontal velocity u paired with the surface variable rho_bar, both on one
// grid; rho = rho_bar - 1 is the deviation from the rest level.
struct State {
  Field u;
  Field rho_bar;
  double t = 0.0;

  State() = default;
  State(Field u_, Field rho_bar_, double t_ = 0.0);

  bool empty() const { return u.empty(); }
  const GridPtr& grid_ptr() const { return u.grid_ptr(); }
  const Grid& grid() const { return u.grid(); }
  Field rho() const;  // rho_bar - 1
  bool finite() const { return u.finite() && rho_bar.finite(); }
};

struct StateDerivative {
  Field du;
  Field drho_bar;
};

}  // namespace fw
