#pragma once

#include "fw/dynamics.hpp"

namespace fw {

// Particle paths of the velocity field, their flow Jacobian, and the surface
// variable transported along them. Positions are unwrapped (they live on the
// universal cover), so ordering and the Jacobian stay well defined across the
// periodic seam; column j of each row matches times[j].
struct CharacteristicsBundle {
  std::vector<double> seeds;
  std::vector<double> times;
  std::vector<std::vector<double>> q;      // unwrapped positions
  std::vector<std::vector<double>> qx;     // exp(integral of u_x along the path)
  std::vector<std::vector<double>> gamma;  // rho_bar(t, q(t))

  int winding(std::size_t seed, std::size_t time_index, double half_period) const;
};

// Integrates dq/dt = u(t, q) with RK4 over each snapshot interval, using
// cubic Hermite interpolation in time (snapshot states and rates) and
// trigonometric interpolation in space. log(q_x) rides along as an augmented
// component, which keeps q_x positive by construction.
CharacteristicsBundle advect(const Trajectory& traj,
                             const std::vector<double>& seeds,
                             int threads = 1);

// max over seeds and times of |rho_bar(t, q) q_x - rho_bar0(x0)|.
double verify_density_invariant(const CharacteristicsBundle& bundle,
                                const Trajectory& traj);

struct RiccatiForcing {
  std::vector<std::vector<double>> f;  // [seed][time]
  double max_abs = 0.0;
  double bound = 0.0;  // ||rho_bar0||_L1 + K1(T) + slack
  bool within_bound = false;
};

// Forcing f = (d^2/dx^2)(I - d^2/dx^2)^{-1}(rho_bar - u) along the paths,
// checked against the a-priori bound with slack 1e-6.
RiccatiForcing riccati_forcing(const Trajectory& traj,
                               const CharacteristicsBundle& bundle);

// Per-snapshot extrema of u_x, the forcing at the tracked maximum, and the
// residual of the slope dynamics dM/dt = -M^2 + f (central differences;
// endpoints carry NaN residuals).
struct ExtremumSeries {
  std::vector<double> t;
  std::vector<double> m;       // refined minimum slope
  std::vector<double> big_m;   // refined maximum slope
  std::vector<double> xi_min;  // location of the minimum
  std::vector<double> xi_max;  // location of the maximum
  std::vector<double> f_at_max;
  std::vector<double> dbig_m_dt;  // finite differences of big_m
  std::vector<double> residual;   // dbig_m_dt - (-big_m^2 + f_at_max)
};

ExtremumSeries slope_along_extremum(const Trajectory& traj);

// Growth-rate monitor: max over records of
//   log(1 + M(t)) - log(1 + M(0)) - (||rho_bar0||_L1 + K1(T) + 1/2) t,
// which stays <= 0.1 on runs with rho_bar0 >= 0.
double log_slope_growth_margin(const Trajectory& traj);

}  // namespace fw
