#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fw/state.hpp"

namespace fw {

struct Trajectory;  // dynamics.hpp

// Scalar monitors recorded after every accepted step.
struct DiagnosticsRecord {
  double t = 0.0;
  double min_slope = 0.0;  // inf_x u_x, sub-grid refined
  double max_slope = 0.0;  // sup_x u_x
  double int_u = 0.0;
  double int_rho_bar = 0.0;
  double l2_u = 0.0;
  double l1_rho_bar = 0.0;
  double energy_s2 = 0.0;
  double riccati_forcing_bound = 0.0;  // ||rho_bar0||_L1 + K1(t)
};

// Grid extremum with parabolic sub-grid refinement; ties broken by the
// smallest x. The refined value bounds the grid value from the outside.
struct Extremum {
  double value = 0.0;
  double location = 0.0;
  int index = 0;
};

Extremum refined_min(const Field& f);
Extremum refined_max(const Field& f);

// Extrema of the spectral derivative u_x.
std::pair<Extremum, Extremum> slope_extrema(const Field& u);

// (integral of u, integral of rho_bar) by spectral quadrature.
std::pair<double, double> conserved_integrals(const State& s);

// L^2 growth bound K1(t) = ||u0||_L2 + ||rho_bar0||_L1 * t.
double k1_growth_bound(const State& s0, double t);

enum class BreakingCriterion { slope_sum, forcing_bound };

// Wire names used by the CLI and report files.
std::string criterion_name(BreakingCriterion c);

struct BreakingPrediction {
  BreakingCriterion criterion = BreakingCriterion::slope_sum;
  bool satisfied = false;
  std::optional<double> breaking_time_upper_bound;
  // echoed inputs
  double m0 = 0.0;
  double big_m0 = 0.0;
  double l1_rho_bar0 = 0.0;
  double eps = 0.0;      // forcing-bound criterion only
  double j_bound = 0.0;  // J = sqrt(K2 + C), the comparison forcing level
};

// Decision rules shared by the state-level predicates below.
bool slope_sum_condition(double m0, double big_m0);  // m0 + M0 <= -2
double slope_sum_bound(double m0);                   // 1/|m0 + 1/2|
double forcing_bound_breaking_time(double m0, double j);

// Slope-sum criterion: requires rho_bar0 >= 0 and ||rho_bar0||_L1 = 1
// (within 1e-10; no silent rescaling). Satisfied when m(0) + M(0) <= -2;
// the bound is 1/|m(0) + 1/2|.
BreakingPrediction predict_breaking_slope_sum(const State& s0);

// Forcing-bound criterion with user-supplied a-priori constants K2 and C:
// satisfied when m(0) <= -(1+eps) J with J = sqrt(K2 + C); the bound is
// log((m0 - J)/(m0 + J)) / (2J).
BreakingPrediction predict_breaking_forcing_bound(const State& s0, double eps,
                                                  double k2, double c_bound);

struct VerificationReport {
  BreakingPrediction prediction;
  bool blow_up_detected = false;
  std::optional<double> detected_time;
  bool within_bound = false;  // detected_time <= bound + 2 dt
  double dt = 0.0;
  // Observed minimum slope against the comparison Riccati solution.
  std::vector<double> t;
  std::vector<double> m_observed;
  std::vector<double> m_comparison;
};

// Closes the loop: checks whether the simulated run broke no later than the
// predicted bound and tabulates the Riccati comparison solution.
VerificationReport empirical_breaking_check(const Trajectory& traj,
                                            const BreakingPrediction& pred);

// Comparison dynamics m' = -m^2 + F (F = forcing_sq >= 0), m(0) = m0 < -sqrt(F).
double riccati_comparison_value(double m0, double forcing_sq, double t);
double riccati_blowup_time_closed_form(double m0, double forcing_sq);
// RK4 detector on the scalar comparison ODE; returns the estimated blow-up time.
double riccati_blowup_time_numeric(double m0, double forcing_sq,
                                   double dt0 = 1e-3);

}  // namespace fw
