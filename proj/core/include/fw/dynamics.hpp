#pragma once

#include <functional>
#include <limits>
#include <optional>

#include "fw/diagnostics.hpp"

namespace fw {

struct SimConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  std::optional<MollifierSpec> mollifier;  // engages the regularized system
  bool dealias = true;
  double blowup_slope_threshold = 1e4;
  int snapshot_stride = 1;  // accepted steps between stored snapshots

  void validate() const;
};

struct Snapshot {
  State state;
  // Stored by the integrator; absent when a trajectory is reloaded from disk
  // (advection recomputes the rate from the state in that case).
  std::optional<StateDerivative> rate;
};

enum class RunStatus { completed, blow_up_detected, step_rejected };

std::string status_name(RunStatus s);

struct Trajectory {
  std::vector<Snapshot> snapshots;      // strictly increasing times
  std::vector<DiagnosticsRecord> records;
  RunStatus status = RunStatus::completed;
  std::optional<double> blowup_time;
  SimConfig config;
  int steps_taken = 0;
  double dt_final = 0.0;

  const State& initial_state() const { return snapshots.front().state; }
  const State& final_state() const { return snapshots.back().state; }
  // Rate at snapshot i: stored value, or recomputed per the run's config.
  StateDerivative rate_at(std::size_t i) const;
};

// Right-hand side of the evolution system:
//   du/dt      = -u u_x + T(rho_bar - 1 - u)
//   drho_bar/dt = -d/dx (rho_bar u)          (conservative form)
StateDerivative rhs(const State& s, bool dealias = true);

// Regularized right-hand side with mollified transport:
//   du/dt  = -J(Ju * J u_x) + T(rho - u)
//   drho/dt = -d/dx J(Ju * J rho) - u_x,  reported for rho_bar.
StateDerivative rhs_mollified(const State& s, const MollifierSpec& spec,
                              bool dealias = true);

using RhsFunction = std::function<StateDerivative(const State&)>;

// Advection CFL number max|u| dt / dx; step_rk4 requires <= 0.5.
double cfl_number(const State& s, double dt);

State step_rk4(const State& s, double dt, const RhsFunction& f);

Trajectory simulate(const State& s0, const SimConfig& cfg);

// E^s = 1/2 ||u||_{H^s}^2 + 1/2 ||rho_bar - 1||_{H^{s-1}}^2; requires s > 3/2.
double energy(const State& s, double s_index);

struct ConvergenceRow {
  double epsilon;
  std::vector<double> deviation;  // per checkpoint
};

struct ConvergenceTable {
  double sobolev_index = 1.0;
  std::vector<double> checkpoint_times;
  std::vector<ConvergenceRow> rows;
};

// Deviation of mollified runs from the plain run, ||u_eps(t) - u(t)||_{H^sigma}
// at evenly spaced checkpoints.
ConvergenceTable mollifier_convergence_study(const State& s0,
                                             const std::vector<double>& eps_list,
                                             const SimConfig& cfg,
                                             double sobolev_index = 1.0,
                                             int n_checkpoints = 4);

struct DivergenceSeries {
  std::vector<double> t;
  std::vector<double> deviation;  // ||du||_{H^sigma} + ||drho||_{H^sigma}
};

// Twin-run separation of a perturbed initial condition. The perturbation is
// applied to u0 and must be small: ||du0||_{H^sigma} <= 1e-4 max(1, ||u0||_{H^sigma}).
DivergenceSeries stability_divergence(const State& s0, const Field& du0,
                                      const SimConfig& cfg,
                                      double sobolev_index = 1.0);

// Least-squares slope of log(v) against t (points with v <= 0 are skipped).
double fitted_log_slope(const std::vector<double>& t,
                        const std::vector<double>& v);

}  // namespace fw
