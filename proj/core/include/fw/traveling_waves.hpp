#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "fw/dynamics.hpp"

namespace fw {

// Even 2*pi-periodic travelling-wave machinery in cosine-coefficient space:
//   phi(y) = a[0]/2 + sum_{k>=1} a[k] cos(k y).
// The companion surface profile is psi = cA/(phi - c), with B = cA >= 0.
struct WaveProblem {
  double A = 1.0;     // integration constant
  int n_modes = 32;   // cosine truncation
  int oversample = 4; // collocation points per mode for the rational term

  void validate() const;
  int n_points() const { return oversample * n_modes; }
};

struct WaveSolution {
  std::vector<double> a;  // size n_modes + 1
  double c = 0.0;
  double residual_w = std::numeric_limits<double>::infinity();

  double amplitude() const { return a.size() > 1 ? a[1] : 0.0; }
};

// Cosine coefficient of the 2*pi-periodized kernel of e^{-|y|}: 2/(1+k^2).
double kernel_coefficient(int k);

// Speed where the linearization first loses invertibility on cos(y):
//   c* = 1/4 + sqrt((8A+1)/16), satisfying 2 c*^2 = A + c*.
double bifurcation_point(double A);

// Mode-k multiplier of the linearization at the trivial solution:
//   1 - (A+c)/(c^2 (1+k^2)).
double linearized_multiplier(int k, double c, double A);

// l^1 coefficient norm |a0|/2 + sum |ak| (the solution-space norm).
double w_norm(const std::vector<double>& a);

std::vector<double> eval_cosine_series(const std::vector<double>& a,
                                       const std::vector<double>& y);

// Residual of the travelling fixed-point map at (sol.c, phi):
//   F = phi - phi^2/(2c) + (1/2c) K * (cA/(phi - c) - phi) + A/c,
// projected back onto n_modes cosine coefficients. Throws SingularityGuard
// when max phi >= c - 1e-8.
std::vector<double> residual_f(const WaveSolution& sol, const WaveProblem& p);

struct FixSpeed {};
struct FixAmplitude {
  double s = 0.0;
};
using NewtonConstraint = std::variant<FixSpeed, FixAmplitude>;

enum class JacobianMode { analytic, finite_difference };

// Dense Newton Jacobian, row-major (n_modes+1)^2. Under FixAmplitude the
// a[1] column is replaced by the dF/dc column.
std::vector<std::vector<double>> newton_jacobian(const WaveSolution& sol,
                                                 const WaveProblem& p,
                                                 const NewtonConstraint& constraint,
                                                 JacobianMode mode);

// Damped Newton iteration on the coefficient vector (and on c under
// FixAmplitude); converged when the W-norm of the residual drops below tol.
WaveSolution newton_solve(const WaveSolution& guess, const WaveProblem& p,
                          const NewtonConstraint& constraint,
                          JacobianMode mode = JacobianMode::analytic,
                          int max_iter = 50, double tol = 1e-10);

struct BranchPoint {
  double s = 0.0;
  double c = 0.0;
  std::vector<double> a;
  double residual_w = 0.0;
  double tangency_ratio = 0.0;  // ||phi_s - s cos(y)||_W / |s|
};

struct WaveBranch {
  double A = 0.0;
  std::vector<BranchPoint> points;
  bool truncated = false;
  std::string failure_reason;
};

// Amplitude-parametrized continuation from the bifurcation point: each step
// seeds the next (linear extrapolation predictor, Newton corrector). On a
// failed step the branch is truncated and partial results returned.
WaveBranch continue_branch(const WaveProblem& p,
                           const std::vector<double>& s_values);

// psi = cA/(phi - c) evaluated on a simulation grid with half-period pi.
Field reconstruct_psi(const WaveSolution& sol, const WaveProblem& p,
                      const GridPtr& grid);
Field wave_velocity_field(const WaveSolution& sol, const GridPtr& grid);

// Spectral residual of -c psi_y + (phi psi)_y on the given grid.
double psi_equation_residual(const WaveSolution& sol, const WaveProblem& p,
                             const GridPtr& grid);

struct WaveValidation {
  double max_l2_error = 0.0;
  RunStatus status = RunStatus::completed;
  double period = 0.0;
  double min_psi = 0.0;  // recorded, not asserted: psi is negative for A > 0
};

// Time-steps the wave as initial data and measures the worst L^2 distance to
// the rigidly translated profile over one period (or t_end if positive).
WaveValidation validate_wave_in_time(const WaveSolution& sol,
                                     const WaveProblem& p, int grid_n,
                                     double dt, double t_end = -1.0);

}  // namespace fw
