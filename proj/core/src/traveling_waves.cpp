#include "fw/traveling_waves.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "fw/errors.hpp"

namespace fw {

namespace {

constexpr double kGuardMargin = 1e-8;

// Collocation grid over one full period and the cosine projection weights.
struct Collocation {
  int n_points;
  int n_modes;
  std::vector<double> y;

  explicit Collocation(const WaveProblem& p)
      : n_points(p.n_points()), n_modes(p.n_modes) {
    y.resize(n_points);
    for (int q = 0; q < n_points; ++q)
      y[q] = 2.0 * M_PI * static_cast<double>(q) / n_points;
  }

  std::vector<double> evaluate(const std::vector<double>& a) const {
    return eval_cosine_series(a, y);
  }

  // b_k = (2/Q) sum_q g(y_q) cos(k y_q); exact for trig degree < Q - k.
  std::vector<double> project(const std::vector<double>& g) const {
    std::vector<double> b(n_modes + 1, 0.0);
    for (int k = 0; k <= n_modes; ++k) {
      double sum = 0.0;
      for (int q = 0; q < n_points; ++q)
        sum += g[q] * std::cos(k * y[q]);
      b[k] = 2.0 * sum / n_points;
    }
    return b;
  }
};

void check_guard(const std::vector<double>& phi, double c) {
  double mx = phi[0];
  for (double v : phi) mx = std::max(mx, v);
  if (!(mx < c - kGuardMargin))
    throw SingularityGuardError(
        "wave profile reached the guard margin below the pole phi = c");
}

std::vector<double> scaled(std::vector<double> v, double a) {
  for (double& x : v) x *= a;
  return v;
}

}  // namespace

void WaveProblem::validate() const {
  if (!(A >= 0.0)) throw Error("integration constant A must be >= 0");
  if (n_modes < 8) throw Error("need at least 8 cosine modes");
  if (oversample < 4) throw Error("collocation oversampling must be >= 4");
}

double kernel_coefficient(int k) {
  if (k < 0) throw Error("kernel coefficient index must be >= 0");
  return 2.0 / (1.0 + static_cast<double>(k) * k);
}

double bifurcation_point(double A) {
  if (!(A >= 0.0)) throw Error("integration constant A must be >= 0");
  return 0.25 + std::sqrt((8.0 * A + 1.0) / 16.0);
}

double linearized_multiplier(int k, double c, double A) {
  if (!(c > 0.0)) throw Error("wave speed must be positive");
  const double kk = static_cast<double>(k) * k;
  return 1.0 - (A + c) / (c * c * (1.0 + kk));
}

double w_norm(const std::vector<double>& a) {
  double n = 0.5 * std::abs(a[0]);
  for (std::size_t k = 1; k < a.size(); ++k) n += std::abs(a[k]);
  return n;
}

std::vector<double> eval_cosine_series(const std::vector<double>& a,
                                       const std::vector<double>& y) {
  std::vector<double> out(y.size());
  for (std::size_t q = 0; q < y.size(); ++q) {
    double v = 0.5 * a[0];
    for (std::size_t k = 1; k < a.size(); ++k)
      v += a[k] * std::cos(static_cast<double>(k) * y[q]);
    out[q] = v;
  }
  return out;
}

std::vector<double> residual_f(const WaveSolution& sol, const WaveProblem& p) {
  p.validate();
  const double c = sol.c;
  const double A = p.A;
  if (!(c > 0.0)) throw Error("wave speed must be positive");

  const Collocation col(p);
  const std::vector<double> phi = col.evaluate(sol.a);
  check_guard(phi, c);

  std::vector<double> w(col.n_points), sq(col.n_points);
  for (int q = 0; q < col.n_points; ++q) {
    w[q] = c * A / (phi[q] - c) - phi[q];
    sq[q] = phi[q] * phi[q];
  }
  const std::vector<double> w_hat = col.project(w);
  const std::vector<double> sq_hat = col.project(sq);

  std::vector<double> out(p.n_modes + 1);
  for (int k = 0; k <= p.n_modes; ++k)
    out[k] = sol.a[k] - sq_hat[k] / (2.0 * c) +
             kernel_coefficient(k) * w_hat[k] / (2.0 * c);
  out[0] += 2.0 * A / c;
  return out;
}

namespace {

// Analytic directional derivative of F at (c, phi) in the direction dphi
// (given by collocation values), as a coefficient vector.
std::vector<double> apply_linearization(const Collocation& col,
                                        const std::vector<double>& phi,
                                        const std::vector<double>& dphi_vals,
                                        const std::vector<double>& dphi_coef,
                                        double c, double A) {
  std::vector<double> t2(col.n_points), t3(col.n_points);
  for (int q = 0; q < col.n_points; ++q) {
    const double pc = phi[q] - c;
    t2[q] = -(phi[q] / c) * dphi_vals[q];
    t3[q] = (-c * A / (pc * pc) - 1.0) * dphi_vals[q];
  }
  const std::vector<double> t2_hat = col.project(t2);
  const std::vector<double> t3_hat = col.project(t3);
  std::vector<double> out(dphi_coef.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = dphi_coef[k] + t2_hat[k] +
             kernel_coefficient(static_cast<int>(k)) * t3_hat[k] / (2.0 * c);
  return out;
}

// Analytic dF/dc column at (c, phi).
std::vector<double> speed_derivative(const Collocation& col,
                                     const std::vector<double>& phi, double c,
                                     double A) {
  std::vector<double> sq(col.n_points), w(col.n_points), dw(col.n_points);
  for (int q = 0; q < col.n_points; ++q) {
    const double pc = phi[q] - c;
    sq[q] = phi[q] * phi[q];
    w[q] = c * A / pc - phi[q];
    dw[q] = A / pc + c * A / (pc * pc);
  }
  const std::vector<double> sq_hat = col.project(sq);
  const std::vector<double> w_hat = col.project(w);
  const std::vector<double> dw_hat = col.project(dw);
  std::vector<double> out(static_cast<std::size_t>(col.n_modes) + 1);
  for (int k = 0; k <= col.n_modes; ++k) {
    const double kk = kernel_coefficient(k);
    out[k] = sq_hat[k] / (2.0 * c * c) - kk * w_hat[k] / (2.0 * c * c) +
             kk * dw_hat[k] / (2.0 * c);
  }
  out[0] -= 2.0 * A / (c * c);
  return out;
}

bool column_is_speed(const NewtonConstraint& constraint, int j) {
  return std::holds_alternative<FixAmplitude>(constraint) && j == 1;
}

}  // namespace

std::vector<std::vector<double>> newton_jacobian(
    const WaveSolution& sol, const WaveProblem& p,
    const NewtonConstraint& constraint, JacobianMode mode) {
  p.validate();
  const int dim = p.n_modes + 1;
  std::vector<std::vector<double>> jac(dim, std::vector<double>(dim, 0.0));

  if (mode == JacobianMode::analytic) {
    const Collocation col(p);
    const std::vector<double> phi = col.evaluate(sol.a);
    check_guard(phi, sol.c);
    for (int j = 0; j < dim; ++j) {
      std::vector<double> column;
      if (column_is_speed(constraint, j)) {
        column = speed_derivative(col, phi, sol.c, p.A);
      } else {
        std::vector<double> coef(dim, 0.0);
        coef[j] = 1.0;
        std::vector<double> vals(col.n_points);
        if (j == 0) {
          std::fill(vals.begin(), vals.end(), 0.5);
        } else {
          for (int q = 0; q < col.n_points; ++q)
            vals[q] = std::cos(j * col.y[q]);
        }
        column = apply_linearization(col, phi, vals, coef, sol.c, p.A);
      }
      for (int r = 0; r < dim; ++r) jac[r][j] = column[r];
    }
    return jac;
  }

  // Central finite differences of residual_f, column by column.
  for (int j = 0; j < dim; ++j) {
    const bool speed_col = column_is_speed(constraint, j);
    const double base = speed_col ? sol.c : sol.a[j];
    const double h = 1e-7 * std::max(1.0, std::abs(base));
    WaveSolution up = sol;
    WaveSolution dn = sol;
    if (speed_col) {
      up.c = base + h;
      dn.c = base - h;
    } else {
      up.a[j] = base + h;
      dn.a[j] = base - h;
    }
    const std::vector<double> fu = residual_f(up, p);
    const std::vector<double> fd = residual_f(dn, p);
    for (int r = 0; r < dim; ++r) jac[r][j] = (fu[r] - fd[r]) / (2.0 * h);
  }
  return jac;
}

WaveSolution newton_solve(const WaveSolution& guess, const WaveProblem& p,
                          const NewtonConstraint& constraint, JacobianMode mode,
                          int max_iter, double tol) {
  p.validate();
  if (static_cast<int>(guess.a.size()) != p.n_modes + 1)
    throw Error("guess has the wrong number of cosine coefficients");

  WaveSolution sol = guess;
  if (const auto* fix = std::get_if<FixAmplitude>(&constraint))
    sol.a[1] = fix->s;

  std::vector<double> f = residual_f(sol, p);
  double fn = w_norm(f);

  const int dim = p.n_modes + 1;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (fn < tol) {
      sol.residual_w = fn;
      return sol;
    }

    const auto jac = newton_jacobian(sol, p, constraint, mode);
    Eigen::MatrixXd m(dim, dim);
    Eigen::VectorXd rhs(dim);
    for (int r = 0; r < dim; ++r) {
      rhs(r) = -f[r];
      for (int cidx = 0; cidx < dim; ++cidx) m(r, cidx) = jac[r][cidx];
    }
    const Eigen::VectorXd delta = m.colPivHouseholderQr().solve(rhs);

    // Damped update: halve until the residual decreases and the guard holds.
    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 30; ++halving) {
      WaveSolution trial = sol;
      for (int j = 0; j < dim; ++j) {
        if (column_is_speed(constraint, j))
          trial.c = sol.c + lambda * delta(j);
        else
          trial.a[j] = sol.a[j] + lambda * delta(j);
      }
      try {
        std::vector<double> ft = residual_f(trial, p);
        const double fnt = w_norm(ft);
        if (fnt < fn * (1.0 - 1e-4 * lambda) || fnt < tol) {
          sol = std::move(trial);
          f = std::move(ft);
          fn = fnt;
          accepted = true;
          break;
        }
      } catch (const SingularityGuardError&) {
        // step went past the pole; shorten it
      }
      lambda *= 0.5;
    }
    if (!accepted)
      throw NoConvergenceError("Newton line search stalled");
  }
  if (fn < tol) {
    sol.residual_w = fn;
    return sol;
  }
  throw NoConvergenceError("Newton did not converge within the iteration cap");
}

WaveBranch continue_branch(const WaveProblem& p,
                           const std::vector<double>& s_values) {
  p.validate();
  if (s_values.empty()) throw Error("empty amplitude list");
  for (std::size_t i = 1; i < s_values.size(); ++i)
    if (!(std::abs(s_values[i]) > std::abs(s_values[i - 1])))
      throw Error("amplitudes must move away from zero monotonically");

  WaveBranch branch;
  branch.A = p.A;
  const double c_star = bifurcation_point(p.A);
  const int dim = p.n_modes + 1;

  for (std::size_t i = 0; i < s_values.size(); ++i) {
    const double s = s_values[i];
    WaveSolution guess;
    guess.a.assign(dim, 0.0);
    if (branch.points.empty()) {
      guess.a[1] = s;
      guess.c = c_star;
    } else if (branch.points.size() == 1) {
      guess.a = branch.points.back().a;
      guess.a[1] = s;
      guess.c = branch.points.back().c;
    } else {
      const BranchPoint& p1 = branch.points[branch.points.size() - 2];
      const BranchPoint& p2 = branch.points.back();
      const double w = (s - p2.s) / (p2.s - p1.s);
      for (int j = 0; j < dim; ++j)
        guess.a[j] = p2.a[j] + w * (p2.a[j] - p1.a[j]);
      guess.c = p2.c + w * (p2.c - p1.c);
      guess.a[1] = s;
    }

    try {
      const WaveSolution sol = newton_solve(guess, p, FixAmplitude{s});
      BranchPoint bp;
      bp.s = s;
      bp.c = sol.c;
      bp.a = sol.a;
      bp.residual_w = sol.residual_w;
      std::vector<double> off = sol.a;
      off[1] = 0.0;  // distance to s cos(y) in the W norm
      bp.tangency_ratio = w_norm(off) / std::abs(s);
      branch.points.push_back(std::move(bp));
    } catch (const Error& e) {
      branch.truncated = true;
      branch.failure_reason = e.what();
      break;
    }
  }
  return branch;
}

namespace {

void check_wave_grid(const GridPtr& grid) {
  if (std::abs(grid->half_period() - M_PI) > 1e-12)
    throw InvalidGridError(
        "travelling-wave profiles are 2*pi-periodic; need half-period pi");
}

}  // namespace

Field wave_velocity_field(const WaveSolution& sol, const GridPtr& grid) {
  check_wave_grid(grid);
  std::vector<double> vals = eval_cosine_series(sol.a, grid->points());
  return Field(grid, std::move(vals));
}

Field reconstruct_psi(const WaveSolution& sol, const WaveProblem& p,
                      const GridPtr& grid) {
  check_wave_grid(grid);
  const std::vector<double> phi = eval_cosine_series(sol.a, grid->points());
  check_guard(phi, sol.c);
  std::vector<double> psi(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j)
    psi[j] = sol.c * p.A / (phi[j] - sol.c);
  return Field(grid, std::move(psi));
}

double psi_equation_residual(const WaveSolution& sol, const WaveProblem& p,
                             const GridPtr& grid) {
  const Field phi = wave_velocity_field(sol, grid);
  const Field psi = reconstruct_psi(sol, p, grid);
  const Field flux = pointwise_multiply(phi, psi) - sol.c * psi;
  return derivative(flux).max_abs();
}

WaveValidation validate_wave_in_time(const WaveSolution& sol,
                                     const WaveProblem& p, int grid_n,
                                     double dt, double t_end) {
  auto grid = Grid::make(M_PI, grid_n);
  const Field u0 = wave_velocity_field(sol, grid);
  const Field psi = reconstruct_psi(sol, p, grid);

  WaveValidation v;
  v.period = 2.0 * M_PI / sol.c;
  v.min_psi = psi.min_value();

  SimConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end > 0.0 ? t_end : v.period;
  const int n_steps = static_cast<int>(std::ceil(cfg.t_end / dt));
  cfg.snapshot_stride = std::max(1, n_steps / 16);

  const Trajectory traj = simulate(State(u0, psi, 0.0), cfg);
  v.status = traj.status;
  for (const Snapshot& snap : traj.snapshots) {
    const Field ref = spectral_shift(u0, sol.c * snap.state.t);
    v.max_l2_error = std::max(v.max_l2_error, l2_norm(snap.state.u - ref));
  }
  return v;
}

}  // namespace fw
