#include "fw/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "fw/errors.hpp"

namespace fw {

State::State(Field u_, Field rho_bar_, double t_)
    : u(std::move(u_)), rho_bar(std::move(rho_bar_)), t(t_) {
  if (u.grid_ptr().get() != rho_bar.grid_ptr().get())
    throw InvalidFieldError("u and rho_bar must share one grid");
}

Field State::rho() const {
  Field r = rho_bar;
  Field one = Field::from_function(r.grid_ptr(), [](double) { return 1.0; });
  r -= one;
  return r;
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw Error("dt must be positive");
  if (!(t_end > 0.0)) throw Error("t_end must be positive");
  if (!(blowup_slope_threshold > 0.0))
    throw Error("blow-up slope threshold must be positive");
  if (snapshot_stride < 1) throw Error("snapshot stride must be >= 1");
}

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blow_up_detected: return "blow_up_detected";
    case RunStatus::step_rejected: return "step_rejected";
  }
  return "unknown";
}

StateDerivative Trajectory::rate_at(std::size_t i) const {
  const Snapshot& snap = snapshots.at(i);
  if (snap.rate) return *snap.rate;
  return config.mollifier
             ? rhs_mollified(snap.state, *config.mollifier, config.dealias)
             : rhs(snap.state, config.dealias);
}

namespace {

Field product(const Field& a, const Field& b, bool dealias) {
  return dealias ? multiply_dealiased(a, b) : pointwise_multiply(a, b);
}

}  // namespace

StateDerivative rhs(const State& s, bool dealias) {
  const Field ux = derivative(s.u);
  Field du = -product(s.u, ux, dealias);
  // T annihilates constants, so rho_bar - 1 - u and rho_bar - u agree here.
  du += nonlocal_t(s.rho_bar - s.u);
  Field drho = -derivative(product(s.rho_bar, s.u, dealias));
  return {std::move(du), std::move(drho)};
}

StateDerivative rhs_mollified(const State& s, const MollifierSpec& spec,
                              bool dealias) {
  const Field ju = mollify(s.u, spec);
  const Field jux = mollify(derivative(s.u), spec);
  Field du = -mollify(product(ju, jux, dealias), spec);
  const Field rho = s.rho();
  du += nonlocal_t(rho - s.u);
  const Field jrho = mollify(rho, spec);
  Field drho = -derivative(mollify(product(ju, jrho, dealias), spec));
  drho -= derivative(s.u);
  return {std::move(du), std::move(drho)};
}

double cfl_number(const State& s, double dt) {
  return s.u.max_abs() * dt / s.grid().dx();
}

State step_rk4(const State& s, double dt, const RhsFunction& f) {
  if (!(dt > 0.0)) throw Error("dt must be positive");
  if (!(cfl_number(s, dt) <= 0.5))
    throw CflViolationError("advection CFL number exceeds 0.5");

  const StateDerivative k1 = f(s);
  State s2(s.u + 0.5 * dt * k1.du, s.rho_bar + 0.5 * dt * k1.drho_bar,
           s.t + 0.5 * dt);
  const StateDerivative k2 = f(s2);
  State s3(s.u + 0.5 * dt * k2.du, s.rho_bar + 0.5 * dt * k2.drho_bar,
           s.t + 0.5 * dt);
  const StateDerivative k3 = f(s3);
  State s4(s.u + dt * k3.du, s.rho_bar + dt * k3.drho_bar, s.t + dt);
  const StateDerivative k4 = f(s4);

  const double w = dt / 6.0;
  Field u_next = s.u + w * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
  Field r_next = s.rho_bar + w * (k1.drho_bar + 2.0 * k2.drho_bar +
                                  2.0 * k3.drho_bar + k4.drho_bar);
  return State(std::move(u_next), std::move(r_next), s.t + dt);
}

namespace {

DiagnosticsRecord make_record(const State& s, double l1_rho0, double k1_at_0) {
  DiagnosticsRecord r;
  r.t = s.t;
  const auto [mn, mx] = slope_extrema(s.u);
  r.min_slope = mn.value;
  r.max_slope = mx.value;
  const auto [iu, ir] = conserved_integrals(s);
  r.int_u = iu;
  r.int_rho_bar = ir;
  r.l2_u = l2_norm(s.u);
  r.l1_rho_bar = l1_norm(s.rho_bar);
  r.energy_s2 = energy(s, 2.0);
  r.riccati_forcing_bound = l1_rho0 + k1_at_0 + l1_rho0 * s.t;
  return r;
}

}  // namespace

Trajectory simulate(const State& s0, const SimConfig& cfg) {
  cfg.validate();
  if (s0.empty()) throw InvalidFieldError("empty initial state");
  if (!s0.finite()) throw InvalidFieldError("non-finite initial state");

  const RhsFunction f =
      cfg.mollifier
          ? RhsFunction([&cfg](const State& s) {
              return rhs_mollified(s, *cfg.mollifier, cfg.dealias);
            })
          : RhsFunction(
                [&cfg](const State& s) { return rhs(s, cfg.dealias); });

  const double l1_rho0 = l1_norm(s0.rho_bar);
  const double l2_u0 = l2_norm(s0.u);

  Trajectory traj;
  traj.config = cfg;
  traj.status = RunStatus::completed;

  State state = s0;
  state.t = 0.0;
  traj.records.push_back(make_record(state, l1_rho0, l2_u0));
  traj.snapshots.push_back(Snapshot{state, f(state)});

  double dt = cfg.dt;
  int halvings = 0;
  int steps_since_snapshot = 0;
  const double t_tiny = 1e-12 * cfg.t_end;

  auto push_snapshot = [&](const State& s) {
    traj.snapshots.push_back(Snapshot{s, f(s)});
    steps_since_snapshot = 0;
  };

  while (state.t < cfg.t_end - t_tiny) {
    double step_dt = std::min(dt, cfg.t_end - state.t);

    // Halve dt until the CFL precondition holds or the budget is spent.
    bool rejected = false;
    State next;
    for (;;) {
      if (cfl_number(state, step_dt) <= 0.5) {
        next = step_rk4(state, step_dt, f);
        if (next.finite()) break;
      }
      if (halvings >= 20) {
        rejected = true;
        break;
      }
      dt *= 0.5;
      ++halvings;
      step_dt = std::min(dt, cfg.t_end - state.t);
    }
    if (rejected) {
      traj.status = RunStatus::step_rejected;
      break;
    }

    state = std::move(next);
    ++traj.steps_taken;
    ++steps_since_snapshot;
    traj.records.push_back(make_record(state, l1_rho0, l2_u0));

    if (traj.records.back().min_slope <= -cfg.blowup_slope_threshold) {
      traj.status = RunStatus::blow_up_detected;
      traj.blowup_time = state.t;
      push_snapshot(state);
      break;
    }
    if (steps_since_snapshot >= cfg.snapshot_stride) push_snapshot(state);
  }

  if (traj.snapshots.back().state.t != state.t && state.finite())
    push_snapshot(state);
  traj.dt_final = dt;
  return traj;
}

double energy(const State& s, double s_index) {
  if (!(s_index > 1.5))
    throw InvalidSobolevIndexError(
        "energy is defined for Sobolev index s > 3/2");
  const double nu = sobolev_norm(s.u, s_index);
  const double nr = sobolev_norm(s.rho(), s_index - 1.0);
  return 0.5 * nu * nu + 0.5 * nr * nr;
}

ConvergenceTable mollifier_convergence_study(const State& s0,
                                             const std::vector<double>& eps_list,
                                             const SimConfig& cfg,
                                             double sobolev_index,
                                             int n_checkpoints) {
  for (size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw Error("epsilon list must be strictly decreasing");
  if (n_checkpoints < 1) throw Error("need at least one checkpoint");

  SimConfig base_cfg = cfg;
  base_cfg.mollifier.reset();
  const Trajectory base = simulate(s0, base_cfg);

  // Checkpoints are snapshot times shared by all runs (fixed dt, no blow-up).
  const std::size_t n_snaps = base.snapshots.size();
  std::vector<std::size_t> idx;
  for (int c = 1; c <= n_checkpoints; ++c)
    idx.push_back(c * (n_snaps - 1) / n_checkpoints);

  ConvergenceTable table;
  table.sobolev_index = sobolev_index;
  for (std::size_t i : idx)
    table.checkpoint_times.push_back(base.snapshots[i].state.t);

  for (double eps : eps_list) {
    SimConfig mcfg = cfg;
    mcfg.mollifier = MollifierSpec(eps, cfg.mollifier
                                            ? cfg.mollifier->kind
                                            : MollifierKind::gaussian);
    const Trajectory run = simulate(s0, mcfg);
    if (run.snapshots.size() != n_snaps)
      throw Error("mollified run diverged from the reference stepping");
    ConvergenceRow row;
    row.epsilon = eps;
    for (std::size_t i : idx) {
      const Field diff = run.snapshots[i].state.u - base.snapshots[i].state.u;
      row.deviation.push_back(sobolev_norm(diff, sobolev_index));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

DivergenceSeries stability_divergence(const State& s0, const Field& du0,
                                      const SimConfig& cfg,
                                      double sobolev_index) {
  const double base_size =
      std::max(1.0, sobolev_norm(s0.u, sobolev_index));
  if (sobolev_norm(du0, sobolev_index) > 1e-4 * base_size)
    throw InvalidPerturbationError(
        "perturbation too large for the twin-run separation study");

  const Trajectory a = simulate(s0, cfg);
  State s0b(s0.u + du0, s0.rho_bar, 0.0);
  const Trajectory b = simulate(s0b, cfg);
  const std::size_t n = std::min(a.snapshots.size(), b.snapshots.size());

  DivergenceSeries out;
  for (std::size_t i = 0; i < n; ++i) {
    const State& sa = a.snapshots[i].state;
    const State& sb = b.snapshots[i].state;
    out.t.push_back(sa.t);
    out.deviation.push_back(sobolev_norm(sb.u - sa.u, sobolev_index) +
                            sobolev_norm(sb.rho_bar - sa.rho_bar,
                                         sobolev_index));
  }
  return out;
}

double fitted_log_slope(const std::vector<double>& t,
                        const std::vector<double>& v) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(v[i] > 0.0)) continue;
    const double y = std::log(v[i]);
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
    ++n;
  }
  if (n < 2) return 0.0;
  const double denom = n * stt - st * st;
  return denom != 0.0 ? (n * sty - st * sy) / denom : 0.0;
}

}  // namespace fw
