#include "fw/characteristics.hpp"

#include <cmath>
#include <limits>
#include <thread>

#include "fw/errors.hpp"

namespace fw {

namespace {

// Snapshot fields prepared for path integration: u and u_x together with
// their time derivatives (the rate and its spatial derivative).
struct FrameSet {
  std::vector<double> t;
  std::vector<Field> u, du;    // velocity and its time derivative
  std::vector<Field> ux, dux;  // spectral slope and its time derivative
  std::vector<Field> rho_bar;

  static FrameSet build(const Trajectory& traj) {
    FrameSet fs;
    const std::size_t n = traj.snapshots.size();
    fs.t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const State& s = traj.snapshots[i].state;
      const StateDerivative rate = traj.rate_at(i);
      fs.t.push_back(s.t);
      fs.u.push_back(s.u);
      fs.ux.push_back(derivative(s.u));
      fs.du.push_back(rate.du);
      fs.dux.push_back(derivative(rate.du));
      fs.rho_bar.push_back(s.rho_bar);
    }
    return fs;
  }

  // Cubic Hermite weights on [t_i, t_{i+1}] for tau in [0, 1].
  struct Weights {
    double w0, wd0, w1, wd1;
  };
  Weights weights(std::size_t i, double time) const {
    const double h = t[i + 1] - t[i];
    const double tau = (time - t[i]) / h;
    const double tau2 = tau * tau;
    const double tau3 = tau2 * tau;
    return {2 * tau3 - 3 * tau2 + 1, h * (tau3 - 2 * tau2 + tau),
            -2 * tau3 + 3 * tau2, h * (tau3 - tau2)};
  }

  double eval_u(std::size_t i, const Weights& w, double x) const {
    return w.w0 * u[i].eval(x) + w.wd0 * du[i].eval(x) +
           w.w1 * u[i + 1].eval(x) + w.wd1 * du[i + 1].eval(x);
  }
  double eval_ux(std::size_t i, const Weights& w, double x) const {
    return w.w0 * ux[i].eval(x) + w.wd0 * dux[i].eval(x) +
           w.w1 * ux[i + 1].eval(x) + w.wd1 * dux[i + 1].eval(x);
  }
};

}  // namespace

int CharacteristicsBundle::winding(std::size_t seed, std::size_t time_index,
                                   double half_period) const {
  return static_cast<int>(std::floor(
      (q[seed][time_index] + half_period) / (2.0 * half_period)));
}

CharacteristicsBundle advect(const Trajectory& traj,
                             const std::vector<double>& seeds, int threads) {
  if (traj.snapshots.size() < 2)
    throw Error("trajectory has too few snapshots for path integration");
  const Grid& g = traj.initial_state().grid();
  for (double x0 : seeds)
    if (!(x0 >= -g.half_period()) || !(x0 < g.half_period()))
      throw SeedOutsideDomainError("seed lies outside [-L, L)");

  const FrameSet fs = FrameSet::build(traj);
  const std::size_t n_times = fs.t.size();

  CharacteristicsBundle bundle;
  bundle.seeds = seeds;
  bundle.times = fs.t;
  bundle.q.assign(seeds.size(), std::vector<double>(n_times));
  bundle.qx.assign(seeds.size(), std::vector<double>(n_times));
  bundle.gamma.assign(seeds.size(), std::vector<double>(n_times));

  auto integrate_seed = [&](std::size_t si) {
    double q = seeds[si];
    double w = 0.0;  // log of the flow Jacobian
    bundle.q[si][0] = q;
    bundle.qx[si][0] = 1.0;
    bundle.gamma[si][0] = fs.rho_bar[0].eval(q);
    for (std::size_t i = 0; i + 1 < n_times; ++i) {
      const double h = fs.t[i + 1] - fs.t[i];
      const auto w0 = fs.weights(i, fs.t[i]);
      const auto wh = fs.weights(i, fs.t[i] + 0.5 * h);
      const auto w1 = fs.weights(i, fs.t[i + 1]);

      const double k1q = fs.eval_u(i, w0, q);
      const double k1w = fs.eval_ux(i, w0, q);
      const double k2q = fs.eval_u(i, wh, q + 0.5 * h * k1q);
      const double k2w = fs.eval_ux(i, wh, q + 0.5 * h * k1q);
      const double k3q = fs.eval_u(i, wh, q + 0.5 * h * k2q);
      const double k3w = fs.eval_ux(i, wh, q + 0.5 * h * k2q);
      const double k4q = fs.eval_u(i, w1, q + h * k3q);
      const double k4w = fs.eval_ux(i, w1, q + h * k3q);

      q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
      w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);

      bundle.q[si][i + 1] = q;
      bundle.qx[si][i + 1] = std::exp(w);
      bundle.gamma[si][i + 1] = fs.rho_bar[i + 1].eval(q);
    }
  };

  if (threads <= 1 || seeds.size() < 2) {
    for (std::size_t si = 0; si < seeds.size(); ++si) integrate_seed(si);
  } else {
    const int n_workers = std::min<std::size_t>(threads, seeds.size());
    std::vector<std::thread> pool;
    for (int widx = 0; widx < n_workers; ++widx)
      pool.emplace_back([&, widx] {
        for (std::size_t si = widx; si < seeds.size(); si += n_workers)
          integrate_seed(si);
      });
    for (auto& th : pool) th.join();
  }
  return bundle;
}

double verify_density_invariant(const CharacteristicsBundle& bundle,
                                const Trajectory& traj) {
  const Field& rho0 = traj.initial_state().rho_bar;
  double worst = 0.0;
  for (std::size_t si = 0; si < bundle.seeds.size(); ++si) {
    const double ref = rho0.eval(bundle.seeds[si]);
    for (std::size_t i = 0; i < bundle.times.size(); ++i) {
      const double v = bundle.gamma[si][i] * bundle.qx[si][i] - ref;
      worst = std::max(worst, std::abs(v));
    }
  }
  return worst;
}

RiccatiForcing riccati_forcing(const Trajectory& traj,
                               const CharacteristicsBundle& bundle) {
  RiccatiForcing out;
  const State& s0 = traj.initial_state();
  const double t_final = bundle.times.back();
  out.bound = l1_norm(s0.rho_bar) + k1_growth_bound(s0, t_final) + 1e-6;

  out.f.assign(bundle.seeds.size(), std::vector<double>(bundle.times.size()));
  for (std::size_t i = 0; i < bundle.times.size(); ++i) {
    const State& s = traj.snapshots[i].state;
    const Field forcing = second_deriv_helmholtz(s.rho_bar - s.u);
    for (std::size_t si = 0; si < bundle.seeds.size(); ++si) {
      const double v = forcing.eval(bundle.q[si][i]);
      out.f[si][i] = v;
      out.max_abs = std::max(out.max_abs, std::abs(v));
    }
  }
  out.within_bound = out.max_abs <= out.bound;
  return out;
}

ExtremumSeries slope_along_extremum(const Trajectory& traj) {
  ExtremumSeries es;
  const std::size_t n = traj.snapshots.size();
  for (std::size_t i = 0; i < n; ++i) {
    const State& s = traj.snapshots[i].state;
    const auto [mn, mx] = slope_extrema(s.u);
    const Field forcing = second_deriv_helmholtz(s.rho_bar - s.u);
    es.t.push_back(s.t);
    es.m.push_back(mn.value);
    es.big_m.push_back(mx.value);
    es.xi_min.push_back(mn.location);
    es.xi_max.push_back(mx.location);
    es.f_at_max.push_back(forcing.eval(mx.location));
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  es.dbig_m_dt.assign(n, nan);
  es.residual.assign(n, nan);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h = es.t[i + 1] - es.t[i - 1];
    es.dbig_m_dt[i] = (es.big_m[i + 1] - es.big_m[i - 1]) / h;
    es.residual[i] =
        es.dbig_m_dt[i] - (-es.big_m[i] * es.big_m[i] + es.f_at_max[i]);
  }
  return es;
}

double log_slope_growth_margin(const Trajectory& traj) {
  const State& s0 = traj.initial_state();
  const double t_final = traj.records.back().t;
  const double rate =
      l1_norm(s0.rho_bar) + k1_growth_bound(s0, t_final) + 0.5;
  const double base = std::log1p(traj.records.front().max_slope);
  double margin = -std::numeric_limits<double>::infinity();
  for (const DiagnosticsRecord& r : traj.records)
    margin = std::max(margin, std::log1p(r.max_slope) - base - rate * r.t);
  return margin;
}

}  // namespace fw
