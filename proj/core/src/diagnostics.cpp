#include "fw/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "fw/dynamics.hpp"
#include "fw/errors.hpp"

namespace fw {

namespace {

// Parabola through the grid neighbours of index j; returns the refined
// extremum (value, location). Falls back to the grid point when flat.
Extremum refine_at(const Field& f, int j) {
  const Grid& g = f.grid();
  const int n = g.size();
  const double fm = f[(j - 1 + n) % n];
  const double f0 = f[j];
  const double fp = f[(j + 1) % n];
  const double den = fm - 2.0 * f0 + fp;
  Extremum e;
  e.index = j;
  if (std::abs(den) < 1e-300) {
    e.value = f0;
    e.location = g.x(j);
    return e;
  }
  const double delta = 0.5 * (fm - fp) / den;  // offset in units of dx
  const double clamped = std::clamp(delta, -0.5, 0.5);
  e.location = g.x(j) + clamped * g.dx();
  e.value = f0 - 0.25 * (fm - fp) * clamped;
  return e;
}

}  // namespace

Extremum refined_min(const Field& f) {
  int jm = 0;
  for (int j = 1; j < f.size(); ++j)
    if (f[j] < f[jm]) jm = j;
  Extremum e = refine_at(f, jm);
  if (e.value > f[jm]) {
    e.value = f[jm];
    e.location = f.grid().x(jm);
  }
  return e;
}

Extremum refined_max(const Field& f) {
  int jm = 0;
  for (int j = 1; j < f.size(); ++j)
    if (f[j] > f[jm]) jm = j;
  Extremum e = refine_at(f, jm);
  if (e.value < f[jm]) {
    e.value = f[jm];
    e.location = f.grid().x(jm);
  }
  return e;
}

std::pair<Extremum, Extremum> slope_extrema(const Field& u) {
  const Field ux = derivative(u);
  return {refined_min(ux), refined_max(ux)};
}

std::pair<double, double> conserved_integrals(const State& s) {
  const double two_l = 2.0 * s.grid().half_period();
  return {two_l * s.u.mean(), two_l * s.rho_bar.mean()};
}

double k1_growth_bound(const State& s0, double t) {
  return l2_norm(s0.u) + l1_norm(s0.rho_bar) * t;
}

std::string criterion_name(BreakingCriterion c) {
  return c == BreakingCriterion::slope_sum ? "thm43" : "thm42";
}

bool slope_sum_condition(double m0, double big_m0) {
  return m0 + big_m0 <= -2.0;
}

double slope_sum_bound(double m0) { return 1.0 / std::abs(m0 + 0.5); }

double forcing_bound_breaking_time(double m0, double j) {
  return std::log((m0 - j) / (m0 + j)) / (2.0 * j);
}

BreakingPrediction predict_breaking_slope_sum(const State& s0) {
  BreakingPrediction pred;
  pred.criterion = BreakingCriterion::slope_sum;
  pred.l1_rho_bar0 = l1_norm(s0.rho_bar);
  if (s0.rho_bar.min_value() < 0.0)
    throw NotApplicableError("slope-sum criterion requires rho_bar0 >= 0");
  if (std::abs(pred.l1_rho_bar0 - 1.0) > 1e-10)
    throw NotApplicableError(
        "slope-sum criterion requires ||rho_bar0||_L1 = 1; rescale "
        "explicitly if that is intended");
  const auto [mn, mx] = slope_extrema(s0.u);
  pred.m0 = mn.value;
  pred.big_m0 = mx.value;
  pred.satisfied = slope_sum_condition(pred.m0, pred.big_m0);
  if (pred.satisfied)
    pred.breaking_time_upper_bound = slope_sum_bound(pred.m0);
  return pred;
}

BreakingPrediction predict_breaking_forcing_bound(const State& s0, double eps,
                                                  double k2, double c_bound) {
  if (!(eps > 0.0)) throw InvalidBoundsError("eps must be positive");
  if (!(k2 + c_bound > 0.0))
    throw InvalidBoundsError("K2 + C must be positive");
  BreakingPrediction pred;
  pred.criterion = BreakingCriterion::forcing_bound;
  pred.eps = eps;
  pred.j_bound = std::sqrt(k2 + c_bound);
  pred.l1_rho_bar0 = l1_norm(s0.rho_bar);
  const auto [mn, mx] = slope_extrema(s0.u);
  pred.m0 = mn.value;
  pred.big_m0 = mx.value;
  pred.satisfied = pred.m0 <= -(1.0 + eps) * pred.j_bound;
  if (pred.satisfied)
    pred.breaking_time_upper_bound =
        forcing_bound_breaking_time(pred.m0, pred.j_bound);
  return pred;
}

double riccati_comparison_value(double m0, double forcing_sq, double t) {
  if (forcing_sq == 0.0) {
    const double denom = 1.0 + m0 * t;
    return m0 / denom;
  }
  const double j = std::sqrt(forcing_sq);
  // m(t) = -J coth(J (t* - t)) for m0 < -J
  const double t_star = riccati_blowup_time_closed_form(m0, forcing_sq);
  return -j / std::tanh(j * (t_star - t));
}

double riccati_blowup_time_closed_form(double m0, double forcing_sq) {
  if (forcing_sq == 0.0) return -1.0 / m0;  // requires m0 < 0
  const double j = std::sqrt(forcing_sq);
  return std::log((m0 - j) / (m0 + j)) / (2.0 * j);
}

double riccati_blowup_time_numeric(double m0, double forcing_sq, double dt0) {
  double m = m0;
  double t = 0.0;
  const auto f = [forcing_sq](double y) { return -y * y + forcing_sq; };
  while (std::abs(m) < 1e7) {
    const double dt = std::min(dt0, 0.05 / std::abs(m));
    const double k1 = f(m);
    const double k2 = f(m + 0.5 * dt * k1);
    const double k3 = f(m + 0.5 * dt * k2);
    const double k4 = f(m + dt * k3);
    m += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += dt;
    if (t > 1e6) throw Error("comparison solution did not blow up");
  }
  // Asymptotically m ~ -1/(t* - t); the tail correction is exact for F = 0.
  return t + 1.0 / std::abs(m);
}

VerificationReport empirical_breaking_check(const Trajectory& traj,
                                            const BreakingPrediction& pred) {
  VerificationReport rep;
  rep.prediction = pred;
  rep.dt = traj.config.dt;

  // The trajectory must come from the state the prediction was made for.
  const State& s0 = traj.initial_state();
  const auto [mn, mx] = slope_extrema(s0.u);
  if (std::abs(mn.value - pred.m0) > 1e-9 ||
      std::abs(l1_norm(s0.rho_bar) - pred.l1_rho_bar0) > 1e-9)
    throw MismatchedInitialDataError(
        "trajectory initial data does not match the prediction inputs");

  rep.blow_up_detected = traj.status == RunStatus::blow_up_detected;
  if (rep.blow_up_detected) rep.detected_time = traj.blowup_time;
  if (rep.blow_up_detected && pred.breaking_time_upper_bound)
    rep.within_bound =
        *rep.detected_time <= *pred.breaking_time_upper_bound + 2.0 * rep.dt;

  // The criteria are sufficient, not necessary: with an unsatisfied
  // prediction the observed outcome is recorded and nothing is compared.
  if (!pred.satisfied) return rep;

  // Observed minimum slope vs. the comparison Riccati solution.
  const bool shifted = pred.criterion == BreakingCriterion::slope_sum;
  const double m0 = shifted ? pred.m0 + 0.5 : pred.m0;
  const double forcing_sq =
      shifted ? 0.0 : pred.j_bound * pred.j_bound;
  const double t_star = riccati_blowup_time_closed_form(m0, forcing_sq);
  for (const DiagnosticsRecord& r : traj.records) {
    if (r.t >= t_star) break;
    rep.t.push_back(r.t);
    rep.m_observed.push_back(r.min_slope);
    const double mc = riccati_comparison_value(m0, forcing_sq, r.t);
    rep.m_comparison.push_back(shifted ? mc - 0.5 : mc);
  }
  return rep;
}

}  // namespace fw
