#include "commands.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

#include "config.hpp"
#include "fw/characteristics.hpp"
#include "fw/errors.hpp"
#include "fw/io.hpp"
#include "fw/traveling_waves.hpp"

namespace fw::cli {

namespace {

using nlohmann::json;

std::map<std::string, std::string> setup_as_map(const RunSetup& setup) {
  std::map<std::string, std::string> m;
  m["grid.L"] = io::format_double(setup.grid_l);
  m["grid.N"] = std::to_string(setup.grid_n);
  m["init.u"] = setup.init_u_text;
  m["init.rho_bar"] = setup.init_rho_bar_text;
  m["dt"] = io::format_double(setup.sim.dt);
  m["t_end"] = io::format_double(setup.sim.t_end);
  m["dealias"] = setup.sim.dealias ? "true" : "false";
  m["blowup_slope_threshold"] =
      io::format_double(setup.sim.blowup_slope_threshold);
  if (setup.sim.mollifier) {
    m["mollifier.epsilon"] = io::format_double(setup.sim.mollifier->epsilon);
    m["mollifier.kind"] =
        setup.sim.mollifier->kind == MollifierKind::gaussian ? "gaussian"
                                                             : "sharp_cutoff";
  }
  m["output.dir"] = setup.output_dir.string();
  m["output.stride"] = std::to_string(setup.output_stride);
  m["seed"] = std::to_string(setup.seed);
  m["threads"] = std::to_string(setup.threads);
  return m;
}

json prediction_to_json(const BreakingPrediction& pred) {
  json j;
  j["criterion"] = criterion_name(pred.criterion);
  j["satisfied"] = pred.satisfied;
  if (pred.breaking_time_upper_bound)
    j["breaking_time_upper_bound"] = *pred.breaking_time_upper_bound;
  j["inputs"]["m0"] = pred.m0;
  j["inputs"]["M0"] = pred.big_m0;
  j["inputs"]["l1_rho_bar0"] = pred.l1_rho_bar0;
  if (pred.criterion == BreakingCriterion::forcing_bound) {
    j["inputs"]["eps"] = pred.eps;
    j["inputs"]["J"] = pred.j_bound;
  }
  return j;
}

void write_soft_failure(const std::filesystem::path& dir,
                        const std::string& kind, const std::string& message) {
  std::filesystem::create_directories(dir);
  json j;
  j["error"] = kind;
  j["message"] = message;
  io::write_text_atomic(dir / "error.json", j.dump(2) + "\n");
}

std::vector<double> read_seeds_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open seeds file " + path.string());
  std::vector<double> seeds;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && (line == "seed" || line == "x" || line == "x0")) {
      first = false;
      continue;
    }
    first = false;
    try {
      seeds.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw IoError("malformed seed '" + line + "' in " + path.string());
    }
  }
  if (seeds.empty()) throw IoError("no seeds in " + path.string());
  return seeds;
}

}  // namespace

int cmd_simulate(const std::filesystem::path& config_path) {
  const RunSetup setup = load_run_setup(config_path);
  std::filesystem::create_directories(setup.output_dir);
  write_manifest(setup.output_dir, "simulate", setup_as_map(setup));

  const Trajectory traj = simulate(setup.initial, setup.sim);
  io::write_trajectory(setup.output_dir, traj);
  std::cout << "status: " << status_name(traj.status)
            << "  steps: " << traj.steps_taken
            << "  snapshots: " << traj.snapshots.size() << "\n";
  return 0;
}

int cmd_characteristics(const std::filesystem::path& traj_dir,
                        const std::filesystem::path& seeds_csv,
                        const std::string& out_dir, int threads) {
  const Trajectory traj = io::read_trajectory(traj_dir);
  const std::vector<double> seeds = read_seeds_csv(seeds_csv);
  const std::filesystem::path out =
      out_dir.empty() ? traj_dir : resolve_output_dir(out_dir);
  std::filesystem::create_directories(out);

  std::map<std::string, std::string> resolved;
  resolved["traj"] = traj_dir.string();
  resolved["seeds"] = seeds_csv.string();
  resolved["threads"] = std::to_string(threads);
  write_manifest(out, "characteristics", resolved);

  const CharacteristicsBundle bundle = advect(traj, seeds, threads);
  const double max_dev = verify_density_invariant(bundle, traj);
  const RiccatiForcing forcing = riccati_forcing(traj, bundle);

  std::string body = "t,seed_id,q,qx,gamma\n";
  for (std::size_t si = 0; si < seeds.size(); ++si)
    for (std::size_t i = 0; i < bundle.times.size(); ++i) {
      body += io::format_double(bundle.times[i]);
      body += ',';
      body += std::to_string(si);
      body += ',';
      body += io::format_double(bundle.q[si][i]);
      body += ',';
      body += io::format_double(bundle.qx[si][i]);
      body += ',';
      body += io::format_double(bundle.gamma[si][i]);
      body += '\n';
    }
  io::write_text_atomic(out / "paths.csv", body);

  json report;
  report["max_deviation"] = max_dev;
  const Field& rho0 = traj.initial_state().rho_bar;
  json per_seed = json::array();
  for (std::size_t si = 0; si < seeds.size(); ++si) {
    double dev = 0.0;
    const double ref = rho0.eval(seeds[si]);
    for (std::size_t i = 0; i < bundle.times.size(); ++i)
      dev = std::max(dev,
                     std::abs(bundle.gamma[si][i] * bundle.qx[si][i] - ref));
    per_seed.push_back({{"seed", seeds[si]}, {"max_deviation", dev}});
  }
  report["per_seed"] = std::move(per_seed);
  report["riccati_forcing"] = {{"max_abs", forcing.max_abs},
                               {"bound", forcing.bound},
                               {"within_bound", forcing.within_bound}};
  io::write_text_atomic(out / "invariant_report.json", report.dump(2) + "\n");

  std::cout << "max density-invariant deviation: " << max_dev << "\n";
  return 0;
}

int cmd_check_breaking(const std::filesystem::path& config_path,
                       const BreakingOptions& opt) {
  RunSetup setup = load_run_setup(config_path);
  std::filesystem::create_directories(setup.output_dir);
  auto resolved = setup_as_map(setup);
  resolved["criterion"] = opt.criterion;
  resolved["normalize_rho"] = opt.normalize_rho ? "true" : "false";
  write_manifest(setup.output_dir, "check-breaking", resolved);

  State s0 = setup.initial;
  if (opt.normalize_rho) {
    // Rescaling changes the problem; it is offered only as an explicit,
    // recorded preprocessing step.
    const double mass = l1_norm(s0.rho_bar);
    if (!(mass > 0.0))
      throw NotApplicableError("cannot normalize a zero surface variable");
    s0 = State((1.0) * s0.u, (1.0 / mass) * s0.rho_bar, 0.0);
  }

  BreakingPrediction pred;
  try {
    if (opt.criterion == "thm43") {
      pred = predict_breaking_slope_sum(s0);
    } else if (opt.criterion == "thm42") {
      if (!opt.eps)
        throw Error("criterion thm42 requires --eps");
      double k2, c_bound;
      if (opt.bootstrap_c) {
        // Trial run to measure the slope bound C(T), then the sup bound
        // K2(T) = (||rho0||_inf + 1) e^{C T}.
        const Trajectory trial = simulate(s0, setup.sim);
        double c_obs = 0.0;
        for (const auto& r : trial.records)
          c_obs = std::max(c_obs,
                           std::max(std::abs(r.min_slope), r.max_slope));
        c_bound = c_obs;
        k2 = (s0.rho().max_abs() + 1.0) * std::exp(c_obs * setup.sim.t_end);
      } else {
        if (!opt.k2 || !opt.c_bound)
          throw Error("criterion thm42 requires --k2 and --c (or --bootstrap-c)");
        k2 = *opt.k2;
        c_bound = *opt.c_bound;
      }
      pred = predict_breaking_forcing_bound(s0, *opt.eps, k2, c_bound);
    } else {
      throw Error("unknown criterion '" + opt.criterion +
                  "' (expected thm42 or thm43)");
    }
  } catch (const NotApplicableError& e) {
    json j;
    j["criterion"] = opt.criterion;
    j["not_applicable"] = true;
    j["reason"] = e.what();
    io::write_text_atomic(setup.output_dir / "prediction.json",
                          j.dump(2) + "\n");
    std::cout << "not applicable: " << e.what() << "\n";
    return 2;
  }

  io::write_text_atomic(setup.output_dir / "prediction.json",
                        prediction_to_json(pred).dump(2) + "\n");
  std::cout << "criterion " << opt.criterion << ": "
            << (pred.satisfied ? "satisfied" : "not satisfied") << "\n";

  if (opt.run_simulation) {
    const Trajectory traj = simulate(s0, setup.sim);
    io::write_trajectory(setup.output_dir, traj);
    const VerificationReport rep = empirical_breaking_check(traj, pred);
    json v;
    v["prediction"] = prediction_to_json(rep.prediction);
    v["blow_up_detected"] = rep.blow_up_detected;
    if (rep.detected_time) v["detected_time"] = *rep.detected_time;
    v["within_bound"] = rep.within_bound;
    v["dt"] = rep.dt;
    v["riccati_comparison"] = {{"t", rep.t},
                               {"m_observed", rep.m_observed},
                               {"m_comparison", rep.m_comparison}};
    io::write_text_atomic(setup.output_dir / "verification.json",
                          v.dump(2) + "\n");
    std::cout << "simulation status: " << status_name(traj.status) << "\n";
  }
  return 0;
}

int cmd_waves(const WavesOptions& opt) {
  WaveProblem problem;
  problem.A = opt.A;
  problem.n_modes = opt.modes;
  problem.validate();
  if (!(opt.s_max > 0.0) || opt.s_steps < 1)
    throw Error("need s-max > 0 and s-steps >= 1");

  const std::filesystem::path out = resolve_output_dir(opt.out_dir);
  std::filesystem::create_directories(out);
  std::map<std::string, std::string> resolved;
  resolved["A"] = io::format_double(opt.A);
  resolved["s_max"] = io::format_double(opt.s_max);
  resolved["s_steps"] = std::to_string(opt.s_steps);
  resolved["modes"] = std::to_string(opt.modes);
  resolved["validate"] = opt.validate ? "true" : "false";
  write_manifest(out, "waves", resolved);

  std::vector<double> s_values;
  for (int i = 1; i <= opt.s_steps; ++i)
    s_values.push_back(opt.s_max * static_cast<double>(i) / opt.s_steps);
  const WaveBranch branch = continue_branch(problem, s_values);

  std::string body = "s,c";
  for (int k = 0; k <= problem.n_modes; ++k)
    body += ",a_" + std::to_string(k);
  body += ",residual\n";
  for (const BranchPoint& bp : branch.points) {
    body += io::format_double(bp.s);
    body += ',';
    body += io::format_double(bp.c);
    for (double a : bp.a) {
      body += ',';
      body += io::format_double(a);
    }
    body += ',';
    body += io::format_double(bp.residual_w);
    body += '\n';
  }
  io::write_text_atomic(out / "branch.csv", body);

  json summary;
  summary["A"] = problem.A;
  summary["c_star"] = bifurcation_point(problem.A);
  summary["converged_points"] = branch.points.size();
  summary["truncated"] = branch.truncated;
  if (branch.truncated) summary["failure_reason"] = branch.failure_reason;

  if (opt.validate) {
    json rows = json::array();
    for (const BranchPoint& bp : branch.points) {
      WaveSolution sol;
      sol.a = bp.a;
      sol.c = bp.c;
      sol.residual_w = bp.residual_w;
      const WaveValidation v = validate_wave_in_time(sol, problem, 256, 1e-3);
      rows.push_back({{"s", bp.s},
                      {"c", bp.c},
                      {"max_l2_error", v.max_l2_error},
                      {"status", status_name(v.status)},
                      {"min_psi", v.min_psi}});
    }
    json vj;
    vj["per_s"] = std::move(rows);
    io::write_text_atomic(out / "validation.json", vj.dump(2) + "\n");
  }
  io::write_text_atomic(out / "waves_summary.json", summary.dump(2) + "\n");

  std::cout << "branch points converged: " << branch.points.size() << "/"
            << s_values.size() << "\n";
  if (branch.truncated) {
    write_soft_failure(out, "NoConvergence", branch.failure_reason);
    std::cout << "branch truncated: " << branch.failure_reason << "\n";
    return 2;
  }
  return 0;
}

int cmd_selftest(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  const auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
    if (!ok) ++failures;
  };

  // multiplier suite
  {
    auto g = Grid::make(M_PI, 256);
    double worst = 0.0;
    for (int n = 0; n <= g->size() / 2; ++n) {
      const double k = g->wavenumber(n);
      Field c = Field::from_function(g, [&](double x) { return std::cos(k * x); });
      Field hx = helmholtz_inverse(c);
      for (int j = 0; j < g->size(); ++j)
        worst = std::max(worst, std::abs(hx[j] - c[j] / (1.0 + k * k)));
    }
    report("helmholtz multiplier on all modes (N=256)", worst < 1e-12);

    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(g->size());
    for (double& x : v) x = gauss(rng);
    Field f(g, std::move(v));
    Field lhs = second_deriv_helmholtz(f);
    Field rhs_field = helmholtz_inverse(f) - f;
    report("operator identity d2 o inv = inv - id",
           (lhs - rhs_field).max_abs() < 1e-12);
  }

  // conservation smoke run
  {
    auto g = Grid::make(M_PI, 128);
    Field u = Field::from_function(g, [](double x) { return 0.1 * std::sin(x); });
    Field r = Field::from_function(
        g, [](double x) { return 1.0 + 0.1 * std::cos(x); });
    SimConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 0.25;
    cfg.snapshot_stride = 25;
    const Trajectory traj = simulate(State(u, r), cfg);
    const auto& first = traj.records.front();
    double drift = 0.0;
    for (const auto& rec : traj.records)
      drift = std::max({drift, std::abs(rec.int_u - first.int_u),
                        std::abs(rec.int_rho_bar - first.int_rho_bar)});
    report("mean conservation on a smooth run", drift < 1e-9);
  }

  // dispersion identities
  {
    std::uniform_real_distribution<double> ua(0.0, 10.0);
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
      const double a = ua(rng);
      const double c = bifurcation_point(a);
      ok = ok && std::abs(2.0 * c * c - (a + c)) < 1e-14 &&
           std::abs(linearized_multiplier(1, c, a)) < 1e-12;
    }
    report("bifurcation dispersion identities", ok);

    std::uniform_real_distribution<double> uc(0.1, 3.0);
    WaveProblem p;
    p.n_modes = 16;
    bool fzero = true;
    for (int trial = 0; trial < 100; ++trial) {
      p.A = ua(rng);
      WaveSolution sol;
      sol.a.assign(p.n_modes + 1, 0.0);
      sol.c = uc(rng);
      fzero = fzero && w_norm(residual_f(sol, p)) < 1e-13;
    }
    report("trivial wave residual F(c, 0) = 0", fzero);
  }

  std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace fw::cli
