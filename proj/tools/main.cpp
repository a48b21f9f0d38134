#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

#include "commands.hpp"
#include "fw/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "fw: pseudospectral simulator and travelling-wave toolkit for the "
      "two-component Fornberg-Whitham system"};
  app.require_subcommand(1);

  std::string config_path;
  auto* sim = app.add_subcommand("simulate", "time-step an initial-value run");
  sim->add_option("--config", config_path, "run configuration (TOML)")
      ->required();

  std::string traj_dir, seeds_csv, chars_out;
  int threads = 1;
  auto* chars = app.add_subcommand(
      "characteristics", "integrate particle paths through a stored run");
  chars->add_option("--traj", traj_dir, "trajectory directory")->required();
  chars->add_option("--seeds", seeds_csv, "CSV of seed points")->required();
  chars->add_option("--out", chars_out, "output directory (default: --traj)");
  chars->add_option("--threads", threads, "worker threads over seeds");

  std::string brk_config;
  fw::cli::BreakingOptions brk;
  double brk_eps = 0.0, brk_k2 = 0.0, brk_c = 0.0;
  auto* breaking = app.add_subcommand(
      "check-breaking", "evaluate wave-breaking criteria on initial data");
  breaking->add_option("--config", brk_config, "run configuration (TOML)")
      ->required();
  breaking->add_option("--criterion", brk.criterion, "thm42 or thm43");
  auto* eps_opt = breaking->add_option("--eps", brk_eps, "margin parameter");
  auto* k2_opt = breaking->add_option("--k2", brk_k2, "a-priori sup bound K2");
  auto* c_opt = breaking->add_option("--c", brk_c, "a-priori slope bound C");
  breaking->add_flag("--simulate", brk.run_simulation,
                     "also run the simulation and verify the prediction");
  breaking->add_flag("--normalize-rho", brk.normalize_rho,
                     "rescale rho_bar0 to unit L1 mass (changes the problem)");
  breaking->add_flag("--bootstrap-c", brk.bootstrap_c,
                     "measure C(T) from a trial simulation");

  fw::cli::WavesOptions waves;
  auto* wv = app.add_subcommand("waves",
                                "continue the periodic travelling-wave branch");
  wv->add_option("--A", waves.A, "integration constant A >= 0")->required();
  wv->add_option("--s-max", waves.s_max, "largest amplitude")->required();
  wv->add_option("--s-steps", waves.s_steps, "number of branch points")
      ->required();
  wv->add_option("--modes", waves.modes, "cosine modes (default 32)");
  wv->add_flag("--validate", waves.validate,
               "time-step each wave for one period");
  wv->add_option("--out", waves.out_dir, "output directory");

  std::uint64_t seed = 12345;
  auto* self = app.add_subcommand("selftest", "run the built-in check suites");
  self->add_option("--seed", seed, "seed for randomized checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return fw::cli::cmd_simulate(config_path);
    if (chars->parsed())
      return fw::cli::cmd_characteristics(traj_dir, seeds_csv, chars_out,
                                          threads);
    if (breaking->parsed()) {
      if (*eps_opt) brk.eps = brk_eps;
      if (*k2_opt) brk.k2 = brk_k2;
      if (*c_opt) brk.c_bound = brk_c;
      return fw::cli::cmd_check_breaking(brk_config, brk);
    }
    if (wv->parsed()) return fw::cli::cmd_waves(waves);
    if (self->parsed()) return fw::cli::cmd_selftest(seed);
  } catch (const fw::NotApplicableError& e) {
    std::cerr << "not applicable: " << e.what() << "\n";
    return 2;
  } catch (const fw::NoConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << "\n";
    return 2;
  } catch (const fw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
