#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace fw::cli {

struct BreakingOptions {
  std::string criterion = "thm43";
  std::optional<double> eps;
  std::optional<double> k2;
  std::optional<double> c_bound;
  bool run_simulation = false;
  bool normalize_rho = false;
  bool bootstrap_c = false;
};

struct WavesOptions {
  double A = 1.0;
  double s_max = 0.1;
  int s_steps = 10;
  int modes = 32;
  bool validate = false;
  std::string out_dir = "waves";
};

int cmd_simulate(const std::filesystem::path& config_path);
int cmd_characteristics(const std::filesystem::path& traj_dir,
                        const std::filesystem::path& seeds_csv,
                        const std::string& out_dir, int threads);
int cmd_check_breaking(const std::filesystem::path& config_path,
                       const BreakingOptions& opt);
int cmd_waves(const WavesOptions& opt);
int cmd_selftest(std::uint64_t seed);

}  // namespace fw::cli
