#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "fw/dynamics.hpp"

namespace fw::cli {

// Flat TOML subset: [section] / [a.b] tables, `key = value` pairs with
// strings, numbers and booleans, and # comments. Keys are exposed fully
// qualified ("grid.N"). Covers the documented run-config surface.
class Toml {
 public:
  static Toml parse_file(const std::filesystem::path& path);
  static Toml parse(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double_or(const std::string& key, double fallback) const;
  int get_int_or(const std::string& key, int fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;  // raw token per key
  std::string origin_;
  const std::string& raw(const std::string& key) const;
};

// A fully resolved simulation run: grid, initial data and stepping controls.
struct RunSetup {
  GridPtr grid;
  State initial;
  SimConfig sim;
  std::string init_u_text;
  std::string init_rho_bar_text;
  double grid_l = 0.0;
  int grid_n = 0;
  std::filesystem::path output_dir;
  int output_stride = 1;
  std::uint64_t seed = 12345;
  int threads = 1;
};

RunSetup load_run_setup(const std::filesystem::path& config_path);

// output.dir resolved against FW_OUTPUT_DIR when relative.
std::filesystem::path resolve_output_dir(const std::string& dir);

// manifest.json: artifact version plus the full resolved configuration.
void write_manifest(const std::filesystem::path& output_dir,
                    const std::string& subcommand,
                    const std::map<std::string, std::string>& resolved);

}  // namespace fw::cli
