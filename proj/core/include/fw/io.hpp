#pragma once

#include <filesystem>
#include <string>

#include "fw/dynamics.hpp"

namespace fw::io {

// 17 significant digits; round-trips doubles losslessly.
std::string format_double(double v);

// Write-temp-then-rename so readers never observe partial files.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

// Single field, header "x,value".
void write_field_csv(const std::filesystem::path& path, const Field& f);
Field read_field_csv(const std::filesystem::path& path, const GridPtr& grid);

// State snapshot, header "x,u,rho_bar".
void write_state_csv(const std::filesystem::path& path, const State& s);
State read_state_csv(const std::filesystem::path& path, const GridPtr& grid,
                     double t);

// Diagnostics table, one row per accepted step.
void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRecord>& records);

// Trajectory directory: summary.json (status, grid, snapshot index),
// diagnostics.csv and one snapshot CSV per stored state.
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj);
Trajectory read_trajectory(const std::filesystem::path& dir);

}  // namespace fw::io
