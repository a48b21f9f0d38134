#include "fw/io.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fw/errors.hpp"

namespace fw::io {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("malformed number '" + s + "' in " + context);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%06zu.csv", index);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_field_csv(const std::filesystem::path& path, const Field& f) {
  std::string body = "x,value\n";
  for (int j = 0; j < f.size(); ++j) {
    body += format_double(f.grid().x(j));
    body += ',';
    body += format_double(f[j]);
    body += '\n';
  }
  write_text_atomic(path, body);
}

Field read_field_csv(const std::filesystem::path& path, const GridPtr& grid) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,value", 0) != 0)
    throw IoError("expected 'x,value' header in " + path.string());
  std::vector<double> values;
  values.reserve(grid->size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2)
      throw IoError("expected two columns in " + path.string());
    const double x = parse_double(cells[0], path.string());
    if (row >= static_cast<std::size_t>(grid->size()) ||
        std::abs(x - grid->x(static_cast<int>(row))) > 1e-9)
      throw IoError("collocation points in " + path.string() +
                    " do not match the grid");
    values.push_back(parse_double(cells[1], path.string()));
    ++row;
  }
  if (static_cast<int>(values.size()) != grid->size())
    throw IoError("row count mismatch in " + path.string());
  return Field(grid, std::move(values));
}

void write_state_csv(const std::filesystem::path& path, const State& s) {
  std::string body = "x,u,rho_bar\n";
  for (int j = 0; j < s.u.size(); ++j) {
    body += format_double(s.grid().x(j));
    body += ',';
    body += format_double(s.u[j]);
    body += ',';
    body += format_double(s.rho_bar[j]);
    body += '\n';
  }
  write_text_atomic(path, body);
}

State read_state_csv(const std::filesystem::path& path, const GridPtr& grid,
                     double t) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,u,rho_bar", 0) != 0)
    throw IoError("expected 'x,u,rho_bar' header in " + path.string());
  std::vector<double> u, rho;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 3)
      throw IoError("expected three columns in " + path.string());
    const double x = parse_double(cells[0], path.string());
    if (row >= static_cast<std::size_t>(grid->size()) ||
        std::abs(x - grid->x(static_cast<int>(row))) > 1e-9)
      throw IoError("collocation points in " + path.string() +
                    " do not match the grid");
    u.push_back(parse_double(cells[1], path.string()));
    rho.push_back(parse_double(cells[2], path.string()));
    ++row;
  }
  if (static_cast<int>(u.size()) != grid->size())
    throw IoError("row count mismatch in " + path.string());
  return State(Field(grid, std::move(u)), Field(grid, std::move(rho)), t);
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRecord>& records) {
  std::string body =
      "t,min_slope,max_slope,int_u,int_rho_bar,l2_u,energy_s2\n";
  for (const DiagnosticsRecord& r : records) {
    body += format_double(r.t);
    body += ',';
    body += format_double(r.min_slope);
    body += ',';
    body += format_double(r.max_slope);
    body += ',';
    body += format_double(r.int_u);
    body += ',';
    body += format_double(r.int_rho_bar);
    body += ',';
    body += format_double(r.l2_u);
    body += ',';
    body += format_double(r.energy_s2);
    body += '\n';
  }
  write_text_atomic(path, body);
}

void write_trajectory(const std::filesystem::path& dir,
                      const Trajectory& traj) {
  std::filesystem::create_directories(dir);

  json summary;
  summary["status"] = status_name(traj.status);
  if (traj.blowup_time) summary["blowup_time"] = *traj.blowup_time;
  summary["steps_taken"] = traj.steps_taken;
  summary["dt_final"] = traj.dt_final;
  const Grid& g = traj.initial_state().grid();
  summary["grid"] = {{"L", g.half_period()}, {"N", g.size()}};
  summary["config"] = {
      {"dt", traj.config.dt},
      {"t_end", traj.config.t_end},
      {"dealias", traj.config.dealias},
      {"blowup_slope_threshold", traj.config.blowup_slope_threshold},
      {"snapshot_stride", traj.config.snapshot_stride}};
  if (traj.config.mollifier) {
    summary["config"]["mollifier"] = {
        {"epsilon", traj.config.mollifier->epsilon},
        {"kind", traj.config.mollifier->kind == MollifierKind::gaussian
                     ? "gaussian"
                     : "sharp_cutoff"}};
  }
  json snaps = json::array();
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const std::string name = snapshot_name(i);
    write_state_csv(dir / name, traj.snapshots[i].state);
    snaps.push_back({{"t", traj.snapshots[i].state.t}, {"file", name}});
  }
  summary["snapshots"] = std::move(snaps);

  write_diagnostics_csv(dir / "diagnostics.csv", traj.records);
  write_text_atomic(dir / "summary.json", summary.dump(2) + "\n");
}

Trajectory read_trajectory(const std::filesystem::path& dir) {
  const json summary = json::parse(read_file(dir / "summary.json"));

  Trajectory traj;
  const std::string status = summary.at("status").get<std::string>();
  if (status == "completed")
    traj.status = RunStatus::completed;
  else if (status == "blow_up_detected")
    traj.status = RunStatus::blow_up_detected;
  else if (status == "step_rejected")
    traj.status = RunStatus::step_rejected;
  else
    throw IoError("unknown run status '" + status + "'");
  if (summary.contains("blowup_time"))
    traj.blowup_time = summary["blowup_time"].get<double>();
  traj.steps_taken = summary.value("steps_taken", 0);
  traj.dt_final = summary.value("dt_final", 0.0);

  const auto& cfg = summary.at("config");
  traj.config.dt = cfg.at("dt").get<double>();
  traj.config.t_end = cfg.at("t_end").get<double>();
  traj.config.dealias = cfg.value("dealias", true);
  traj.config.blowup_slope_threshold =
      cfg.value("blowup_slope_threshold", 1e4);
  traj.config.snapshot_stride = cfg.value("snapshot_stride", 1);
  if (cfg.contains("mollifier")) {
    const auto& m = cfg["mollifier"];
    traj.config.mollifier = MollifierSpec(
        m.at("epsilon").get<double>(),
        m.at("kind").get<std::string>() == "sharp_cutoff"
            ? MollifierKind::sharp_cutoff
            : MollifierKind::gaussian);
  }

  const auto& grid_info = summary.at("grid");
  GridPtr grid = Grid::make(grid_info.at("L").get<double>(),
                            grid_info.at("N").get<int>());

  for (const auto& entry : summary.at("snapshots")) {
    const double t = entry.at("t").get<double>();
    const std::string file = entry.at("file").get<std::string>();
    traj.snapshots.push_back(
        Snapshot{read_state_csv(dir / file, grid, t), std::nullopt});
  }
  if (traj.snapshots.empty()) throw IoError("trajectory has no snapshots");

  // Rebuild the diagnostics rows this module wrote (the CSV carries the
  // documented columns; the remaining record fields are derivable).
  std::istringstream in(read_file(dir / "diagnostics.csv"));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 7) throw IoError("bad diagnostics row");
    DiagnosticsRecord r;
    r.t = parse_double(cells[0], "diagnostics.csv");
    r.min_slope = parse_double(cells[1], "diagnostics.csv");
    r.max_slope = parse_double(cells[2], "diagnostics.csv");
    r.int_u = parse_double(cells[3], "diagnostics.csv");
    r.int_rho_bar = parse_double(cells[4], "diagnostics.csv");
    r.l2_u = parse_double(cells[5], "diagnostics.csv");
    r.energy_s2 = parse_double(cells[6], "diagnostics.csv");
    traj.records.push_back(r);
  }
  return traj;
}

}  // namespace fw::io
