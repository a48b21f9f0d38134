#include "config.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fw/errors.hpp"
#include "fw/expression.hpp"
#include "fw/io.hpp"

namespace fw::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Toml Toml::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

Toml Toml::parse(const std::string& text, const std::string& origin) {
  Toml t;
  t.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        throw ParseError(origin + ": unterminated table header on line " +
                             std::to_string(line_no),
                         0);
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (section.empty())
        throw ParseError(origin + ": empty table name on line " +
                             std::to_string(line_no),
                         0);
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin + ": expected 'key = value' on line " +
                           std::to_string(line_no),
                       0);
    const std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError(origin + ": malformed assignment on line " +
                           std::to_string(line_no),
                       0);
    // strip trailing comment on unquoted values
    if (value.front() != '"') {
      const auto hash = value.find('#');
      if (hash != std::string::npos) value = trim(value.substr(0, hash));
    }
    t.values_[section.empty() ? key : section + "." + key] = value;
  }
  return t;
}

const std::string& Toml::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    throw Error(origin_ + ": missing required key '" + key + "'");
  return it->second;
}

std::string Toml::get_string(const std::string& key) const {
  const std::string& v = raw(key);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
    return v.substr(1, v.size() - 2);
  return v;
}

double Toml::get_double(const std::string& key) const {
  try {
    std::size_t used = 0;
    const double v = std::stod(raw(key), &used);
    if (used != raw(key).size()) throw std::invalid_argument(raw(key));
    return v;
  } catch (const std::exception&) {
    throw Error(origin_ + ": key '" + key + "' is not a number");
  }
}

int Toml::get_int(const std::string& key) const {
  try {
    std::size_t used = 0;
    const int v = std::stoi(raw(key), &used);
    if (used != raw(key).size()) throw std::invalid_argument(raw(key));
    return v;
  } catch (const std::exception&) {
    throw Error(origin_ + ": key '" + key + "' is not an integer");
  }
}

bool Toml::get_bool(const std::string& key) const {
  const std::string& v = raw(key);
  if (v == "true") return true;
  if (v == "false") return false;
  throw Error(origin_ + ": key '" + key + "' is not a boolean");
}

std::string Toml::get_string_or(const std::string& key,
                                const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}
double Toml::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}
int Toml::get_int_or(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}
bool Toml::get_bool_or(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

namespace {

Field load_init_field(const std::string& text, const GridPtr& grid,
                      const std::filesystem::path& config_dir) {
  if (text.size() > 4 && text.substr(text.size() - 4) == ".csv") {
    std::filesystem::path p(text);
    if (p.is_relative()) p = config_dir / p;
    if (!std::filesystem::exists(p))
      throw IoError("initial-data file does not exist: " + p.string());
    return io::read_field_csv(p, grid);
  }
  return init_expression(text, grid);
}

}  // namespace

RunSetup load_run_setup(const std::filesystem::path& config_path) {
  const Toml toml = Toml::parse_file(config_path);
  RunSetup setup;

  setup.grid_l = toml.get_double("grid.L");
  setup.grid_n = toml.get_int("grid.N");
  setup.grid = Grid::make(setup.grid_l, setup.grid_n);

  setup.init_u_text = toml.get_string("init.u");
  setup.init_rho_bar_text = toml.get_string("init.rho_bar");
  const auto config_dir = config_path.parent_path();
  Field u = load_init_field(setup.init_u_text, setup.grid, config_dir);
  Field rho = load_init_field(setup.init_rho_bar_text, setup.grid, config_dir);
  setup.initial = State(std::move(u), std::move(rho), 0.0);

  setup.sim.dt = toml.get_double("dt");
  setup.sim.t_end = toml.get_double("t_end");
  setup.sim.dealias = toml.get_bool_or("dealias", true);
  setup.sim.blowup_slope_threshold =
      toml.get_double_or("blowup_slope_threshold", 1e4);
  if (toml.has("mollifier.epsilon")) {
    const std::string kind = toml.get_string_or("mollifier.kind", "gaussian");
    MollifierKind mk;
    if (kind == "gaussian")
      mk = MollifierKind::gaussian;
    else if (kind == "sharp_cutoff")
      mk = MollifierKind::sharp_cutoff;
    else
      throw Error("mollifier.kind must be 'gaussian' or 'sharp_cutoff'");
    setup.sim.mollifier = MollifierSpec(toml.get_double("mollifier.epsilon"), mk);
  }

  setup.output_stride = toml.get_int_or("output.stride", 1);
  setup.sim.snapshot_stride = setup.output_stride;
  setup.output_dir = resolve_output_dir(toml.get_string_or("output.dir", "out"));
  setup.seed = static_cast<std::uint64_t>(toml.get_int_or("seed", 12345));
  setup.threads = toml.get_int_or("threads", 1);
  setup.sim.validate();
  return setup;
}

std::filesystem::path resolve_output_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv("FW_OUTPUT_DIR"))
    return std::filesystem::path(root) / p;
  return p;
}

void write_manifest(const std::filesystem::path& output_dir,
                    const std::string& subcommand,
                    const std::map<std::string, std::string>& resolved) {
  nlohmann::json j;
  j["artifact"] = "fwsys";
  j["version"] = "0.1.0";
  j["subcommand"] = subcommand;
  j["config"] = resolved;
  io::write_text_atomic(output_dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace fw::cli
