#include "fowler/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fowler/errors.hpp"

namespace fowler {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError(key, "expected a number, got '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError(key, "expected an integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

FlatConfig parse_flat_config(const std::string& text) {
  FlatConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
    if (value.empty()) throw ConfigError(key, "empty value");
    if (!cfg.emplace(key, value).second) throw ConfigError(key, "given more than once");
  }
  return cfg;
}

FlatConfig read_flat_config(const std::filesystem::path& path) { return parse_flat_config(read_file(path)); }

std::vector<double> sample_initial(const InitialData& init, const Grid& grid) {
  std::vector<double> u(grid.n(), 0.0);
  for (int j = 0; j < grid.n(); ++j) {
    const double r = (grid.x(j) - init.center) / init.width;
    switch (init.kind) {
      case InitialKind::zero: break;
      case InitialKind::constant: u[j] = init.amplitude; break;
      case InitialKind::gaussian: u[j] = init.amplitude * std::exp(-r * r); break;
      case InitialKind::bump:
        if (std::abs(r) < 1.0) u[j] = init.amplitude * std::exp(1.0 - 1.0 / (1.0 - r * r));
        break;
    }
  }
  return u;
}

SimulationSetup simulation_setup(const FlatConfig& cfg) {
  static const std::set<std::string> known = {"n", "half_length", "dt", "t_final", "eta", "dealias", "scheme",
                                              "picard_max_iter", "picard_tol", "output_every", "initial",
                                              "amplitude", "width", "center", "out"};
  for (const auto& [key, value] : cfg)
    if (!known.count(key)) throw ConfigError(key, "unknown key");
  SimulationSetup s;
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = cfg.find(key);
    return it == cfg.end() ? nullptr : &it->second;
  };
  int n = s.sim.grid.n();
  double L = s.sim.grid.half_length();
  if (auto v = get("n")) n = parse_int("n", *v);
  if (auto v = get("half_length")) L = parse_number("half_length", *v);
  if (n < 16 || n % 2 != 0) throw ConfigError("n", "must be even and at least 16");
  if (!(L > 0.0)) throw ConfigError("half_length", "must be positive");
  s.sim.grid = Grid(n, L);
  if (auto v = get("dt")) s.sim.dt = parse_number("dt", *v);
  if (auto v = get("t_final")) s.sim.t_final = parse_number("t_final", *v);
  if (auto v = get("eta")) s.sim.eta = parse_number("eta", *v);
  if (auto v = get("dealias")) s.sim.dealias = parse_bool("dealias", *v);
  if (auto v = get("scheme")) {
    if (*v == "etd_rk") s.sim.scheme = Scheme::etd_rk;
    else if (*v == "picard") s.sim.scheme = Scheme::picard;
    else throw ConfigError("scheme", "expected etd_rk or picard");
  }
  if (auto v = get("picard_max_iter")) s.sim.picard_max_iter = parse_int("picard_max_iter", *v);
  if (auto v = get("picard_tol")) s.sim.picard_tol = parse_number("picard_tol", *v);
  if (auto v = get("output_every")) s.sim.output_every = parse_int("output_every", *v);
  s.sim.validate();
  if (auto v = get("initial")) {
    if (*v == "zero") s.init.kind = InitialKind::zero;
    else if (*v == "constant") s.init.kind = InitialKind::constant;
    else if (*v == "gaussian") s.init.kind = InitialKind::gaussian;
    else if (*v == "bump") s.init.kind = InitialKind::bump;
    else throw ConfigError("initial", "expected zero, constant, gaussian or bump");
  }
  if (auto v = get("amplitude")) s.init.amplitude = parse_number("amplitude", *v);
  if (auto v = get("width")) s.init.width = parse_number("width", *v);
  if (auto v = get("center")) s.init.center = parse_number("center", *v);
  if (!(s.init.width > 0.0)) throw ConfigError("width", "must be positive");
  if (!std::isfinite(s.init.amplitude)) throw ConfigError("amplitude", "must be finite");
  if (auto v = get("out")) s.out_dir = *v;
  return s;
}

nlohmann::json to_json(const SimulationSetup& s) {
  static const char* kinds[] = {"zero", "constant", "gaussian", "bump"};
  return {{"n", s.sim.grid.n()},
          {"half_length", s.sim.grid.half_length()},
          {"dt", s.sim.dt},
          {"t_final", s.sim.t_final},
          {"eta", s.sim.eta},
          {"dealias", s.sim.dealias},
          {"scheme", s.sim.scheme == Scheme::etd_rk ? "etd_rk" : "picard"},
          {"picard_max_iter", s.sim.picard_max_iter},
          {"picard_tol", s.sim.picard_tol},
          {"output_every", s.sim.output_every},
          {"initial", kinds[static_cast<int>(s.init.kind)]},
          {"amplitude", s.init.amplitude},
          {"width", s.init.width},
          {"center", s.init.center},
          {"out", s.out_dir.string()}};
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ShapeError("csv: no column '" + name + "'");
  const auto k = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[k]);
  return out;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string to_csv(const CsvTable& t) {
  std::string out;
  for (const auto& [k, v] : t.meta) out += "# " + k + ": " + v + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) throw ShapeError("csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += format_double(row[i]);
    }
    out += "\n";
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      const auto colon = body.find(':');
      if (colon == std::string::npos) t.meta.emplace_back(body, "");
      else t.meta.emplace_back(trim(body.substr(0, colon)), trim(body.substr(colon + 1)));
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(trim(cell));
    if (!header) {
      t.columns = cells;
      header = true;
      continue;
    }
    if (cells.size() != t.columns.size())
      throw ConfigError("line " + std::to_string(lineno), "row width does not match header");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_number("line " + std::to_string(lineno), c));
    t.rows.push_back(std::move(row));
  }
  if (!header) throw ConfigError("csv", "missing header row");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FowlerError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw FowlerError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) { write_atomic(path, to_csv(table)); }

nlohmann::json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"config", m.config},
          {"tool_version", kToolVersion},
          {"wall_seconds", m.wall_seconds},
          {"outputs", m.outputs}};
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  write_atomic(path, to_json(m).dump(2) + "\n");
}

}  // namespace fowler
