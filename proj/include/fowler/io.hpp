#pragma once

// Configuration files, CSV tables and run manifests.
//
// Config: one `key = value` per line, `#` starts a comment, unknown or repeated keys
// are rejected. CSV: `# key: value` metadata lines, one header row, then rows of
// numbers printed with 17 significant digits.

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fowler/ivp.hpp"

namespace fowler {

using FlatConfig = std::map<std::string, std::string>;

/// Parses flat key/value text. Throws ConfigError (field = key, or "line N").
FlatConfig parse_flat_config(const std::string& text);
FlatConfig read_flat_config(const std::filesystem::path& path);

enum class InitialKind { zero, constant, gaussian, bump };

struct InitialData {
  InitialKind kind = InitialKind::bump;
  double amplitude = 1.0;
  double width = 1.0;   ///< Gaussian scale, or half-width of the bump support
  double center = 0.0;
};

/// Samples on the periodic grid. The bump is amplitude * e * exp(-1 / (1 - r^2)) for
/// r = (x - center) / width inside the support and 0 outside (peak = amplitude).
std::vector<double> sample_initial(const InitialData& init, const Grid& grid);

struct SimulationSetup {
  SimulationConfig sim;
  InitialData init;
  std::filesystem::path out_dir = "fowler_out";
};

/// Keys: n, half_length, dt, t_final, eta, dealias, scheme, picard_max_iter, picard_tol,
/// output_every, initial, amplitude, width, center, out.
SimulationSetup simulation_setup(const FlatConfig& cfg);
nlohmann::json to_json(const SimulationSetup& setup);

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const;
};

std::string format_double(double v);
std::string to_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

/// Writes to a temporary file in the same directory and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

struct RunManifest {
  std::string command;
  nlohmann::json config;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
};

inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::json to_json(const RunManifest& m);
void write_manifest(const std::filesystem::path& path, const RunManifest& m);

}  // namespace fowler
