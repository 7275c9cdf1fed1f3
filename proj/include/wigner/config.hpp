#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "wigner/bvp.hpp"
#include "wigner/grid.hpp"
#include "wigner/oracle.hpp"
#include "wigner/potential.hpp"

namespace wigner {

enum class RunMode { general, symmetric_shortcut, oracle, compare };

const char* to_string(RunMode m);

/// Inflow on one side: a Maxwellian exp(-(v-drift)²/(2T))/sqrt(2πT) restricted to
/// the inflow half-line, zero, or values read from a "v,value" CSV.
struct InflowSpec {
  std::string kind = "maxwellian";  // maxwellian | zero | file
  double temperature = 1.0;
  double drift = 0.0;
  std::string file;
};

struct RunConfig {
  std::string preset;  // base preset the config was built on, if any

  // [potential]
  std::string family = "gaussian";  // zero | gaussian | tabulated
  double amplitude = 1.0;
  double width_a = 1.0;
  double center = 0.0;
  std::string table;
  double y_max = 40.0;

  // [domain], [velocity], [moments]
  double length = 10.0;
  int steps = 200;
  int half_count = 64;
  double spacing = 0.15;
  int moment_order = 8;

  // [boundary]
  InflowSpec left;
  InflowSpec right{"zero", 1.0, 0.0, ""};

  // [run]
  RunMode mode = RunMode::general;
  std::uint64_t seed = 20240601;
  std::string output_dir = "out";
  UpwindScheme oracle_scheme = UpwindScheme::box;
  bool sign_check = false;

  // [tolerances]
  double inflow_tolerance = 1e-6;
  double max_condition = 1e12;
  double bound_slack = 0.05;
  int bound_trials = 100;

  nlohmann::json to_json() const;
  /// INI text that load_config reads back to the same config.
  std::string to_ini() const;
};

std::vector<std::pair<std::string, std::string>> list_presets();

/// Throws ValidationError for an unknown name.
RunConfig preset_config(const std::string& name);

/// Parses an INI config. `[run] preset = name` starts from that preset; every other
/// key overrides it. Relative file paths resolve against the config's directory.
RunConfig load_config(const std::string& path);

/// Throws ValidationError naming the first bad field; returns warnings
/// (velocity-window truncation and the like).
std::vector<std::string> validate_config(const RunConfig& cfg);

PotentialSpec make_potential(const RunConfig& cfg);
VelocityGrid make_velocity_grid(const RunConfig& cfg);
SpaceGrid make_space_grid(const RunConfig& cfg);
BoundaryData make_boundary(const RunConfig& cfg, const VelocityGrid& grid);

/// Whether the inflow is given analytically (no file), so it can be resampled on
/// refined grids.
bool analytic_inflow(const RunConfig& cfg);

}  // namespace wigner
