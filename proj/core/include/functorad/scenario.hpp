#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "functorad/dynamics.hpp"

namespace functorad::scenario {

enum class Preset { GravityCircular, GravityElliptic, TwoBody, LinearField, Clock, Custom };

const char* preset_name(Preset p);
/// Throws ParseError (field "preset") for unknown names.
Preset preset_from_name(std::string_view name);

struct PresetInfo {
  Preset preset;
  std::string description;
};
const std::vector<PresetInfo>& presets();

/// A validated scenario with every default filled in.
struct ScenarioConfig {
  std::string name;
  Preset preset = Preset::Custom;
  Method method = Method::Rk4;
  /// Numeric parameters: G, m1, m2, dt, t_end, seed, min_radius, grid,
  /// max_iter, tol, clock_half_width (only those relevant to the preset).
  std::map<std::string, double> params;
  std::optional<std::string> custom_field;
  std::vector<double> initial_state;

  double param(const std::string& key) const;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses the INI-style scenario format (docs/config.md), fills defaults
/// and validates. Throws ParseError naming the line and field.
ScenarioConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(print_config(c)) == c.
std::string print_config(const ScenarioConfig& cfg);

struct Summary {
  std::size_t steps = 0;
  double final_time = 0.0;
  Vector final_state;
  double max_residual = 0.0;
  std::optional<double> energy_drift;            // max |E - E0| / |E0|
  std::optional<double> angular_momentum_drift;  // max |L - L0|
  std::optional<double> momentum_drift;          // max |P - P0|, two-body only
  std::optional<double> return_distance;         // |r_final - r_0|, one-body gravity
  std::optional<double> legendre_relatedness;    // Lagrangian/Hamiltonian residual
  std::size_t picard_iterations = 0;
};

/// Trajectory plus per-step diagnostics. Diagnostics that do not apply to
/// a preset (energy for a clock) are NaN.
struct RunArtifact {
  ScenarioConfig config;
  Trajectory trajectory;
  std::vector<double> energy;
  std::vector<double> lz;
  std::vector<double> residual;
  Summary summary;
};

/// Integrates the scenario. Deterministic in the config. Propagates
/// SingularityError and NonContractionError.
RunArtifact run_scenario(const ScenarioConfig& cfg);

/// CSV text: header t,state_0..state_{n-1},energy,Lz,residual then one row
/// per stored state, every float with 17 significant digits.
std::string csv_text(const RunArtifact& ra);

/// Writes csv_text to path; IoError on failure.
void emit_csv(const RunArtifact& ra, const std::string& path);

/// Human-readable key: value summary.
std::string summary_text(const RunArtifact& ra);

}  // namespace functorad::scenario
