#pragma once

// JSON run configuration and the physical-to-scaled parameter conversion.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kickwig/error.hpp"
#include "kickwig/experiments.hpp"
#include "kickwig/potential.hpp"

namespace kickwig {

/// Invalid configuration; `pointer` is the JSON pointer of the offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& pointer, const std::string& message)
      : Error(pointer.empty() ? message : pointer + ": " + message), pointer_(pointer) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

enum class Scenario { resonance, antiresonance, sweep, localization, dump_coefficients };

std::string_view to_string(Scenario scenario) noexcept;

struct ScaledParameters {
  double K = 0.0;
  std::optional<double> kbar;
  friend bool operator==(const ScaledParameters&, const ScaledParameters&) = default;
};

struct PhysicalParameters {
  double mass = 0.0;
  double period = 0.0;
  double wavenumber = 0.0;
  double hbar = 0.0;
  double kick_strength = 0.0;  ///< K̃
  friend bool operator==(const PhysicalParameters&, const PhysicalParameters&) = default;
};

struct PotentialConfig {
  PotentialKind kind = PotentialKind::sine;
  std::optional<std::filesystem::path> table;
  friend bool operator==(const PotentialConfig&, const PotentialConfig&) = default;
};

struct Tolerances {
  double sine = 1e-8;
  double triangle = 1e-6;
  double cross_check = 1e-8;
  double recurrence = 1e-10;
  double saturation = 0.1;
  double rate = 0.05;
  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct SimConfig {
  Scenario scenario = Scenario::resonance;
  PotentialConfig potential;
  std::variant<ScaledParameters, PhysicalParameters> parameters;
  int n_kicks = 10;
  std::vector<std::pair<int, int>> ratios;  ///< sweep only
  std::optional<int> truncation;
  std::size_t grid_points = 1024;
  int wigner_max_kicks = 20;
  Tolerances tolerances;
  std::optional<std::filesystem::path> output_dir;
  std::uint64_t seed = 0;  ///< reserved; all maps are deterministic

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// K = K̃k₀²T/M, k̄ = ħk₀²T/M. Throws ConfigError naming a non-positive field.
std::pair<double, double> scale_physical_parameters(double mass, double period, double wavenumber,
                                                    double hbar, double kick_strength);

/// Parses and validates a document; table paths resolve against base_dir.
SimConfig parse_config_text(std::string_view text,
                            const std::filesystem::path& base_dir = std::filesystem::current_path());
SimConfig parse_config(const std::filesystem::path& path);

/// Canonical JSON form; parse_config_text(to_json(c)) == c.
std::string to_json(const SimConfig& config);

struct ResolvedParameters {
  double K = 0.0;
  double kbar = 0.0;
  int multiplier = 0;  ///< resonance: k̄ = 4π·multiplier
  double kappa() const noexcept { return K / kbar; }
};

/// K and k̄ for the configured scenario (k̄ defaults and resonance snapping).
/// Sweeps have no single k̄ and report kbar = 0.
ResolvedParameters resolve_parameters(const SimConfig& config);

PotentialSpec load_potential(const SimConfig& config);

ScenarioOptions scenario_options(const SimConfig& config);

}  // namespace kickwig
