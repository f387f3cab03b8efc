#pragma once

// Canned scenarios: resonance, anti-resonance, rational-k̄ sweeps and
// localization at an irrational proxy k̄.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kickwig/potential.hpp"
#include "kickwig/state_map.hpp"
#include "kickwig/wigner_map.hpp"

namespace kickwig {

struct Verdict {
  std::string name;
  double measured = 0.0;
  std::optional<double> threshold;  ///< unset for report-only quantities
  std::optional<bool> pass;
  std::string note;
};

struct ScenarioParams {
  std::string potential;
  double K = 0.0;
  double kbar = 0.0;
  double kappa = 0.0;
  int n_kicks = 0;
  std::optional<int> r;
  std::optional<int> s;
  std::size_t grid_points = 0;
};

struct ScenarioResult {
  std::string scenario;
  ScenarioParams params;
  std::vector<EnergyRecord> energies;
  std::map<int, double> distribution;
  std::optional<WignerField> phase_space;
  std::vector<Verdict> verdicts;

  /// No verdict with pass == false.
  bool passed() const noexcept;
};

struct ScenarioOptions {
  std::size_t grid_points = 1024;
  int wigner_max_kicks = 20;
  double sine_tolerance = 1e-8;      ///< relative energy / closure, smooth potentials
  double triangle_tolerance = 1e-6;  ///< same, potentials with corners
  double cross_check_tolerance = 1e-8;
  double recurrence_tolerance = 1e-10;
  double saturation_fraction = 0.1;
  double rate_fraction = 0.05;
  std::optional<int> truncation;  ///< kick spectrum L; adaptive when unset
  LadderOptions ladder;
  WignerOptions wigner;
  unsigned threads = 0;  ///< sweep fan-out, 0 = hardware concurrency

  double tolerance_for(const PotentialSpec& potential) const noexcept {
    return potential.has_corners() ? triangle_tolerance : sine_tolerance;
  }
};

/// Resonance energy ½⟨F²⟩K²N² at k̄ = 4π·m.
double resonance_energy(const PotentialSpec& potential, double K, int n_kicks);

/// Least-squares slope of log E against log N over the last half of the run
/// with N >= 16, skipping E <= 1e-12·max E. NaN when fewer than two points.
double fit_growth_exponent(const std::vector<EnergyRecord>& energies);

/// Localization proxy k̄ = 4π/(4 + 1/(2 + 1/φ)).
double default_localization_kbar();

ScenarioResult run_resonance(const PotentialSpec& potential, double K, int multiplier, int n_kicks,
                             const ScenarioOptions& options = {});

ScenarioResult run_antiresonance(const PotentialSpec& potential, double K, int n_kicks,
                                 const ScenarioOptions& options = {});

/// k̄ = 4π·r/s per ratio; r, s coprime and positive.
std::vector<ScenarioResult> run_ladder_sweep(const PotentialSpec& potential, double K,
                                             const std::vector<std::pair<int, int>>& ratios,
                                             int n_kicks, const ScenarioOptions& options = {});

ScenarioResult run_localization(const PotentialSpec& potential, double K, double kbar, int n_kicks,
                                const ScenarioOptions& options = {});

/// Writes <stem>_energy.csv, <stem>_distribution.csv, <stem>_phase_space.csv and
/// <stem>_manifest.json, stem defaulting to the scenario name. Returns the
/// written paths, manifest last.
std::vector<std::filesystem::path> export_results(const ScenarioResult& result,
                                                  const std::filesystem::path& directory,
                                                  std::optional<std::string> stem = std::nullopt);

}  // namespace kickwig
