#pragma once

// Momentum-ladder representation |ψ⟩ = Σ c_l |p = l·k̄⟩ and the Floquet map
// Û = Û_kick Û_free.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "kickwig/coefficients.hpp"

namespace kickwig {

struct EnergyRecord {
  int kick = 0;
  double energy = 0.0;
  double tail_norm = 0.0;

  friend bool operator==(const EnergyRecord&, const EnergyRecord&) = default;
};

struct LadderOptions {
  int max_truncation = 1 << 20;
  /// Outside weight below which the buffer may stop growing.
  double drop_tolerance = 1e-24;
  /// Accumulated dropped weight that triggers TruncationError.
  double tail_budget = 1e-8;
  std::size_t direct_crossover = 4096;
  /// Keep the initial half-width; everything pushed past it is dropped.
  bool fixed_truncation = false;
};

/// Value-semantic ladder state. Free evolution is deferred: a pending period
/// count is folded into the phases only when amplitudes are read or a kick is
/// applied, so stored weights are untouched by free_step.
class LadderState {
 public:
  /// |p = 0⟩ on a ladder of half-width truncation >= 1.
  LadderState(int truncation, double kbar);

  int truncation() const noexcept { return truncation_; }
  double kbar() const noexcept { return kbar_; }
  int kicks_applied() const noexcept { return kicks_; }
  /// Weight dropped at the ladder edge so far.
  double tail_norm() const noexcept { return tail_norm_; }
  std::uint64_t pending_free_periods() const noexcept { return pending_; }

  /// c_l for l in [-L, L] (index l + L) with pending free phases applied.
  std::vector<std::complex<double>> amplitudes() const;
  /// c_l, zero outside the buffer.
  std::complex<double> amplitude(int l) const;
  /// |c_l|².
  double weight(int l) const noexcept;
  double norm() const noexcept;

 private:
  friend LadderState free_step(LadderState state);
  friend LadderState kick_step(LadderState state, const KickSpectrum& spectrum,
                               const LadderOptions& options);
  void settle();

  int truncation_;
  double kbar_;
  int kicks_ = 0;
  double tail_norm_ = 0.0;
  std::uint64_t pending_ = 0;
  std::vector<std::complex<double>> c_;
};

/// |p = 0⟩ on a ladder of half-width truncation >= 1.
LadderState init_ladder(int truncation, double kbar);

/// c_l ← e^{-i l² k̄/2} c_l.
LadderState free_step(LadderState state);

/// c'_m = Σ_l S_l c_{m+l}. Throws TruncationError once the dropped weight
/// exceeds options.tail_budget.
LadderState kick_step(LadderState state, const KickSpectrum& spectrum,
                      const LadderOptions& options = {});

struct Trajectory {
  LadderState state;
  std::vector<EnergyRecord> energies;  ///< after each kick
};

/// n_kicks periods of kick ∘ free.
Trajectory floquet_evolve(LadderState state, const KickSpectrum& spectrum, int n_kicks,
                          const LadderOptions& options = {});

/// Nonzero weights |c_l|².
std::map<int, double> momentum_distribution(const LadderState& state);

/// E = ½ Σ (l k̄)² |c_l|².
double mean_energy(const LadderState& state);

/// ⟨a|b⟩.
std::complex<double> overlap(const LadderState& a, const LadderState& b);

/// CSV "N,E,tail_norm".
void write_trajectory_csv(std::ostream& out, const std::vector<EnergyRecord>& energies);
/// CSV "l,p,weight" over nonzero weights.
void write_distribution_csv(std::ostream& out, const std::map<int, double>& distribution,
                            double kbar);

}  // namespace kickwig
