#pragma once

// Wigner function of a ladder state as a stack of momentum slices
// W(x,p) = Σ_m w_m(x) δ(p - m·k̄/2), sampled on x_j = -π + 2πj/M.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "kickwig/coefficients.hpp"
#include "kickwig/state_map.hpp"

namespace kickwig {

struct WignerOptions {
  int max_radius = 1 << 16;
  /// Purity weight 2π∫w_m² dx below which the stack may stop growing.
  double drop_tolerance = 1e-24;
  /// Accumulated dropped purity weight that triggers TruncationError.
  double leak_budget = 1e-8;
};

class WignerField {
 public:
  /// Zero field, slices m in [-radius, radius].
  WignerField(std::size_t grid_points, int radius, double kbar);

  std::size_t grid_points() const noexcept { return m_; }
  int radius() const noexcept { return radius_; }
  double kbar() const noexcept { return kbar_; }
  int kicks_applied() const noexcept { return kicks_; }
  /// Purity weight dropped at the stack edge so far.
  double leak() const noexcept { return leak_; }
  double x(std::size_t j) const noexcept;
  double momentum(int m) const noexcept { return 0.5 * m * kbar_; }

  /// w_m(x_j) for all j; m must lie within the radius.
  std::span<double> slice(int m) noexcept { return {w_.data() + index(m), m_}; }
  std::span<const double> slice(int m) const noexcept { return {w_.data() + index(m), m_}; }
  /// w_m(x_j), zero outside the radius.
  double at(int m, std::size_t j) const noexcept {
    return (m < -radius_ || m > radius_) ? 0.0 : w_[index(m) + j];
  }

 private:
  friend WignerField kick_displace(WignerField field, const WignerKernel& kernel,
                                   const WignerOptions& options);
  friend WignerField wigner_floquet_step(WignerField field, const WignerKernel& kernel,
                                         const WignerOptions& options);
  friend WignerField wigner_from_state(const LadderState& state, std::size_t grid_points,
                                       std::optional<int> max_radius);
  std::size_t index(int m) const noexcept {
    return static_cast<std::size_t>(m + radius_) * m_;
  }

  std::size_t m_;
  int radius_;
  double kbar_;
  int kicks_ = 0;
  double leak_ = 0.0;
  std::vector<double> w_;  // slice-major
};

/// W₀ = δ(p)/(2π): slice 0 uniform at 1/(2π).
WignerField init_wigner(std::size_t grid_points, int radius, double kbar);

/// w_m(x) ← w_m(x - p_m t), by a spectral phase ramp.
WignerField free_shear(WignerField field, double t = 1.0);

/// w'_m(x) = Σ_l 𝒮_l(κ;x) w_{m+l}(x). Grows the stack on demand and throws
/// TruncationError once the leak exceeds options.leak_budget.
WignerField kick_displace(WignerField field, const WignerKernel& kernel,
                          const WignerOptions& options = {});

/// free_shear then kick_displace; counts one kick.
WignerField wigner_floquet_step(WignerField field, const WignerKernel& kernel,
                                const WignerOptions& options = {});

struct PhaseSpaceMarginals {
  int radius = 0;
  std::vector<double> momentum_weights;  ///< (2π/M)Σ_j w_m(x_j), index m + radius
  std::vector<double> position_density;  ///< Σ_m w_m(x_j)
  double total = 0.0;
  double energy = 0.0;

  double weight(int m) const noexcept {
    return (m < -radius || m > radius) ? 0.0 : momentum_weights[static_cast<std::size_t>(m + radius)];
  }
};

PhaseSpaceMarginals marginals_and_energy(const WignerField& field);

/// w_m(x) = (1/2π) Σ_{l+l'=m} c_l c*_{l'} e^{i(l-l')x} for |m| <= 2L, or
/// |m| <= max_radius when given.
WignerField wigner_from_state(const LadderState& state, std::size_t grid_points,
                              std::optional<int> max_radius = std::nullopt);

/// max |field - wigner_from_state(state)| over all slices and grid points.
/// Slices past the field radius are bounded by (1/2π)Σ_l |c_l||c_{m-l}|
/// instead of being synthesized. Throws Error on mismatched k̄ or kick counts.
double compare_with_state(const WignerField& field, const LadderState& state);

/// max |a - b|, slices outside either radius read as zero.
double max_deviation(const WignerField& a, const WignerField& b);

/// CSV "m,p_m,j,x_j,weight", skipping identically zero slices.
void write_phase_space_csv(std::ostream& out, const WignerField& field);
/// Dense matrix: one row per slice m = -radius..radius, M columns.
void write_heatmap(std::ostream& out, const WignerField& field);

}  // namespace kickwig
