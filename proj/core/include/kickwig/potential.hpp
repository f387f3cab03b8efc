#pragma once

// Kicking potentials V(x): 2π-periodic, odd, and antisymmetric under a
// half-period shift. Amplitude is fixed to one; the kick strength lives in K.

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "kickwig/error.hpp"

namespace kickwig {

enum class PotentialKind { sine, triangle, table };

std::string_view to_string(PotentialKind kind) noexcept;

inline constexpr double kDefaultSymmetryTolerance = 1e-10;

struct SymmetryReport {
  double periodicity = 0.0;  ///< max |V(x+2π) - V(x)|
  double oddness = 0.0;      ///< max |V(x) + V(-x)|
  double half_period = 0.0;  ///< max |V(x+π) + V(x)|
  double tolerance = 0.0;

  bool passed() const noexcept {
    return periodicity < tolerance && oddness < tolerance && half_period < tolerance;
  }
};

class PotentialSpec;

/// Thrown when a table potential breaks the symmetry contract.
class SymmetryError : public Error {
 public:
  SymmetryError(const std::string& what, SymmetryReport report)
      : Error(what), report_(report) {}
  const SymmetryReport& report() const noexcept { return report_; }

 private:
  SymmetryReport report_;
};

/// Immutable description of a kicking potential.
///
/// Table potentials hold samples v_j = V(2πj/N), N a power of two, and are
/// evaluated as their trigonometric interpolant so that spectral derivatives
/// and the Fourier quadratures downstream see the same band-limited function.
class PotentialSpec {
 public:
  static PotentialSpec sine();
  /// Unit triangle wave: rises from -1 at -π/2 to +1 at π/2.
  static PotentialSpec triangle();
  /// Validates the symmetries on the table's own grid; throws SymmetryError.
  static PotentialSpec from_table(std::vector<double> samples,
                                  double tol = kDefaultSymmetryTolerance);
  /// No symmetry check. For diagnostics (validate_symmetries) only.
  static PotentialSpec from_table_unchecked(std::vector<double> samples);

  PotentialKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }
  double amplitude() const noexcept { return 1.0; }
  std::span<const double> samples() const noexcept { return samples_; }
  /// Potentials with derivative discontinuities; their spectra decay
  /// algebraically and need finer quadrature.
  bool has_corners() const noexcept { return kind_ == PotentialKind::triangle; }

  double value(double x) const;
  /// F = -dV/dx. Triangle corners return the mean of the one-sided slopes.
  double force(double x) const;

  /// ⟨F²⟩ computed once at construction.
  double mean_square_force() const noexcept { return mean_square_force_; }
  double max_abs_force() const noexcept { return max_abs_force_; }

  /// V(-π + 2πj/n) for j in [0, n).
  std::vector<double> sample_values(std::size_t n) const;
  /// F(-π + 2πj/n) for j in [0, n).
  std::vector<double> sample_forces(std::size_t n) const;

  friend bool operator==(const PotentialSpec& a, const PotentialSpec& b) {
    return a.kind_ == b.kind_ && a.samples_ == b.samples_;
  }

 private:
  PotentialSpec(PotentialKind kind, std::vector<double> samples);
  std::vector<double> sample_table(std::size_t n, bool derivative) const;

  PotentialKind kind_;
  std::vector<double> samples_;
  // Interpolant modes c_k, k = 0..N/2, of the table (empty otherwise).
  std::vector<std::complex<double>> modes_;
  double mean_square_force_ = 0.0;
  double max_abs_force_ = 0.0;
};

/// ⟨F²⟩ = (1/2π)∫F² dx by the midpoint rule; points >= 16 and even.
double mean_square_force(const PotentialSpec& potential, std::size_t quadrature_points);

/// Evaluates the three symmetries on x_j = -π + 2πj/grid_points (>= 64).
/// Never throws on violation; inspect report.passed().
SymmetryReport validate_symmetries(const PotentialSpec& potential, std::size_t grid_points,
                                   double tol = kDefaultSymmetryTolerance);

/// Symmetry check of raw table samples on their own grid.
SymmetryReport validate_table(std::span<const double> samples,
                              double tol = kDefaultSymmetryTolerance);

/// Reads "x_index value" lines ('#' comments allowed). Indices must cover
/// 0..N-1 exactly once with N a power of two.
std::vector<double> read_table_file(const std::filesystem::path& path);

}  // namespace kickwig
