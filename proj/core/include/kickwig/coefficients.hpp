#pragma once

// Fourier coefficients of the kick propagator.
//
//   S_l(κ)    = (1/2π) ∫ dξ e^{ilξ} e^{-iκV(ξ)}
//   𝒮_l(κ;x) = (1/2π) ∫ dy e^{ily} e^{-iκ[V(x+y) - V(x-y)]}
//
// Both are computed by uniform-grid quadrature through a DFT. The closed-form
// Bessel reduction for V = sin is a test oracle only.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "kickwig/potential.hpp"

namespace kickwig {

struct SpectrumOptions {
  double tail_budget = 1e-12;           ///< Parseval tail Σ_{|l|>L} S_l²
  double weighted_tail_budget = 1e-12;  ///< Σ_{|l|>L-8} l² S_l² (adaptive rule)
  double imag_budget = 1e-12;
  int soft_cap = 4096;     ///< adaptive: stop chasing the l²-tail here
  int hard_cap = 1 << 20;  ///< adaptive: give up on the Parseval tail here
};

struct KickSpectrum {
  double kappa = 0.0;
  int truncation = 0;
  std::vector<double> coeffs;  ///< S_l at index l + truncation
  double tail_norm = 0.0;
  double weighted_tail = 0.0;
  bool weighted_tail_converged = true;
  double max_imag_residue = 0.0;
  std::size_t quadrature_points = 0;

  /// S_l, zero outside the truncation.
  double operator[](int l) const noexcept {
    return (l < -truncation || l > truncation) ? 0.0 : coeffs[static_cast<std::size_t>(l + truncation)];
  }
};

/// Power-of-two quadrature size used for truncation L.
std::size_t spectrum_quadrature_points(const PotentialSpec& potential, int truncation);

/// L0 = ceil(2κ·max|V'|) + 16.
int initial_truncation(const PotentialSpec& potential, double kappa);

/// Throws TruncationError when tail_norm exceeds options.tail_budget, Error if
/// the imaginary residue exceeds options.imag_budget.
KickSpectrum build_kick_spectrum(const PotentialSpec& potential, double kappa, int truncation,
                                 const SpectrumOptions& options = {});

/// Doubles L from initial_truncation until the l²-weighted tail meets its
/// budget (see SpectrumOptions for the corner-potential fallback).
KickSpectrum build_adaptive_kick_spectrum(const PotentialSpec& potential, double kappa,
                                          const SpectrumOptions& options = {});

struct KernelOptions {
  /// Max row tail Σ_{|l|>L} 𝒮_l(κ;x_j)². Unset: 1e-12, or 1e-8 for
  /// potentials with corners.
  std::optional<double> tail_budget;
  double imag_budget = 1e-12;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// 𝒮_l(κ; x_j) on x_j = -π + 2πj/M, |l| <= truncation.
class WignerKernel {
 public:
  WignerKernel(PotentialSpec potential, double kappa, std::size_t grid_points, int truncation,
               std::vector<double> values, double tail, double max_imag_residue);

  const PotentialSpec& potential() const noexcept { return potential_; }
  double kappa() const noexcept { return kappa_; }
  std::size_t grid_points() const noexcept { return grid_points_; }
  int truncation() const noexcept { return truncation_; }
  /// Largest row tail Σ_{|l|>L} 𝒮_l².
  double tail() const noexcept { return tail_; }
  double max_imag_residue() const noexcept { return max_imag_residue_; }
  double x(std::size_t j) const noexcept;

  /// 𝒮_l(κ; x_j), zero for |l| > truncation.
  double at(std::size_t j, int l) const noexcept {
    return (l < -truncation_ || l > truncation_) ? 0.0 : values_[index(l) + j];
  }
  /// 𝒮_l(κ; x_j) for all j.
  std::span<const double> harmonic(int l) const noexcept {
    return {values_.data() + index(l), grid_points_};
  }

 private:
  std::size_t index(int l) const noexcept {
    return static_cast<std::size_t>(l + truncation_) * grid_points_;
  }

  PotentialSpec potential_;
  double kappa_;
  std::size_t grid_points_;
  int truncation_;
  std::vector<double> values_;  // harmonic-major
  double tail_;
  double max_imag_residue_;
};

/// Requires M a power of two with M >= 8L.
WignerKernel build_wigner_kernel(const PotentialSpec& potential, double kappa,
                                 std::size_t grid_points, int truncation,
                                 const KernelOptions& options = {});

/// L = min(2·L_spectrum, M/8) with L_spectrum from the adaptive spectrum rule.
WignerKernel build_adaptive_wigner_kernel(const PotentialSpec& potential, double kappa,
                                          std::size_t grid_points,
                                          const KernelOptions& options = {});

struct IntegralIdentityReport {
  double even_residual = 0.0;  ///< max_s |(1/2π)∫𝒮_{2s}dx - S_s²|
  double odd_residual = 0.0;   ///< max_s |∫𝒮_{2s+1}dx|
  int max_s = 0;
};

/// Checks ∫𝒮_{2s}dx = 2πS_s² and ∫𝒮_{2s+1}dx = 0 for |s| <= max_s (default:
/// everything both truncations cover).
IntegralIdentityReport verify_integral_identity(const WignerKernel& kernel,
                                                const KickSpectrum& spectrum,
                                                std::optional<int> max_s = std::nullopt);

/// Σ l² S_l²(κ).
double spread_sum(const KickSpectrum& spectrum);

/// |Σ l² S_l²(z) - z²⟨F²⟩| with z = spectrum.kappa.
double verify_spread_identity(const KickSpectrum& spectrum, double mean_square_force);

struct ConvolutionIdentityReport {
  double sum_rule = 0.0;        ///< Σ_r 𝒮_{l-r}(κ)𝒮_r(κ') vs 𝒮_l(κ+κ')
  double antiresonance = 0.0;   ///< Σ_r 𝒮_{l-r}(κ)𝒮_{-r}(κ) vs δ_{l,0}
  double shift_symmetry = 0.0;  ///< 𝒮_r(κ; x + rπ) vs 𝒮_{-r}(κ; x)
};

ConvolutionIdentityReport verify_convolution_identities(const WignerKernel& a,
                                                        const WignerKernel& b);

/// CSV "l,S_l".
void write_spectrum_csv(std::ostream& out, const KickSpectrum& spectrum);
/// CSV "j,x_j,l,value".
void write_kernel_csv(std::ostream& out, const WignerKernel& kernel);

}  // namespace kickwig
