#include "kickwig/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <limits>
#include <thread>

#include "kickwig/csv.hpp"
#include "kickwig/fft.hpp"

namespace kickwig {

namespace {

using fft::cplx;
constexpr double pi = std::numbers::pi;

struct RawSpectrum {
  std::vector<cplx> modes;  // DFT bins, index l mod Q
  std::size_t q = 0;
  cplx at(long l) const {
    const long qi = static_cast<long>(q);
    return modes[static_cast<std::size_t>(((l % qi) + qi) % qi)];
  }
};

RawSpectrum raw_spectrum(const PotentialSpec& potential, double kappa, std::size_t q) {
  const auto v = potential.sample_values(q);
  fft::ComplexPlan plan(q, fft::ComplexPlan::Sign::backward);
  auto d = plan.data();
  for (std::size_t j = 0; j < q; ++j) d[j] = std::polar(1.0, -kappa * v[j]);
  plan.execute();
  RawSpectrum raw{{d.begin(), d.end()}, q};
  // Grid starts at -π: S_l = (-1)^l/Q · Σ_j f_j e^{2πi jl/Q}.
  const double scale = 1.0 / static_cast<double>(q);
  for (std::size_t k = 0; k < q; ++k) raw.modes[k] *= (k % 2 == 0 ? scale : -scale);
  return raw;
}

KickSpectrum assemble(const RawSpectrum& raw, double kappa, int truncation) {
  KickSpectrum s;
  s.kappa = kappa;
  s.truncation = truncation;
  s.quadrature_points = raw.q;
  s.coeffs.resize(static_cast<std::size_t>(2 * truncation + 1));
  for (int l = -truncation; l <= truncation; ++l) {
    const cplx c = raw.at(l);
    s.max_imag_residue = std::max(s.max_imag_residue, std::abs(c.imag()));
    s.coeffs[static_cast<std::size_t>(l + truncation)] = c.real();
  }
  const long half = static_cast<long>(raw.q / 2);
  double tail = 0.0, weighted = 0.0;
  for (long l = -half + 1; l <= half; ++l) {
    const double w = std::norm(raw.at(l));
    const long a = std::abs(l);
    if (a > truncation) tail += w;
    if (a > truncation - 8) weighted += static_cast<double>(l) * static_cast<double>(l) * w;
  }
  s.tail_norm = tail;
  s.weighted_tail = weighted;
  return s;
}

void check_imag(double residue, double budget, const char* what) {
  if (residue > budget) {
    std::ostringstream msg;
    msg << what << ": imaginary residue " << residue << " exceeds " << budget
        << " (potential symmetry broken?)";
    throw Error(msg.str());
  }
}

}  // namespace

std::size_t spectrum_quadrature_points(const PotentialSpec& potential, int truncation) {
  std::size_t q = fft::next_pow2(std::max<std::size_t>(256, 8 * static_cast<std::size_t>(truncation)));
  if (potential.has_corners()) q *= 4;
  return q;
}

int initial_truncation(const PotentialSpec& potential, double kappa) {
  return static_cast<int>(std::ceil(2.0 * kappa * potential.max_abs_force())) + 16;
}

KickSpectrum build_kick_spectrum(const PotentialSpec& potential, double kappa, int truncation,
                                 const SpectrumOptions& options) {
  if (kappa < 0) throw std::invalid_argument("build_kick_spectrum: kappa must be >= 0");
  if (truncation < 0) throw std::invalid_argument("build_kick_spectrum: truncation must be >= 0");
  const auto raw = raw_spectrum(potential, kappa, spectrum_quadrature_points(potential, truncation));
  auto s = assemble(raw, kappa, truncation);
  s.weighted_tail_converged = s.weighted_tail < options.weighted_tail_budget;
  check_imag(s.max_imag_residue, options.imag_budget, "build_kick_spectrum");
  if (s.tail_norm >= options.tail_budget) {
    std::ostringstream msg;
    msg << "kick spectrum truncation L=" << truncation << " too small for kappa=" << kappa
        << ": tail norm " << s.tail_norm << " >= " << options.tail_budget;
    throw TruncationError(msg.str(), s.tail_norm);
  }
  return s;
}

KickSpectrum build_adaptive_kick_spectrum(const PotentialSpec& potential, double kappa,
                                          const SpectrumOptions& options) {
  if (kappa < 0) throw std::invalid_argument("build_adaptive_kick_spectrum: kappa must be >= 0");
  int l = initial_truncation(potential, kappa);
  for (;;) {
    const auto raw = raw_spectrum(potential, kappa, spectrum_quadrature_points(potential, l));
    auto s = assemble(raw, kappa, l);
    check_imag(s.max_imag_residue, options.imag_budget, "build_adaptive_kick_spectrum");
    const bool weighted_ok = s.weighted_tail < options.weighted_tail_budget;
    const bool parseval_ok = s.tail_norm < options.tail_budget;
    if (weighted_ok && parseval_ok) return s;
    if (l >= options.soft_cap && parseval_ok) {
      s.weighted_tail_converged = false;
      return s;
    }
    if (l >= options.hard_cap) {
      std::ostringstream msg;
      msg << "adaptive kick spectrum did not converge by L=" << l << " (tail norm "
          << s.tail_norm << ")";
      throw TruncationError(msg.str(), s.tail_norm);
    }
    l = (l < options.soft_cap && 2 * l > options.soft_cap) ? options.soft_cap : 2 * l;
  }
}

WignerKernel::WignerKernel(PotentialSpec potential, double kappa, std::size_t grid_points,
                           int truncation, std::vector<double> values, double tail,
                           double max_imag_residue)
    : potential_(std::move(potential)),
      kappa_(kappa),
      grid_points_(grid_points),
      truncation_(truncation),
      values_(std::move(values)),
      tail_(tail),
      max_imag_residue_(max_imag_residue) {}

double WignerKernel::x(std::size_t j) const noexcept {
  return -pi + 2.0 * pi * static_cast<double>(j) / static_cast<double>(grid_points_);
}

WignerKernel build_wigner_kernel(const PotentialSpec& potential, double kappa,
                                 std::size_t grid_points, int truncation,
                                 const KernelOptions& options) {
  const std::size_t m = grid_points;
  if (!fft::is_pow2(m) || m < 8)
    throw std::invalid_argument("build_wigner_kernel: grid_points must be a power of two >= 8");
  if (truncation < 0 || m < 8 * static_cast<std::size_t>(truncation)) {
    std::ostringstream msg;
    msg << "build_wigner_kernel: grid of " << m << " points cannot resolve truncation L="
        << truncation << " (need M >= 8L)";
    throw TruncationError(msg.str(), static_cast<double>(truncation));
  }
  if (kappa < 0) throw std::invalid_argument("build_wigner_kernel: kappa must be >= 0");

  const auto v = potential.sample_values(m);
  std::vector<cplx> g(m);
  for (std::size_t j = 0; j < m; ++j) g[j] = std::polar(1.0, -kappa * v[j]);

  const std::size_t width = static_cast<std::size_t>(2 * truncation + 1);
  std::vector<double> values(width * m);
  const long lt = truncation;
  const long mi = static_cast<long>(m);
  const double scale = 1.0 / static_cast<double>(m);

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, m / 64)));
  std::vector<double> tails(threads, 0.0), imags(threads, 0.0);

  auto work = [&](unsigned t) {
    fft::ComplexPlan plan(m, fft::ComplexPlan::Sign::backward);
    auto h = plan.data();
    for (std::size_t j = t; j < m; j += threads) {
      // x_j + y_k -> index j+k-M/2, x_j - y_k -> index j-k+M/2 (mod M).
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t plus = (j + k + m / 2) % m;
        const std::size_t minus = (j + m + m / 2 - k) % m;
        h[k] = g[plus] * std::conj(g[minus]);
      }
      plan.execute();
      double row_tail = 0.0;
      for (long l = -mi / 2 + 1; l <= mi / 2; ++l) {
        const std::size_t bin = static_cast<std::size_t>((l + mi) % mi);
        const cplx c = h[bin] * ((l % 2 == 0) ? scale : -scale);
        if (l < -lt || l > lt) {
          row_tail += std::norm(c);
        } else {
          imags[t] = std::max(imags[t], std::abs(c.imag()));
          values[static_cast<std::size_t>(l + lt) * m + j] = c.real();
        }
      }
      tails[t] = std::max(tails[t], row_tail);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  const double tail = *std::max_element(tails.begin(), tails.end());
  const double imag = *std::max_element(imags.begin(), imags.end());
  check_imag(imag, options.imag_budget, "build_wigner_kernel");
  const double budget = options.tail_budget.value_or(potential.has_corners() ? 1e-8 : 1e-12);
  if (tail >= budget) {
    std::ostringstream msg;
    msg << "Wigner kernel truncation L=" << truncation << " on M=" << m
        << " points too small for kappa=" << kappa << ": row tail " << tail << " >= " << budget;
    throw TruncationError(msg.str(), tail);
  }
  return {potential, kappa, m, truncation, std::move(values), tail, imag};
}

WignerKernel build_adaptive_wigner_kernel(const PotentialSpec& potential, double kappa,
                                          std::size_t grid_points, const KernelOptions& options) {
  const auto spectrum = build_adaptive_kick_spectrum(potential, kappa);
  const int l = std::min<int>(2 * spectrum.truncation, static_cast<int>(grid_points / 8));
  return build_wigner_kernel(potential, kappa, grid_points, l, options);
}

IntegralIdentityReport verify_integral_identity(const WignerKernel& kernel,
                                                const KickSpectrum& spectrum,
                                                std::optional<int> max_s) {
  const double tol = 1e-14 * std::max(1.0, std::abs(kernel.kappa()));
  if (std::abs(kernel.kappa() - spectrum.kappa) > tol)
    throw Error("verify_integral_identity: kernel and spectrum have different kappa");
  IntegralIdentityReport r;
  const int cover = std::min(spectrum.truncation, (kernel.truncation() - 1) / 2);
  r.max_s = max_s ? std::min(*max_s, cover) : cover;
  const std::size_t m = kernel.grid_points();
  auto mean = [&](int l) {
    const auto row = kernel.harmonic(l);
    double acc = 0.0;
    for (double v : row) acc += v;
    return acc / static_cast<double>(m);
  };
  for (int s = -r.max_s; s <= r.max_s; ++s) {
    const double ss = spectrum[s];
    r.even_residual = std::max(r.even_residual, std::abs(mean(2 * s) - ss * ss));
    r.odd_residual = std::max(r.odd_residual, std::abs(2.0 * pi * mean(2 * s + 1)));
  }
  return r;
}

double spread_sum(const KickSpectrum& spectrum) {
  double acc = 0.0;
  for (int l = -spectrum.truncation; l <= spectrum.truncation; ++l) {
    const double s = spectrum[l];
    acc += static_cast<double>(l) * static_cast<double>(l) * s * s;
  }
  return acc;
}

double verify_spread_identity(const KickSpectrum& spectrum, double mean_square_force) {
  const double z = spectrum.kappa;
  return std::abs(spread_sum(spectrum) - z * z * mean_square_force);
}

namespace {

// Σ_r a_{l-r}(x_j) b_{sign·r}(x_j) for every j, |l| <= la + lb.
std::vector<double> harmonic_convolution(const WignerKernel& a, const WignerKernel& b, int sign,
                                         int l) {
  const std::size_t m = a.grid_points();
  std::vector<double> out(m, 0.0);
  const int lb = b.truncation();
  for (int r = -lb; r <= lb; ++r) {
    const int ia = l - r;
    if (ia < -a.truncation() || ia > a.truncation()) continue;
    const auto ra = a.harmonic(ia);
    const auto rb = b.harmonic(sign * r);
    for (std::size_t j = 0; j < m; ++j) out[j] += ra[j] * rb[j];
  }
  return out;
}

double antiresonance_residual(const WignerKernel& k) {
  double res = 0.0;
  const int span = 2 * k.truncation();
  for (int l = -span; l <= span; ++l) {
    const auto c = harmonic_convolution(k, k, -1, l);
    for (double v : c) res = std::max(res, std::abs(v - (l == 0 ? 1.0 : 0.0)));
  }
  return res;
}

double shift_residual(const WignerKernel& k) {
  const std::size_t m = k.grid_points();
  double res = 0.0;
  for (int r = -k.truncation(); r <= k.truncation(); ++r) {
    // x + rπ moves r·M/2 grid points.
    const std::size_t shift = (static_cast<std::size_t>(std::abs(r)) % 2) * (m / 2);
    const auto plus = k.harmonic(r);
    const auto minus = k.harmonic(-r);
    for (std::size_t j = 0; j < m; ++j)
      res = std::max(res, std::abs(plus[(j + shift) % m] - minus[j]));
  }
  return res;
}

}  // namespace

ConvolutionIdentityReport verify_convolution_identities(const WignerKernel& a,
                                                        const WignerKernel& b) {
  if (a.grid_points() != b.grid_points())
    throw Error("verify_convolution_identities: kernels live on different grids");
  if (!(a.potential() == b.potential()))
    throw Error("verify_convolution_identities: kernels use different potentials");

  ConvolutionIdentityReport r;
  const std::size_t m = a.grid_points();
  const int lsum = std::min<int>(a.truncation() + b.truncation(), static_cast<int>(m / 8));
  KernelOptions loose;
  loose.tail_budget = std::numeric_limits<double>::infinity();
  const auto sum = build_wigner_kernel(a.potential(), a.kappa() + b.kappa(), m, lsum, loose);
  for (int l = -lsum; l <= lsum; ++l) {
    const auto c = harmonic_convolution(a, b, +1, l);
    const auto ref = sum.harmonic(l);
    for (std::size_t j = 0; j < m; ++j) r.sum_rule = std::max(r.sum_rule, std::abs(c[j] - ref[j]));
  }
  r.antiresonance = std::max(antiresonance_residual(a), antiresonance_residual(b));
  r.shift_symmetry = std::max(shift_residual(a), shift_residual(b));
  return r;
}

void write_spectrum_csv(std::ostream& out, const KickSpectrum& spectrum) {
  out << "l,S_l\n";
  for (int l = -spectrum.truncation; l <= spectrum.truncation; ++l)
    out << l << ',' << csv::format_real(spectrum[l]) << '\n';
}

void write_kernel_csv(std::ostream& out, const WignerKernel& kernel) {
  out << "j,x_j,l,value\n";
  for (std::size_t j = 0; j < kernel.grid_points(); ++j) {
    const std::string xj = csv::format_real(kernel.x(j));
    for (int l = -kernel.truncation(); l <= kernel.truncation(); ++l)
      out << j << ',' << xj << ',' << l << ',' << csv::format_real(kernel.at(j, l)) << '\n';
  }
}

}  // namespace kickwig
