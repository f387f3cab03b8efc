#include "kickwig/state_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "kickwig/csv.hpp"
#include "kickwig/fft.hpp"

namespace kickwig {

namespace {

using fft::cplx;

// e^{-i l² k̄ n/2} as exp(2πi·turns), turns = -frac(l²·n·k̄/4π).
cplx free_phase(long l, std::uint64_t periods, double rho) {
  const long double l2 = static_cast<long double>(l) * static_cast<long double>(l);
  long double t = l2 * static_cast<long double>(rho);
  t -= std::floor(t);
  t *= static_cast<long double>(periods);
  t -= std::floor(t);
  return fft::unit_phase(-t);
}

double rho_of(double kbar) { return kbar / (4.0 * std::numbers::pi); }

}  // namespace

LadderState::LadderState(int truncation, double kbar)
    : truncation_(truncation), kbar_(kbar), c_(static_cast<std::size_t>(2 * std::max(truncation, 0) + 1)) {
  if (truncation < 1) throw std::invalid_argument("LadderState: truncation must be >= 1");
  if (!std::isfinite(kbar) || kbar <= 0) throw std::invalid_argument("LadderState: kbar must be positive");
  c_[static_cast<std::size_t>(truncation)] = 1.0;
}

std::vector<cplx> LadderState::amplitudes() const {
  auto out = c_;
  if (pending_ == 0) return out;
  const double rho = rho_of(kbar_);
  for (long l = -truncation_; l <= truncation_; ++l) {
    auto& c = out[static_cast<std::size_t>(l + truncation_)];
    if (c != cplx{}) c *= free_phase(l, pending_, rho);
  }
  return out;
}

cplx LadderState::amplitude(int l) const {
  if (l < -truncation_ || l > truncation_) return {};
  const cplx c = c_[static_cast<std::size_t>(l + truncation_)];
  return pending_ == 0 ? c : c * free_phase(l, pending_, rho_of(kbar_));
}

double LadderState::weight(int l) const noexcept {
  if (l < -truncation_ || l > truncation_) return 0.0;
  return std::norm(c_[static_cast<std::size_t>(l + truncation_)]);
}

double LadderState::norm() const noexcept {
  double acc = 0.0;
  for (const auto& c : c_) acc += std::norm(c);
  return acc;
}

void LadderState::settle() {
  if (pending_ == 0) return;
  c_ = amplitudes();
  pending_ = 0;
}

LadderState init_ladder(int truncation, double kbar) { return {truncation, kbar}; }

LadderState free_step(LadderState state) {
  ++state.pending_;
  return state;
}

LadderState kick_step(LadderState state, const KickSpectrum& spectrum,
                      const LadderOptions& options) {
  state.settle();
  // c'_m = Σ_n S_{n-m} c_n: convolution with the reversed spectrum.
  std::vector<cplx> reversed(spectrum.coeffs.rbegin(), spectrum.coeffs.rend());
  const auto out = fft::linear_convolve(state.c_, reversed, options.direct_crossover);
  const long width = state.truncation_ + spectrum.truncation;  // out index m + width

  long keep = state.truncation_;
  if (!options.fixed_truncation) {
    // Smallest power-of-two multiple of L whose outside weight is negligible.
    auto outside = [&](long half) {
      double acc = 0.0;
      for (long m = -width; m < -half; ++m) acc += std::norm(out[static_cast<std::size_t>(m + width)]);
      for (long m = half + 1; m <= width; ++m) acc += std::norm(out[static_cast<std::size_t>(m + width)]);
      return acc;
    };
    while (keep < width && keep < options.max_truncation && outside(keep) > options.drop_tolerance)
      keep = std::min<long>(2 * keep, options.max_truncation);
  }

  std::vector<cplx> next(static_cast<std::size_t>(2 * keep + 1));
  double dropped = 0.0;
  for (long m = -width; m <= width; ++m) {
    const cplx c = out[static_cast<std::size_t>(m + width)];
    if (m < -keep || m > keep) {
      dropped += std::norm(c);
    } else {
      next[static_cast<std::size_t>(m + keep)] = c;
    }
  }
  state.c_ = std::move(next);
  state.truncation_ = static_cast<int>(keep);
  state.tail_norm_ += dropped;
  ++state.kicks_;
  if (state.tail_norm_ > options.tail_budget) {
    std::ostringstream msg;
    msg << "ladder truncation L=" << keep << " lost weight " << state.tail_norm_ << " after "
        << state.kicks_ << " kicks (budget " << options.tail_budget
        << "); raise max_truncation";
    throw TruncationError(msg.str(), state.tail_norm_);
  }
  return state;
}

Trajectory floquet_evolve(LadderState state, const KickSpectrum& spectrum, int n_kicks,
                          const LadderOptions& options) {
  if (n_kicks < 0) throw std::invalid_argument("floquet_evolve: n_kicks must be >= 0");
  Trajectory t{std::move(state), {}};
  t.energies.reserve(static_cast<std::size_t>(n_kicks));
  for (int n = 0; n < n_kicks; ++n) {
    t.state = kick_step(free_step(std::move(t.state)), spectrum, options);
    t.energies.push_back({t.state.kicks_applied(), mean_energy(t.state), t.state.tail_norm()});
  }
  return t;
}

std::map<int, double> momentum_distribution(const LadderState& state) {
  std::map<int, double> out;
  for (int l = -state.truncation(); l <= state.truncation(); ++l) {
    const double w = state.weight(l);
    if (w != 0.0) out.emplace(l, w);
  }
  return out;
}

double mean_energy(const LadderState& state) {
  double acc = 0.0;
  for (int l = -state.truncation(); l <= state.truncation(); ++l) {
    const double p = l * state.kbar();
    acc += p * p * state.weight(l);
  }
  return 0.5 * acc;
}

cplx overlap(const LadderState& a, const LadderState& b) {
  if (a.kbar() != b.kbar()) throw Error("overlap: states live on different ladders");
  const auto ca = a.amplitudes();
  const auto cb = b.amplitudes();
  const int l = std::min(a.truncation(), b.truncation());
  cplx acc{};
  for (int m = -l; m <= l; ++m)
    acc += std::conj(ca[static_cast<std::size_t>(m + a.truncation())]) *
           cb[static_cast<std::size_t>(m + b.truncation())];
  return acc;
}

void write_trajectory_csv(std::ostream& out, const std::vector<EnergyRecord>& energies) {
  out << "N,E,tail_norm\n";
  for (const auto& r : energies)
    out << r.kick << ',' << csv::format_real(r.energy) << ',' << csv::format_real(r.tail_norm)
        << '\n';
}

void write_distribution_csv(std::ostream& out, const std::map<int, double>& distribution,
                            double kbar) {
  out << "l,p,weight\n";
  for (const auto& [l, w] : distribution)
    out << l << ',' << csv::format_real(l * kbar) << ',' << csv::format_real(w) << '\n';
}

}  // namespace kickwig
