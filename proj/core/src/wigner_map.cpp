#include "kickwig/wigner_map.hpp"

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
constexpr double pi = std::numbers::pi;

double purity(std::span<const double> w) {
  double acc = 0.0;
  for (double v : w) acc += v * v;
  return 4.0 * pi * pi * acc / static_cast<double>(w.size());
}

}  // namespace

WignerField::WignerField(std::size_t grid_points, int radius, double kbar)
    : m_(grid_points), radius_(radius), kbar_(kbar) {
  if (!fft::is_pow2(grid_points) || grid_points < 2)
    throw std::invalid_argument("WignerField: grid_points must be a power of two");
  if (radius < 0) throw std::invalid_argument("WignerField: radius must be >= 0");
  if (!std::isfinite(kbar) || kbar <= 0) throw std::invalid_argument("WignerField: kbar must be positive");
  w_.assign(static_cast<std::size_t>(2 * radius + 1) * grid_points, 0.0);
}

double WignerField::x(std::size_t j) const noexcept {
  return -pi + 2.0 * pi * static_cast<double>(j) / static_cast<double>(m_);
}

WignerField init_wigner(std::size_t grid_points, int radius, double kbar) {
  WignerField f(grid_points, radius, kbar);
  auto s = f.slice(0);
  std::fill(s.begin(), s.end(), 1.0 / (2.0 * pi));
  return f;
}

WignerField free_shear(WignerField field, double t) {
  const std::size_t m = field.grid_points();
  const long double rho = static_cast<long double>(field.kbar() / (4.0 * pi));
  fft::RealPlan plan(m);
  auto real = plan.real();
  auto spec = plan.spectrum();
  const double scale = 1.0 / static_cast<double>(m);
  for (int s = -field.radius(); s <= field.radius(); ++s) {
    // Shift p_m·t in turns of 2π.
    long double turns = static_cast<long double>(s) * rho * static_cast<long double>(t);
    turns -= std::floor(turns);
    if (turns == 0.0L) continue;
    auto w = field.slice(s);
    if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) continue;
    std::copy(w.begin(), w.end(), real.begin());
    plan.forward();
    for (std::size_t k = 0; k < m / 2; ++k) {
      long double phase = -static_cast<long double>(k) * turns;
      phase -= std::floor(phase);
      spec[k] *= fft::unit_phase(phase) * scale;
    }
    // Nyquist bin stays real: cos of its phase.
    long double nyq = static_cast<long double>(m / 2) * turns;
    nyq -= std::floor(nyq);
    spec[m / 2] *= fft::unit_phase(nyq).real() * scale;
    plan.backward();
    std::copy(real.begin(), real.end(), w.begin());
  }
  return field;
}

WignerField kick_displace(WignerField field, const WignerKernel& kernel,
                          const WignerOptions& options) {
  const std::size_t m = field.grid_points();
  if (kernel.grid_points() != m) {
    std::ostringstream msg;
    msg << "kick_displace: kernel grid " << kernel.grid_points() << " does not match field grid "
        << m;
    throw Error(msg.str());
  }
  const int r = field.radius_;
  const int lk = kernel.truncation();
  const int width = r + lk;
  std::vector<double> out(static_cast<std::size_t>(2 * width + 1) * m, 0.0);
  // w'_{m'} = Σ_l 𝒮_l w_{m'+l}; with n = m'+l the source slice.
  for (int n = -r; n <= r; ++n) {
    const auto src = field.slice(n);
    if (std::all_of(src.begin(), src.end(), [](double v) { return v == 0.0; })) continue;
    for (int l = -lk; l <= lk; ++l) {
      const auto k = kernel.harmonic(l);
      double* dst = out.data() + static_cast<std::size_t>(n - l + width) * m;
      for (std::size_t j = 0; j < m; ++j) dst[j] += k[j] * src[j];
    }
  }

  auto slice_of = [&](int s) {
    return std::span<const double>(out.data() + static_cast<std::size_t>(s + width) * m, m);
  };
  std::vector<double> weight(static_cast<std::size_t>(2 * width + 1));
  for (int s = -width; s <= width; ++s) weight[static_cast<std::size_t>(s + width)] = purity(slice_of(s));
  auto outside = [&](int half) {
    double acc = 0.0;
    for (int s = -width; s <= width; ++s)
      if (s < -half || s > half) acc += weight[static_cast<std::size_t>(s + width)];
    return acc;
  };
  int keep = std::max(r, 1);
  while (keep < width && keep < options.max_radius && outside(keep) > options.drop_tolerance)
    keep = std::min(2 * keep, options.max_radius);
  keep = std::min(keep, width);
  const double dropped = outside(keep);

  std::vector<double> next(static_cast<std::size_t>(2 * keep + 1) * m);
  for (int s = -keep; s <= keep; ++s) {
    const auto src = slice_of(s);
    std::copy(src.begin(), src.end(), next.begin() + static_cast<std::ptrdiff_t>(s + keep) * static_cast<std::ptrdiff_t>(m));
  }
  field.w_ = std::move(next);
  field.radius_ = keep;
  field.leak_ += dropped;
  if (field.leak_ > options.leak_budget) {
    std::ostringstream msg;
    msg << "Wigner slice radius " << keep << " leaked purity weight " << field.leak_
        << " (budget " << options.leak_budget << "); raise max_radius";
    throw TruncationError(msg.str(), field.leak_);
  }
  return field;
}

WignerField wigner_floquet_step(WignerField field, const WignerKernel& kernel,
                                const WignerOptions& options) {
  auto next = kick_displace(free_shear(std::move(field)), kernel, options);
  ++next.kicks_;
  return next;
}

PhaseSpaceMarginals marginals_and_energy(const WignerField& field) {
  PhaseSpaceMarginals out;
  const std::size_t m = field.grid_points();
  out.radius = field.radius();
  out.momentum_weights.assign(static_cast<std::size_t>(2 * field.radius() + 1), 0.0);
  out.position_density.assign(m, 0.0);
  const double dx = 2.0 * pi / static_cast<double>(m);
  for (int s = -field.radius(); s <= field.radius(); ++s) {
    const auto w = field.slice(s);
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      acc += w[j];
      out.position_density[j] += w[j];
    }
    const double weight = dx * acc;
    out.momentum_weights[static_cast<std::size_t>(s + field.radius())] = weight;
    out.total += weight;
    const double p = field.momentum(s);
    out.energy += 0.5 * p * p * weight;
  }
  return out;
}

WignerField wigner_from_state(const LadderState& state, std::size_t grid_points,
                              std::optional<int> max_radius) {
  const int lt = state.truncation();
  const int radius = std::min(2 * lt, max_radius.value_or(2 * lt));
  const long mi = static_cast<long>(grid_points);
  WignerField field(grid_points, radius, state.kbar());
  const auto c = state.amplitudes();
  fft::ComplexPlan plan(grid_points, fft::ComplexPlan::Sign::backward);
  auto a = plan.data();
  const double norm = 1.0 / (2.0 * pi);
  for (int s = -radius; s <= radius; ++s) {
    std::fill(a.begin(), a.end(), cplx{});
    bool any = false;
    // l' = s - l; harmonic d = l - l' = 2l - s.
    for (int l = std::max(-lt, s - lt); l <= std::min(lt, s + lt); ++l) {
      const cplx term = c[static_cast<std::size_t>(l + lt)] * std::conj(c[static_cast<std::size_t>(s - l + lt)]);
      if (term == cplx{}) continue;
      any = true;
      const long d = 2L * l - s;
      // e^{id x_j} = (-1)^d e^{2πi dj/M}; folding d mod M keeps parity for even M.
      a[static_cast<std::size_t>(((d % mi) + mi) % mi)] += (d % 2 == 0) ? term : -term;
    }
    if (!any) continue;
    plan.execute();
    auto w = field.slice(s);
    for (std::size_t j = 0; j < grid_points; ++j) w[j] = norm * a[j].real();
  }
  field.kicks_ = state.kicks_applied();
  return field;
}

double max_deviation(const WignerField& a, const WignerField& b) {
  if (a.grid_points() != b.grid_points()) throw Error("max_deviation: fields live on different grids");
  const int r = std::max(a.radius(), b.radius());
  double dev = 0.0;
  for (int s = -r; s <= r; ++s)
    for (std::size_t j = 0; j < a.grid_points(); ++j)
      dev = std::max(dev, std::abs(a.at(s, j) - b.at(s, j)));
  return dev;
}

double compare_with_state(const WignerField& field, const LadderState& state) {
  if (field.kicks_applied() != state.kicks_applied()) {
    std::ostringstream msg;
    msg << "compare_with_state: field has " << field.kicks_applied() << " kicks, state has "
        << state.kicks_applied();
    throw Error(msg.str());
  }
  if (field.kbar() != state.kbar()) throw Error("compare_with_state: field and state have different kbar");
  const int r = field.radius();
  double dev = max_deviation(field, wigner_from_state(state, field.grid_points(), r));
  if (2 * state.truncation() > r) {
    std::vector<cplx> mag;
    mag.reserve(static_cast<std::size_t>(2 * state.truncation() + 1));
    for (int l = -state.truncation(); l <= state.truncation(); ++l) mag.emplace_back(std::sqrt(state.weight(l)));
    const auto env = fft::linear_convolve(mag, mag);  // index m + 2L
    const int w = 2 * state.truncation();
    for (int s = -w; s <= w; ++s)
      if (s < -r || s > r) dev = std::max(dev, std::abs(env[static_cast<std::size_t>(s + w)].real()) / (2.0 * pi));
  }
  return dev;
}

void write_phase_space_csv(std::ostream& out, const WignerField& field) {
  out << "m,p_m,j,x_j,weight\n";
  for (int s = -field.radius(); s <= field.radius(); ++s) {
    const auto w = field.slice(s);
    if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) continue;
    const std::string p = csv::format_real(field.momentum(s));
    for (std::size_t j = 0; j < field.grid_points(); ++j)
      out << s << ',' << p << ',' << j << ',' << csv::format_real(field.x(j)) << ','
          << csv::format_real(w[j]) << '\n';
  }
}

void write_heatmap(std::ostream& out, const WignerField& field) {
  out << "# rows m=" << -field.radius() << ".." << field.radius() << " (p_m = m*kbar/2), columns j=0.."
      << field.grid_points() - 1 << " (x_j = -pi + 2*pi*j/M)\n";
  for (int s = -field.radius(); s <= field.radius(); ++s) {
    const auto w = field.slice(s);
    for (std::size_t j = 0; j < field.grid_points(); ++j) {
      if (j) out << ' ';
      out << csv::format_real(w[j]);
    }
    out << '\n';
  }
}

}  // namespace kickwig
