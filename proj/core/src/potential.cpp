#include "kickwig/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kickwig/fft.hpp"

namespace kickwig {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

// Reduce to [-π, π).
double wrap(double x) {
  double y = std::fmod(x + pi, two_pi);
  if (y < 0) y += two_pi;
  return y - pi;
}

double triangle_value(double x) {
  const double y = wrap(x);
  if (std::abs(y) <= pi / 2) return 2.0 * y / pi;
  if (y > 0) return 2.0 * (pi - y) / pi;
  return -2.0 * (pi + y) / pi;
}

double triangle_force(double x) {
  const double y = wrap(x);
  const double a = std::abs(y);
  constexpr double corner_tol = 1e-14;
  if (std::abs(a - pi / 2) < corner_tol) return 0.0;
  return a < pi / 2 ? -2.0 / pi : 2.0 / pi;
}

std::size_t msf_points(const PotentialSpec& p) {
  return std::max<std::size_t>(4096, 4 * p.samples().size());
}

}  // namespace

std::string_view to_string(PotentialKind kind) noexcept {
  switch (kind) {
    case PotentialKind::sine: return "sine";
    case PotentialKind::triangle: return "triangle";
    case PotentialKind::table: return "table";
  }
  return "unknown";
}

PotentialSpec::PotentialSpec(PotentialKind kind, std::vector<double> samples)
    : kind_(kind), samples_(std::move(samples)) {
  if (kind_ == PotentialKind::table) {
    const std::size_t n = samples_.size();
    if (n < 8 || !fft::is_pow2(n))
      throw Error("table potential: sample count must be a power of two >= 8, got " +
                  std::to_string(n));
    fft::RealPlan plan(n);
    std::copy(samples_.begin(), samples_.end(), plan.real().begin());
    plan.forward();
    modes_.assign(plan.spectrum().begin(), plan.spectrum().end());
    for (auto& c : modes_) c /= static_cast<double>(n);
  }
  const std::size_t q = msf_points(*this);
  mean_square_force_ = kickwig::mean_square_force(*this, q);
  const auto f = sample_forces(q);
  for (double v : f) max_abs_force_ = std::max(max_abs_force_, std::abs(v));
}

PotentialSpec PotentialSpec::sine() { return {PotentialKind::sine, {}}; }

PotentialSpec PotentialSpec::triangle() { return {PotentialKind::triangle, {}}; }

PotentialSpec PotentialSpec::from_table(std::vector<double> samples, double tol) {
  const auto report = validate_table(samples, tol);
  if (!report.passed()) {
    std::ostringstream msg;
    msg << "table potential violates symmetry (oddness " << report.oddness
        << ", half-period " << report.half_period << ", tolerance " << tol << ")";
    throw SymmetryError(msg.str(), report);
  }
  return {PotentialKind::table, std::move(samples)};
}

PotentialSpec PotentialSpec::from_table_unchecked(std::vector<double> samples) {
  return {PotentialKind::table, std::move(samples)};
}

double PotentialSpec::value(double x) const {
  switch (kind_) {
    case PotentialKind::sine: return std::sin(x);
    case PotentialKind::triangle: return triangle_value(x);
    case PotentialKind::table: break;
  }
  // Trigonometric interpolant on x_j = 2πj/N.
  const std::size_t n = samples_.size();
  const std::size_t half = n / 2;
  const double y = wrap(x);
  double v = modes_[0].real();
  for (std::size_t k = 1; k < half; ++k) {
    const double kx = static_cast<double>(k) * y;
    v += 2.0 * (modes_[k].real() * std::cos(kx) - modes_[k].imag() * std::sin(kx));
  }
  v += modes_[half].real() * std::cos(static_cast<double>(half) * y);
  return v;
}

double PotentialSpec::force(double x) const {
  switch (kind_) {
    case PotentialKind::sine: return -std::cos(x);
    case PotentialKind::triangle: return triangle_force(x);
    case PotentialKind::table: break;
  }
  const std::size_t n = samples_.size();
  const std::size_t half = n / 2;
  const double y = wrap(x);
  double dv = 0.0;
  for (std::size_t k = 1; k < half; ++k) {
    const double kd = static_cast<double>(k);
    const double kx = kd * y;
    dv += 2.0 * kd * (-modes_[k].real() * std::sin(kx) - modes_[k].imag() * std::cos(kx));
  }
  const double hd = static_cast<double>(half);
  dv += -hd * modes_[half].real() * std::sin(hd * y);
  return -dv;
}

std::vector<double> PotentialSpec::sample_table(std::size_t n, bool derivative) const {
  const std::size_t nt = samples_.size();
  std::vector<double> out(n);
  if (n < nt || !fft::is_pow2(n)) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = -pi + two_pi * static_cast<double>(j) / static_cast<double>(n);
      out[j] = derivative ? force(x) : value(x);
    }
    return out;
  }
  // Zero-padded synthesis. The table grid starts at 0, the output grid at -π,
  // which multiplies mode k by (-1)^k.
  fft::RealPlan plan(n);
  auto spec = plan.spectrum();
  std::fill(spec.begin(), spec.end(), fft::cplx{});
  const std::size_t half = nt / 2;
  for (std::size_t k = 0; k <= half; ++k) {
    fft::cplx c = modes_[k];
    if (k == half) c = {modes_[k].real() * (n == nt ? 1.0 : 0.5), 0.0};
    if (derivative) {
      // F = -dV/dx multiplies e^{ikx} by -ik. The Nyquist cosine term, when the
      // grids coincide, has zero derivative at every node.
      c *= fft::cplx{0.0, -static_cast<double>(k)};
      if (k == half && n == nt) c = {};
    }
    if (k % 2 == 1) c = -c;
    spec[k] = c;
  }
  plan.backward();
  std::copy(plan.real().begin(), plan.real().end(), out.begin());
  return out;
}

std::vector<double> PotentialSpec::sample_values(std::size_t n) const {
  if (kind_ == PotentialKind::table) return sample_table(n, false);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j)
    out[j] = value(-pi + two_pi * static_cast<double>(j) / static_cast<double>(n));
  return out;
}

std::vector<double> PotentialSpec::sample_forces(std::size_t n) const {
  if (kind_ == PotentialKind::table) return sample_table(n, true);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j)
    out[j] = force(-pi + two_pi * static_cast<double>(j) / static_cast<double>(n));
  return out;
}

double mean_square_force(const PotentialSpec& potential, std::size_t quadrature_points) {
  if (quadrature_points < 16 || quadrature_points % 2 != 0)
    throw std::invalid_argument("mean_square_force: quadrature_points must be even and >= 16");
  const std::size_t n = quadrature_points;
  double acc = 0.0;
  if (potential.kind() == PotentialKind::table && fft::is_pow2(n)) {
    // Midpoints of the n-grid are the odd nodes of the 2n-grid.
    const auto f = potential.sample_forces(2 * n);
    for (std::size_t j = 1; j < 2 * n; j += 2) acc += f[j] * f[j];
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = -pi + two_pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
      const double f = potential.force(x);
      acc += f * f;
    }
  }
  return acc / static_cast<double>(n);
}

SymmetryReport validate_symmetries(const PotentialSpec& potential, std::size_t grid_points,
                                   double tol) {
  if (grid_points < 64) throw std::invalid_argument("validate_symmetries: grid_points must be >= 64");
  SymmetryReport r;
  r.tolerance = tol;
  for (std::size_t j = 0; j < grid_points; ++j) {
    const double x = -pi + two_pi * static_cast<double>(j) / static_cast<double>(grid_points);
    const double v = potential.value(x);
    r.periodicity = std::max(r.periodicity, std::abs(potential.value(x + two_pi) - v));
    r.oddness = std::max(r.oddness, std::abs(potential.value(-x) + v));
    r.half_period = std::max(r.half_period, std::abs(potential.value(x + pi) + v));
  }
  return r;
}

SymmetryReport validate_table(std::span<const double> samples, double tol) {
  SymmetryReport r;
  r.tolerance = tol;
  const std::size_t n = samples.size();
  if (n == 0) return r;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = samples[j];
    r.oddness = std::max(r.oddness, std::abs(v + samples[(n - j) % n]));
    if (n % 2 == 0) r.half_period = std::max(r.half_period, std::abs(v + samples[(j + n / 2) % n]));
  }
  if (n % 2 != 0) r.half_period = std::numeric_limits<double>::infinity();
  return r;
}

std::vector<double> read_table_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open potential table '" + path.string() + "'");
  std::vector<std::pair<long, double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long idx;
    double v;
    if (!(ls >> idx)) continue;
    if (!(ls >> v))
      throw Error(path.string() + ":" + std::to_string(lineno) + ": expected 'x_index value'");
    rows.emplace_back(idx, v);
  }
  const std::size_t n = rows.size();
  if (n == 0) throw Error("potential table '" + path.string() + "' is empty");
  if (n < 8 || !fft::is_pow2(n))
    throw Error("potential table '" + path.string() + "' has " + std::to_string(n) +
                " samples; need a power of two >= 8");
  std::vector<double> samples(n);
  std::vector<bool> seen(n, false);
  for (const auto& [idx, v] : rows) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= n || seen[static_cast<std::size_t>(idx)])
      throw Error("potential table '" + path.string() + "': index " + std::to_string(idx) +
                  " out of range or repeated");
    seen[static_cast<std::size_t>(idx)] = true;
    samples[static_cast<std::size_t>(idx)] = v;
  }
  return samples;
}

}  // namespace kickwig
