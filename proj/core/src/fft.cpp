#include "kickwig/fft.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace kickwig::fft {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

bool is_pow2(std::size_t n) noexcept { return n != 0 && std::has_single_bit(n); }

std::size_t next_pow2(std::size_t n) noexcept { return n <= 1 ? 1 : std::bit_ceil(n); }

struct ComplexPlan::Impl {
  fftw_complex* buf = nullptr;
  fftw_plan plan = nullptr;
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (plan) fftw_destroy_plan(plan);
    if (buf) fftw_free(buf);
  }
};

ComplexPlan::ComplexPlan(std::size_t n, Sign sign) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n == 0) throw std::invalid_argument("ComplexPlan: size must be positive");
  std::lock_guard lock(planner_mutex());
  impl_->buf = fftw_alloc_complex(n);
  if (!impl_->buf) throw std::bad_alloc();
  impl_->plan = fftw_plan_dft_1d(static_cast<int>(n), impl_->buf, impl_->buf,
                                 sign == Sign::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
  if (!impl_->plan) throw std::runtime_error("ComplexPlan: FFTW planning failed");
}

ComplexPlan::~ComplexPlan() = default;
ComplexPlan::ComplexPlan(ComplexPlan&&) noexcept = default;
ComplexPlan& ComplexPlan::operator=(ComplexPlan&&) noexcept = default;

std::span<cplx> ComplexPlan::data() noexcept {
  return {reinterpret_cast<cplx*>(impl_->buf), n_};
}

void ComplexPlan::execute() { fftw_execute(impl_->plan); }

struct RealPlan::Impl {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (real) fftw_free(real);
    if (spec) fftw_free(spec);
  }
};

RealPlan::RealPlan(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("RealPlan: size must be even");
  std::lock_guard lock(planner_mutex());
  impl_->real = fftw_alloc_real(n);
  impl_->spec = fftw_alloc_complex(n / 2 + 1);
  if (!impl_->real || !impl_->spec) throw std::bad_alloc();
  const int ni = static_cast<int>(n);
  impl_->fwd = fftw_plan_dft_r2c_1d(ni, impl_->real, impl_->spec, FFTW_ESTIMATE);
  // c2r destroys its input by default; spectrum() is scratch after backward().
  impl_->bwd = fftw_plan_dft_c2r_1d(ni, impl_->spec, impl_->real, FFTW_ESTIMATE);
  if (!impl_->fwd || !impl_->bwd) throw std::runtime_error("RealPlan: FFTW planning failed");
}

RealPlan::~RealPlan() = default;
RealPlan::RealPlan(RealPlan&&) noexcept = default;
RealPlan& RealPlan::operator=(RealPlan&&) noexcept = default;

std::span<double> RealPlan::real() noexcept { return {impl_->real, n_}; }
std::span<cplx> RealPlan::spectrum() noexcept {
  return {reinterpret_cast<cplx*>(impl_->spec), n_ / 2 + 1};
}
void RealPlan::forward() { fftw_execute(impl_->fwd); }
void RealPlan::backward() { fftw_execute(impl_->bwd); }

std::vector<cplx> direct_convolve(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<cplx> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx ai = a[i];
    if (ai == cplx{}) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
  }
  return out;
}

std::vector<cplx> fft_convolve(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(len);
  ComplexPlan fa(n, ComplexPlan::Sign::forward);
  ComplexPlan fb(n, ComplexPlan::Sign::forward);
  ComplexPlan inv(n, ComplexPlan::Sign::backward);
  auto da = fa.data();
  auto db = fb.data();
  std::fill(da.begin(), da.end(), cplx{});
  std::fill(db.begin(), db.end(), cplx{});
  std::copy(a.begin(), a.end(), da.begin());
  std::copy(b.begin(), b.end(), db.begin());
  fa.execute();
  fb.execute();
  auto di = inv.data();
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) di[k] = da[k] * db[k] * scale;
  inv.execute();
  return {di.begin(), di.begin() + static_cast<std::ptrdiff_t>(len)};
}

std::vector<cplx> linear_convolve(std::span<const cplx> a, std::span<const cplx> b,
                                  std::size_t direct_crossover) {
  if (a.size() * b.size() <= direct_crossover) return direct_convolve(a, b);
  return fft_convolve(a, b);
}

cplx unit_phase(long double turns) noexcept {
  long double f = turns - std::floor(turns);
  const long double quarters = f * 4.0L;
  if (quarters == std::floor(quarters)) {
    switch (static_cast<int>(quarters) & 3) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const long double angle = 2.0L * std::numbers::pi_v<long double> * f;
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

}  // namespace kickwig::fft
