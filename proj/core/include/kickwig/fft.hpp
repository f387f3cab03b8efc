#pragma once

// Thin RAII layer over FFTW. Plans own their buffers; planning is serialized
// internally so plans may be created from several threads.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace kickwig::fft {

using cplx = std::complex<double>;

bool is_pow2(std::size_t n) noexcept;
std::size_t next_pow2(std::size_t n) noexcept;

/// In-place unnormalized complex DFT.
/// forward:  X_k = sum_j x_j exp(-2 pi i jk/n)
/// backward: X_k = sum_j x_j exp(+2 pi i jk/n)
class ComplexPlan {
 public:
  enum class Sign { forward, backward };

  ComplexPlan(std::size_t n, Sign sign);
  ~ComplexPlan();
  ComplexPlan(ComplexPlan&&) noexcept;
  ComplexPlan& operator=(ComplexPlan&&) noexcept;
  ComplexPlan(const ComplexPlan&) = delete;
  ComplexPlan& operator=(const ComplexPlan&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::span<cplx> data() noexcept;
  void execute();

 private:
  struct Impl;
  std::size_t n_ = 0;
  std::unique_ptr<Impl> impl_;
};

/// Real-to-half-complex pair of size n (n even). forward() maps real() to
/// spectrum() (n/2 + 1 bins); backward() maps spectrum() to real() without the
/// 1/n factor.
class RealPlan {
 public:
  explicit RealPlan(std::size_t n);
  ~RealPlan();
  RealPlan(RealPlan&&) noexcept;
  RealPlan& operator=(RealPlan&&) noexcept;
  RealPlan(const RealPlan&) = delete;
  RealPlan& operator=(const RealPlan&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::span<double> real() noexcept;
  std::span<cplx> spectrum() noexcept;
  void forward();
  void backward();

 private:
  struct Impl;
  std::size_t n_ = 0;
  std::unique_ptr<Impl> impl_;
};

/// Full linear convolution out[k] = sum_j a[j] b[k-j], length a+b-1.
/// Direct summation when a.size()*b.size() <= direct_crossover, FFT otherwise.
std::vector<cplx> linear_convolve(std::span<const cplx> a, std::span<const cplx> b,
                                  std::size_t direct_crossover = 4096);
std::vector<cplx> direct_convolve(std::span<const cplx> a, std::span<const cplx> b);
std::vector<cplx> fft_convolve(std::span<const cplx> a, std::span<const cplx> b);

/// exp(2 pi i * turns), exact at multiples of a quarter turn.
cplx unit_phase(long double turns) noexcept;

}  // namespace kickwig::fft
