#include <doctest.h>

#include <cmath>

#include "kickwig/fft.hpp"
#include "random.hpp"

using namespace kickwig;
using fft::cplx;

TEST_CASE("pow2 helpers") {
  CHECK(fft::is_pow2(1));
  CHECK(fft::is_pow2(1024));
  CHECK_FALSE(fft::is_pow2(0));
  CHECK_FALSE(fft::is_pow2(768));
  CHECK(fft::next_pow2(257) == 512);
  CHECK(fft::next_pow2(256) == 256);
}

TEST_CASE("unit_phase is exact on quarter turns") {
  CHECK(fft::unit_phase(0.0L) == cplx(1, 0));
  CHECK(fft::unit_phase(0.25L) == cplx(0, 1));
  CHECK(fft::unit_phase(-0.5L) == cplx(-1, 0));
  CHECK(fft::unit_phase(7.75L) == cplx(0, -1));
  const auto z = fft::unit_phase(0.125L);
  CHECK(z.real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("direct and FFT convolution agree") {
  testing::Gen gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = gen.complex_vector(static_cast<std::size_t>(gen.integer(1, 300)));
    const auto b = gen.complex_vector(static_cast<std::size_t>(gen.integer(1, 300)));
    const auto d = fft::direct_convolve(a, b);
    const auto f = fft::fft_convolve(a, b);
    REQUIRE(d.size() == a.size() + b.size() - 1);
    REQUIRE(f.size() == d.size());
    double scale = 0.0, err = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      scale = std::max(scale, std::abs(d[i]));
      err = std::max(err, std::abs(d[i] - f[i]));
    }
    CHECK(err <= 1e-12 * scale);
  }
}

TEST_CASE("linear_convolve picks a path by size") {
  const std::vector<cplx> a{1, 2, 3}, b{0, 1};
  const auto c = fft::linear_convolve(a, b);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == cplx(0));
  CHECK(c[3] == cplx(3));
  CHECK(fft::linear_convolve(std::vector<cplx>{}, b).empty());
}

TEST_CASE("real plan round trip") {
  fft::RealPlan plan(64);
  auto r = plan.real();
  for (std::size_t j = 0; j < 64; ++j) r[j] = std::sin(3.0 * j) + 0.5;
  const std::vector<double> orig(r.begin(), r.end());
  double sum = 0.0;
  for (double v : orig) sum += v;
  plan.forward();
  CHECK(plan.spectrum()[0].real() == doctest::Approx(sum));
  plan.backward();
  for (std::size_t j = 0; j < 64; ++j) CHECK(r[j] / 64.0 == doctest::Approx(orig[j]).epsilon(1e-13));
  CHECK_THROWS_AS(fft::RealPlan(7), std::invalid_argument);
}
