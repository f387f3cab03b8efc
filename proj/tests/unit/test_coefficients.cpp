#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bessel_oracle.hpp"
#include "kickwig/coefficients.hpp"
#include "random.hpp"

using namespace kickwig;
using testing::bessel_j;
constexpr double pi = std::numbers::pi;

TEST_CASE("kick spectrum at kappa 0 is a delta") {
  const auto s = build_kick_spectrum(PotentialSpec::sine(), 0.0, 8);
  CHECK(s.truncation == 8);
  CHECK(s.coeffs.size() == 17);
  for (int l = -8; l <= 8; ++l) CHECK(s[l] == doctest::Approx(l == 0 ? 1.0 : 0.0).epsilon(1e-15));
  CHECK(s.tail_norm < 1e-30);
}

TEST_CASE("sine spectrum matches Bessel values") {
  const auto s = build_kick_spectrum(PotentialSpec::sine(), 2.0, 32);
  CHECK(s[0] == doctest::Approx(0.223891).epsilon(1e-6));
  CHECK(s[1] == doctest::Approx(0.576725).epsilon(1e-6));
  CHECK(s[-1] == doctest::Approx(-s[1]).epsilon(1e-14));
  for (int l = -32; l <= 32; ++l) CHECK(std::abs(s[l] - bessel_j(l, 2.0)) < 1e-14);
  CHECK(s[40] == 0.0);
  CHECK(s.max_imag_residue < 1e-14);
}

TEST_CASE("too small a truncation reports the measured tail") {
  try {
    build_kick_spectrum(PotentialSpec::sine(), 10.0, 4);
    FAIL("expected TruncationError");
  } catch (const TruncationError& e) {
    CHECK(e.measured() > 0.1);
  }
  CHECK_THROWS_AS(build_kick_spectrum(PotentialSpec::sine(), -1.0, 8), std::invalid_argument);
}

TEST_CASE("broken symmetry shows up as an imaginary residue") {
  std::vector<double> cosine(64);
  for (std::size_t j = 0; j < 64; ++j) cosine[j] = std::cos(2 * pi * static_cast<double>(j) / 64.0);
  const auto p = PotentialSpec::from_table_unchecked(cosine);
  CHECK_THROWS_AS(build_kick_spectrum(p, 1.0, 32), Error);
}

TEST_CASE("adaptive spectrum is unitary for kappa up to 20") {
  testing::Gen gen(7);
  for (const auto& p : {PotentialSpec::sine(), PotentialSpec::triangle()}) {
    for (int i = 0; i < 6; ++i) {
      const double kappa = gen.uniform(0.0, 20.0);
      const auto s = build_adaptive_kick_spectrum(p, kappa);
      double sum = 0.0;
      for (double c : s.coeffs) sum += c * c;
      CHECK(1.0 - sum < 1e-12);
      CHECK(s.tail_norm < 1e-12);
      CHECK(s.max_imag_residue < 1e-12);
      CHECK(s.truncation >= initial_truncation(p, kappa));
      if (!p.has_corners()) CHECK(s.weighted_tail_converged);
    }
  }
}

TEST_CASE("corner potentials stop at the soft cap") {
  const auto s = build_adaptive_kick_spectrum(PotentialSpec::triangle(), 1.0);
  CHECK(s.truncation >= 4096);
  CHECK_FALSE(s.weighted_tail_converged);
  CHECK(s.quadrature_points == spectrum_quadrature_points(PotentialSpec::triangle(), s.truncation));
}

TEST_CASE("sine spectrum has Bessel parity") {
  testing::Gen gen(8);
  for (int i = 0; i < 10; ++i) {
    const auto s = build_adaptive_kick_spectrum(PotentialSpec::sine(), gen.uniform(0.0, 15.0));
    for (int l = 0; l <= s.truncation; ++l)
      CHECK(std::abs(s[-l] - (l % 2 == 0 ? 1.0 : -1.0) * s[l]) < 1e-14);
  }
}

TEST_CASE("initial truncation rule") {
  CHECK(initial_truncation(PotentialSpec::sine(), 0.0) == 16);
  CHECK(initial_truncation(PotentialSpec::sine(), 2.0) == 20);
  CHECK(initial_truncation(PotentialSpec::triangle(), 1.0) == 18);
  CHECK(spectrum_quadrature_points(PotentialSpec::sine(), 10) == 256);
  CHECK(spectrum_quadrature_points(PotentialSpec::sine(), 100) == 1024);
  CHECK(spectrum_quadrature_points(PotentialSpec::triangle(), 10) == 1024);
}

TEST_CASE("kernel examples") {
  const auto k = build_wigner_kernel(PotentialSpec::sine(), 1.0, 256, 32);
  CHECK(k.grid_points() == 256);
  CHECK(k.x(0) == -pi);
  // x = π/2 sits at j = 3M/4.
  for (int l = -32; l <= 32; ++l) CHECK(std::abs(k.at(192, l) - (l == 0 ? 1.0 : 0.0)) < 1e-14);
  // x = 0 at j = M/2: 𝒮_l(1;0) = S_l(2).
  CHECK(k.at(128, 0) == doctest::Approx(0.223891).epsilon(1e-6));
  const auto s2 = build_kick_spectrum(PotentialSpec::sine(), 2.0, 32);
  for (int l = -32; l <= 32; ++l) CHECK(std::abs(k.at(128, l) - s2[l]) < 1e-10);
  for (std::size_t j = 0; j < 256; j += 7)
    for (int l = -32; l <= 32; ++l)
      CHECK(std::abs(k.at(j, l) - bessel_j(l, 2.0 * std::cos(k.x(j)))) < 1e-12);
  CHECK(k.at(0, 40) == 0.0);
}

TEST_CASE("kernel rows sum to one and are normalized") {
  for (const auto& p : {PotentialSpec::sine(), PotentialSpec::triangle()}) {
    KernelOptions opts;
    if (p.has_corners()) opts.tail_budget = 1e-6;
    const auto k = build_wigner_kernel(p, 0.7, 1024, 128, opts);
    for (std::size_t j = 0; j < 1024; j += 31) {
      double sum = 0.0, sq = 0.0;
      for (int l = -128; l <= 128; ++l) {
        sum += k.at(j, l);
        sq += k.at(j, l) * k.at(j, l);
      }
      CHECK(sq + k.tail() >= 1.0 - 1e-12);
      CHECK(std::abs(sum - 1.0) < (p.has_corners() ? 1e-3 : 1e-12));
    }
    CHECK(k.max_imag_residue() < 1e-12);
  }
}

TEST_CASE("kernel is 2π-periodic on its grid and links to the spectrum") {
  testing::Gen gen(9);
  for (int i = 0; i < 5; ++i) {
    const double kappa = gen.uniform(0.1, 5.0);
    const auto k = build_adaptive_wigner_kernel(PotentialSpec::sine(), kappa, 512);
    const auto s = build_adaptive_kick_spectrum(PotentialSpec::sine(), 2 * kappa);
    for (int l = -std::min(k.truncation(), s.truncation); l <= std::min(k.truncation(), s.truncation); ++l)
      CHECK(std::abs(k.at(256, l) - s[l]) < 1e-10);
  }
}

TEST_CASE("kernel argument checks") {
  CHECK_THROWS_AS(build_wigner_kernel(PotentialSpec::sine(), 1.0, 100, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_wigner_kernel(PotentialSpec::sine(), 1.0, 128, 32), TruncationError);
  CHECK_THROWS_AS(build_wigner_kernel(PotentialSpec::sine(), 10.0, 64, 8), TruncationError);
  KernelOptions one;
  one.threads = 1;
  const auto a = build_wigner_kernel(PotentialSpec::sine(), 1.3, 512, 32, one);
  const auto b = build_wigner_kernel(PotentialSpec::sine(), 1.3, 512, 32);
  bool same = true;
  for (std::size_t j = 0; j < 512; ++j)
    for (int l = -32; l <= 32; ++l) same = same && a.at(j, l) == b.at(j, l);
  CHECK(same);
}

TEST_CASE("integral identity") {
  const auto zero = verify_integral_identity(build_wigner_kernel(PotentialSpec::sine(), 0.0, 512, 32),
                                             build_kick_spectrum(PotentialSpec::sine(), 0.0, 32));
  CHECK(zero.even_residual < 1e-15);
  CHECK(zero.odd_residual < 1e-15);

  const auto r = verify_integral_identity(build_wigner_kernel(PotentialSpec::sine(), 2.0, 512, 64),
                                          build_kick_spectrum(PotentialSpec::sine(), 2.0, 32));
  CHECK(r.max_s == 31);
  CHECK(r.even_residual < 1e-10);
  CHECK(r.odd_residual < 1e-10);

  const auto t = PotentialSpec::triangle();
  // Kinks in 𝒮_l(κ;x) make the x-trapezoid second order here; M = 16384 with
  // a narrow kernel reaches 1e-8.
  const auto tr = verify_integral_identity(
      build_wigner_kernel(t, 1.0, 16384, 40, {.tail_budget = std::numeric_limits<double>::infinity()}),
      build_adaptive_kick_spectrum(t, 1.0), 16);
  CHECK(tr.even_residual < 1e-8);
  CHECK(tr.odd_residual < 1e-8);

  CHECK_THROWS_AS(verify_integral_identity(build_wigner_kernel(PotentialSpec::sine(), 1.0, 512, 32),
                                           build_kick_spectrum(PotentialSpec::sine(), 2.0, 32)),
                  Error);
}

TEST_CASE("spread identity") {
  const auto sine = PotentialSpec::sine();
  CHECK(verify_spread_identity(build_kick_spectrum(sine, 0.0, 16), 0.5) == 0.0);
  const auto s2 = build_adaptive_kick_spectrum(sine, 2.0);
  CHECK(spread_sum(s2) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(verify_spread_identity(s2, sine.mean_square_force()) < 1e-12);

  // Corner potentials: the l²-tail past L is about 0.4·z²⟨F²⟩/L.
  const auto tri = PotentialSpec::triangle();
  const auto s3 = build_adaptive_kick_spectrum(tri, 3.0);
  const double target = 9.0 * 4.0 / (pi * pi);
  CHECK(target == doctest::Approx(3.6476).epsilon(1e-4));
  const double res = verify_spread_identity(s3, tri.mean_square_force());
  CHECK(res < target / s3.truncation);
  CHECK(spread_sum(s3) < target);
}

TEST_CASE("convolution identities") {
  const auto sine = PotentialSpec::sine();
  const auto z = verify_convolution_identities(build_wigner_kernel(sine, 0.0, 512, 16),
                                               build_wigner_kernel(sine, 0.0, 512, 16));
  CHECK(z.sum_rule < 1e-15);
  CHECK(z.antiresonance < 1e-15);
  CHECK(z.shift_symmetry < 1e-15);

  const auto a = build_wigner_kernel(sine, 1.0, 1024, 48);
  const auto b = build_wigner_kernel(sine, 1.5, 1024, 48);
  const auto r = verify_convolution_identities(a, b);
  CHECK(r.sum_rule < 1e-10);
  CHECK(r.antiresonance < 1e-10);
  CHECK(r.shift_symmetry < 1e-10);

  // 𝒞_0⁺ at x = 0 (j = M/2) is 𝒮_0(2.5; 0) = J_0(5).
  double c0 = 0.0;
  for (int q = -48; q <= 48; ++q) c0 += a.at(512, -q) * b.at(512, q);
  CHECK(c0 == doctest::Approx(-0.17760).epsilon(1e-4));
  CHECK(std::abs(c0 - bessel_j(0, 5.0)) < 1e-12);

  CHECK_THROWS_AS(verify_convolution_identities(a, build_wigner_kernel(sine, 1.5, 512, 48)), Error);
  CHECK_THROWS_AS(
      verify_convolution_identities(a, build_wigner_kernel(PotentialSpec::triangle(), 1.5, 1024, 48,
                                                           {.tail_budget = 1.0})),
      Error);
}

TEST_CASE("coefficient CSV exports") {
  std::ostringstream s, k;
  write_spectrum_csv(s, build_kick_spectrum(PotentialSpec::sine(), 0.0, 1));
  CHECK(s.str() == "l,S_l\n-1,0\n0,1\n1,0\n");
  write_kernel_csv(k, build_wigner_kernel(PotentialSpec::sine(), 0.0, 8, 1));
  const auto text = k.str();
  CHECK(text.rfind("j,x_j,l,value\n0,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 8 * 3);
}
