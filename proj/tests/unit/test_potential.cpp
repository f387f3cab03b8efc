#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "kickwig/potential.hpp"
#include "random.hpp"

using namespace kickwig;
constexpr double pi = std::numbers::pi;

TEST_CASE("eval examples") {
  const auto s = PotentialSpec::sine();
  CHECK(s.value(0.0) == 0.0);
  CHECK(s.value(pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(PotentialSpec::triangle().value(pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(PotentialSpec::triangle().value(-pi / 2) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(PotentialSpec::triangle().value(pi / 2 + 2 * pi) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("force examples") {
  const auto s = PotentialSpec::sine();
  CHECK(s.force(0.0) == doctest::Approx(-1.0));
  CHECK(s.force(pi) == doctest::Approx(1.0));
  const auto t = PotentialSpec::triangle();
  // Oracle: central difference of the closed form away from corners.
  const double h = 1e-6;
  const double fd = -(t.value(h) - t.value(-h)) / (2 * h);
  CHECK(t.force(0.0) == doctest::Approx(-2.0 / pi).epsilon(1e-12));
  CHECK(fd == doctest::Approx(-2.0 / pi).epsilon(1e-9));
  CHECK(t.force(pi) == doctest::Approx(2.0 / pi));
  CHECK(t.force(pi / 2) == 0.0);  // corner: mean of one-sided slopes
}

TEST_CASE("mean square force examples") {
  CHECK(PotentialSpec::sine().mean_square_force() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(PotentialSpec::triangle().mean_square_force() == doctest::Approx(4.0 / (pi * pi)).epsilon(1e-12));
  CHECK(mean_square_force(PotentialSpec::from_table(std::vector<double>(64, 0.0)), 64) == 0.0);
  CHECK_THROWS_AS(mean_square_force(PotentialSpec::sine(), 8), std::invalid_argument);
  CHECK_THROWS_AS(mean_square_force(PotentialSpec::sine(), 33), std::invalid_argument);
}

TEST_CASE("mean square force converges under doubling") {
  for (const auto& p : {PotentialSpec::sine(), PotentialSpec::triangle()}) {
    double prev = mean_square_force(p, 16);
    for (std::size_t n = 32; n <= 4096; n *= 2) {
      const double cur = mean_square_force(p, n);
      if (n >= 64) CHECK(std::abs(cur - prev) < 1e-10);
      prev = cur;
    }
  }
}

TEST_CASE("validate_symmetries examples") {
  CHECK(validate_symmetries(PotentialSpec::sine(), 1024, 1e-12).passed());
  CHECK(validate_symmetries(PotentialSpec::triangle(), 1024, 1e-12).passed());

  std::vector<double> shifted(256), cosine(256);
  for (std::size_t j = 0; j < 256; ++j) {
    const double x = 2 * pi * static_cast<double>(j) / 256.0;
    shifted[j] = std::sin(x) + 0.1;
    cosine[j] = std::cos(x);
  }
  const auto off = validate_symmetries(PotentialSpec::from_table_unchecked(shifted), 256);
  CHECK_FALSE(off.passed());
  CHECK(off.oddness == doctest::Approx(0.2).epsilon(1e-9));
  const auto even = validate_symmetries(PotentialSpec::from_table_unchecked(cosine), 256);
  CHECK_FALSE(even.passed());
  CHECK(even.oddness > 1.0);
  CHECK_THROWS_AS(PotentialSpec::from_table(shifted), SymmetryError);
  CHECK_THROWS_AS(validate_symmetries(PotentialSpec::sine(), 32), std::invalid_argument);
}

TEST_CASE("shipped potentials meet the symmetry bounds at 1024 points") {
  for (const auto& p : {PotentialSpec::sine(), PotentialSpec::triangle()}) {
    const auto r = validate_symmetries(p, 1024, 1e-12);
    CHECK(r.oddness < 1e-12);
    CHECK(r.half_period < 1e-12);
  }
}

TEST_CASE("force matches the finite difference of eval") {
  testing::Gen gen(3);
  const auto table = PotentialSpec::from_table(gen.odd_table(64, 5));
  const double h = 1e-4;
  for (const auto& p : {PotentialSpec::sine(), PotentialSpec::triangle(), table}) {
    for (int i = 0; i < 200; ++i) {
      const double x = gen.uniform(-pi, pi);
      if (p.has_corners() && std::abs(std::abs(x) - pi / 2) < 1e-3) continue;
      const double fd = -(p.value(x + h) - p.value(x - h)) / (2 * h);
      const double f = p.force(x);
      CHECK(std::abs(fd - f) <= 1e-6 * std::max(1.0, std::abs(f)));
    }
  }
}

TEST_CASE("table potential is its trigonometric interpolant") {
  std::vector<double> v(32);
  for (std::size_t j = 0; j < 32; ++j) v[j] = std::sin(2 * pi * static_cast<double>(j) / 32.0);
  const auto p = PotentialSpec::from_table(v);
  CHECK(p.kind() == PotentialKind::table);
  for (double x : {0.1, 1.3, -2.7, 3.1})  {
    CHECK(p.value(x) == doctest::Approx(std::sin(x)).epsilon(1e-13));
    CHECK(p.force(x) == doctest::Approx(-std::cos(x)).epsilon(1e-13));
  }
  CHECK(p.mean_square_force() == doctest::Approx(0.5).epsilon(1e-13));
  const auto s = p.sample_values(128);
  const auto ref = PotentialSpec::sine().sample_values(128);
  for (std::size_t j = 0; j < 128; ++j) CHECK(s[j] == doctest::Approx(ref[j]).epsilon(1e-13));
  const auto coarse = p.sample_values(8);
  CHECK(coarse[2] == doctest::Approx(std::sin(-pi / 2)).epsilon(1e-13));
  CHECK(p == PotentialSpec::from_table(v));
  CHECK_FALSE(p == PotentialSpec::sine());
}

TEST_CASE("read_table_file") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "kickwig_potential_test";
  fs::create_directories(dir);
  const auto good = dir / "v.txt";
  {
    std::ofstream f(good);
    f << "# sine table\n";
    for (int j = 15; j >= 0; --j) f << j << ' ' << std::sin(2 * pi * j / 16.0) << '\n';
  }
  const auto v = read_table_file(good);
  REQUIRE(v.size() == 16);
  CHECK(v[4] == doctest::Approx(1.0));
  const auto dup = dir / "dup.txt";
  {
    std::ofstream f(dup);
    f << "0 0\n0 1\n";
  }
  CHECK_THROWS_AS(read_table_file(dup), Error);
  CHECK_THROWS_AS(read_table_file(dir / "missing.txt"), Error);
  const auto odd_size = dir / "n3.txt";
  {
    std::ofstream f(odd_size);
    f << "0 0\n1 1\n2 -1\n";
  }
  CHECK_THROWS_AS(read_table_file(odd_size), Error);
}
