#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "kickwig/experiments.hpp"

using namespace kickwig;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

const Verdict& find(const ScenarioResult& r, const std::string& name) {
  for (const auto& v : r.verdicts)
    if (v.name == name) return v;
  throw std::runtime_error("no verdict " + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("kickwig_experiments_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("resonance energy law") {
  const auto sine = PotentialSpec::sine();
  CHECK(resonance_energy(sine, 2.0, 10) == doctest::Approx(100.0));
  const auto r = run_resonance(sine, 2.0, 1, 10);
  REQUIRE(r.energies.size() == 10);
  CHECK(r.energies.back().energy == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(find(r, "energy_law").measured < 1e-8);
  CHECK(r.passed());
  CHECK(r.params.kbar == 4 * pi);
  CHECK(r.params.kappa == doctest::Approx(2.0 / (4 * pi)));
  CHECK(find(r, "wigner_state_cross_check").measured < 1e-8);
  CHECK(find(r, "wigner_closure").measured < 1e-8);
  CHECK(find(r, "distribution_closure").measured < 1e-8);
  REQUIRE(r.phase_space);
  CHECK(r.phase_space->kicks_applied() == 10);

  const auto zero = run_resonance(sine, 2.0, 1, 0);
  CHECK(zero.energies.empty());
  CHECK(zero.passed());

  const auto two = run_resonance(sine, 2.0, 2, 10);
  CHECK(two.params.kappa == doctest::Approx(2.0 / (8 * pi)));
  CHECK(two.energies.back().energy == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(two.passed());
  CHECK_THROWS_AS(run_resonance(sine, 2.0, 0, 10), std::invalid_argument);
}

TEST_CASE("resonance with corners is limited by the algebraic spectral tail") {
  const auto r = run_resonance(PotentialSpec::triangle(), 2.0, 1, 10);
  const auto spectrum = build_adaptive_kick_spectrum(PotentialSpec::triangle(), 2.0 / (4 * pi));
  const auto& law = find(r, "energy_law");
  CHECK(law.threshold == 1e-6);
  CHECK(law.measured < 0.5 / spectrum.truncation);
  CHECK(find(r, "distribution_closure").pass == true);
}

TEST_CASE("anti-resonance oscillation and recurrence") {
  const auto sine = PotentialSpec::sine();
  const auto r = run_antiresonance(sine, 2.0, 4);
  REQUIRE(r.energies.size() == 4);
  const double e1 = 0.5 * 0.5 * 4.0;
  CHECK(std::abs(r.energies[0].energy - e1) < 1e-9);
  CHECK(r.energies[1].energy < 1e-9);
  CHECK(std::abs(r.energies[2].energy - e1) < 1e-9);
  CHECK(r.energies[3].energy < 1e-9);
  CHECK(r.passed());
  CHECK(find(r, "wigner_recurrence").measured < 1e-10);
  CHECK(find(r, "state_recurrence").measured < 1e-10);

  const auto t = run_antiresonance(PotentialSpec::triangle(), 1.0, 2);
  const auto& wr = find(t, "wigner_recurrence");
  CHECK(wr.pass == false);
  CHECK(wr.measured < 1e-6);
  CHECK(find(t, "state_recurrence").pass == true);
  CHECK(find(t, "energy_even").pass == true);
}

TEST_CASE("growth exponent fit") {
  std::vector<EnergyRecord> quad, flat, alternating;
  for (int n = 1; n <= 100; ++n) {
    quad.push_back({n, 3.0 * n * n, 0});
    flat.push_back({n, 7.0, 0});
    alternating.push_back({n, n % 2 ? 1.0 : 0.0, 0});
  }
  CHECK(fit_growth_exponent(quad) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(fit_growth_exponent(flat)) < 1e-12);
  CHECK(std::abs(fit_growth_exponent(alternating)) < 1e-12);
  CHECK(std::isnan(fit_growth_exponent({})));
}

TEST_CASE("rational sweep") {
  const auto results = run_ladder_sweep(PotentialSpec::sine(), 2.0, {{1, 1}, {1, 2}, {3, 5}}, 100);
  REQUIRE(results.size() == 3);
  const double e11 = find(results[0], "growth_exponent").measured;
  const double e12 = find(results[1], "growth_exponent").measured;
  const double e35 = find(results[2], "growth_exponent").measured;
  CHECK(std::abs(e11 - 2.0) < 0.05);
  CHECK(std::abs(e12) < 0.05);
  CHECK(std::isfinite(e35));
  CHECK_FALSE(find(results[2], "growth_exponent").pass.has_value());
  CHECK(results[2].params.kbar == doctest::Approx(4 * pi * 3 / 5));
  CHECK(results[1].params.s == 2);
  CHECK_THROWS_AS(run_ladder_sweep(PotentialSpec::sine(), 2.0, {{2, 4}}, 10), std::invalid_argument);
  CHECK_THROWS_AS(run_ladder_sweep(PotentialSpec::sine(), 2.0, {{0, 1}}, 10), std::invalid_argument);
}

TEST_CASE("localization verdicts") {
  const auto sine = PotentialSpec::sine();
  const double kbar = default_localization_kbar();
  CHECK(kbar == doctest::Approx(2.86775).epsilon(1e-5));
  const auto loc = run_localization(sine, 5.0, kbar, 500);
  CHECK(find(loc, "saturation").pass == true);
  CHECK(find(loc, "late_rate").pass == true);
  CHECK(loc.passed());
  CHECK(find(loc, "saturation").note.find("stand-in") != std::string::npos);

  const auto zero = run_localization(sine, 0.0, kbar, 50);
  for (const auto& r : zero.energies) CHECK(r.energy == 0.0);
  CHECK(zero.passed());

  const auto control = run_localization(sine, 5.0, 4 * pi, 500);
  CHECK(find(control, "saturation").pass == false);
  CHECK(find(control, "late_rate").pass == false);
  CHECK_FALSE(control.passed());
}

TEST_CASE("export writes four deterministic files") {
  const auto dir = scratch("export");
  const auto files = export_results(ScenarioResult{}, dir);
  REQUIRE(files.size() == 4);
  CHECK(slurp(files[0]) == "N,E,tail_norm\n");
  CHECK(slurp(files[1]) == "l,p,weight\n");
  CHECK(slurp(files[2]) == "m,p_m,j,x_j,weight\n");
  const auto manifest = nlohmann::json::parse(slurp(files[3]));
  CHECK(manifest["verdicts"].empty());
  CHECK(manifest["files"].size() == 3);

  const auto r = run_resonance(PotentialSpec::sine(), 2.0, 1, 10);
  const auto a = export_results(r, dir / "a");
  const auto b = export_results(r, dir / "b");
  REQUIRE(a.size() == 4);
  const auto energy = slurp(a[0]);
  CHECK(std::count(energy.begin(), energy.end(), '\n') == 11);
  for (std::size_t i = 0; i < 4; ++i) CHECK(slurp(a[i]) == slurp(b[i]));
  const auto again = run_resonance(PotentialSpec::sine(), 2.0, 1, 10);
  const auto c = export_results(again, dir / "c");
  for (std::size_t i = 0; i < 4; ++i) CHECK(slurp(a[i]) == slurp(c[i]));

  const auto m = nlohmann::json::parse(slurp(a[3]));
  CHECK(m["scenario"] == "resonance");
  CHECK(m["params"]["n_kicks"] == 10);
  CHECK(m["verdicts"][0]["name"] == "energy_law");
  CHECK(m["verdicts"][0]["pass"] == true);

  std::ofstream(dir / "blocker") << "x";
  CHECK_THROWS_AS(export_results(r, dir / "blocker" / "sub"), Error);
}
