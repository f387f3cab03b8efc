#include "dispatch.hpp"

#include <cstdlib>
#include <ostream>

#include "kickwig/coefficients.hpp"
#include "kickwig/csv.hpp"
#include "kickwig/experiments.hpp"

namespace kickwig::cli {

namespace {

void report(std::ostream& out, const ScenarioResult& r, const std::string& label) {
  for (const auto& v : r.verdicts) {
    out << label << ' ' << v.name << ' ' << csv::format_real(v.measured);
    if (v.threshold) out << " < " << csv::format_real(*v.threshold);
    if (v.pass)
      out << (*v.pass ? " PASS" : " FAIL");
    else
      out << " INFO";
    out << '\n';
  }
}

}  // namespace

std::filesystem::path output_root(const SimConfig& config) {
  if (config.output_dir) return *config.output_dir;
  if (const char* env = std::getenv("KW_OUTPUT_DIR"); env && *env) return env;
  return "kickwig-out";
}

int main_dispatch(const SimConfig& config, std::ostream& out) {
  if (config.scenario == Scenario::dump_coefficients) return dump_coefficients(config, out);
  const auto potential = load_potential(config);
  const auto params = resolve_parameters(config);
  const auto options = scenario_options(config);
  const auto dir = output_root(config);

  std::vector<std::pair<ScenarioResult, std::string>> results;
  switch (config.scenario) {
    case Scenario::resonance:
      results.emplace_back(run_resonance(potential, params.K, params.multiplier, config.n_kicks, options),
                           "resonance");
      break;
    case Scenario::antiresonance:
      results.emplace_back(run_antiresonance(potential, params.K, config.n_kicks, options),
                           "antiresonance");
      break;
    case Scenario::localization:
      results.emplace_back(run_localization(potential, params.K, params.kbar, config.n_kicks, options),
                           "localization");
      break;
    case Scenario::sweep:
      for (auto& r : run_ladder_sweep(potential, params.K, config.ratios, config.n_kicks, options)) {
        std::string stem = "sweep_r" + std::to_string(*r.params.r) + "_s" + std::to_string(*r.params.s);
        results.emplace_back(std::move(r), std::move(stem));
      }
      break;
    case Scenario::dump_coefficients:
      break;
  }

  bool pass = true;
  for (const auto& [r, stem] : results) {
    export_results(r, dir, stem);
    report(out, r, stem);
    pass = pass && r.passed();
  }
  out << "wrote results to " << dir.string() << '\n';
  return pass ? ok : verdict_failed;
}

int dump_coefficients(const SimConfig& config, std::ostream& out) {
  const auto potential = load_potential(config);
  const auto params = resolve_parameters(config);
  if (params.kbar <= 0) throw ConfigError("/scaled/kbar", "dump-coefficients requires kbar");
  const auto dir = output_root(config);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());

  const double kappa = params.kappa();
  const auto spectrum = config.truncation ? build_kick_spectrum(potential, kappa, *config.truncation)
                                          : build_adaptive_kick_spectrum(potential, kappa);
  const auto kernel = build_adaptive_wigner_kernel(potential, kappa, config.grid_points);
  const auto spath = dir / "spectrum.csv";
  const auto kpath = dir / "kernel.csv";
  {
    auto f = csv::open_output(spath);
    write_spectrum_csv(f, spectrum);
  }
  {
    auto f = csv::open_output(kpath);
    write_kernel_csv(f, kernel);
  }
  out << "kappa " << csv::format_real(kappa) << " L " << spectrum.truncation << " tail "
      << csv::format_real(spectrum.tail_norm) << '\n'
      << "kernel M " << kernel.grid_points() << " L " << kernel.truncation() << " tail "
      << csv::format_real(kernel.tail()) << '\n'
      << "wrote " << spath.string() << " and " << kpath.string() << '\n';
  return ok;
}

int validate(const SimConfig& config, std::ostream& out) {
  const auto potential = load_potential(config);
  const auto params = resolve_parameters(config);
  const auto sym = validate_symmetries(potential, 1024);
  out << "scenario " << to_string(config.scenario) << '\n'
      << "potential " << potential.name() << " <F^2> " << csv::format_real(potential.mean_square_force())
      << '\n'
      << "symmetry periodicity " << csv::format_real(sym.periodicity) << " oddness "
      << csv::format_real(sym.oddness) << " half_period " << csv::format_real(sym.half_period)
      << (sym.passed() ? " PASS" : " FAIL") << '\n'
      << "K " << csv::format_real(params.K);
  if (params.kbar > 0) out << " kbar " << csv::format_real(params.kbar) << " kappa " << csv::format_real(params.kappa());
  out << '\n' << "n_kicks " << config.n_kicks << " grid_points " << config.grid_points << '\n';
  return sym.passed() ? ok : error;
}

int run_command(const std::string& command, const std::filesystem::path& path, std::ostream& out,
                std::ostream& err) {
  try {
    const auto config = parse_config(path);
    if (command == "run") return main_dispatch(config, out);
    if (command == "dump-coefficients") return dump_coefficients(config, out);
    if (command == "validate") return validate(config, out);
    err << "unknown command " << command << '\n';
    return error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return error;
  }
}

}  // namespace kickwig::cli
