#include "kickwig/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "kickwig/csv.hpp"

namespace kickwig {

namespace {

constexpr double pi = std::numbers::pi;

struct Run {
  KickSpectrum spectrum;
  LadderState state;
  std::vector<EnergyRecord> energies;
  std::optional<WignerField> field;  // propagated, only when N <= wigner cap
  double cross_check = 0.0;
};

using StepHook = std::function<void(int, const LadderState&, const WignerField*)>;

KickSpectrum make_spectrum(const PotentialSpec& potential, double kappa,
                           const ScenarioOptions& options) {
  if (options.truncation) return build_kick_spectrum(potential, kappa, *options.truncation);
  return build_adaptive_kick_spectrum(potential, kappa);
}

Run simulate(const PotentialSpec& potential, double K, double kbar, int n_kicks,
             const ScenarioOptions& options, const StepHook& hook = {}) {
  if (n_kicks < 0) throw std::invalid_argument("scenario: n_kicks must be >= 0");
  if (!std::isfinite(K) || K < 0) throw std::invalid_argument("scenario: K must be >= 0");
  const double kappa = K / kbar;
  Run run{make_spectrum(potential, kappa, options), init_ladder(1, kbar), {}, {}, 0.0};
  const bool wigner = n_kicks <= options.wigner_max_kicks;
  std::optional<WignerKernel> kernel;
  if (wigner) {
    kernel.emplace(build_adaptive_wigner_kernel(potential, kappa, options.grid_points));
    run.field.emplace(init_wigner(options.grid_points, 2, kbar));
  }
  if (hook) hook(0, run.state, run.field ? &*run.field : nullptr);
  run.energies.reserve(static_cast<std::size_t>(n_kicks));
  for (int n = 1; n <= n_kicks; ++n) {
    run.state = kick_step(free_step(std::move(run.state)), run.spectrum, options.ladder);
    run.energies.push_back({n, mean_energy(run.state), run.state.tail_norm()});
    if (run.field) {
      run.field = wigner_floquet_step(std::move(*run.field), *kernel, options.wigner);
      run.cross_check = std::max(run.cross_check, compare_with_state(*run.field, run.state));
    }
    if (hook) hook(n, run.state, run.field ? &*run.field : nullptr);
  }
  return run;
}

ScenarioParams make_params(const PotentialSpec& potential, double K, double kbar, int n_kicks,
                           const ScenarioOptions& options) {
  ScenarioParams p;
  p.potential = std::string(potential.name());
  p.K = K;
  p.kbar = kbar;
  p.kappa = K / kbar;
  p.n_kicks = n_kicks;
  p.grid_points = options.grid_points;
  return p;
}

Verdict bounded(std::string name, double measured, double threshold, std::string note = {}) {
  return {std::move(name), measured, threshold, measured < threshold, std::move(note)};
}

void finish(ScenarioResult& result, Run& run, const PotentialSpec& potential,
            const ScenarioOptions& options) {
  if (run.field) {
    const double tol = potential.has_corners()
                           ? std::max(options.cross_check_tolerance, options.triangle_tolerance)
                           : options.cross_check_tolerance;
    result.verdicts.push_back(bounded("wigner_state_cross_check", run.cross_check, tol,
                                      "max |W - W[psi]| over all kicks"));
    result.phase_space = std::move(run.field);
  } else {
    result.phase_space = wigner_from_state(run.state, options.grid_points);
  }
  result.energies = std::move(run.energies);
  result.distribution = momentum_distribution(run.state);
}

double relative(double measured, double expected) {
  const double err = std::abs(measured - expected);
  return expected != 0.0 ? err / std::abs(expected) : err;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

bool ScenarioResult::passed() const noexcept {
  return std::none_of(verdicts.begin(), verdicts.end(),
                      [](const Verdict& v) { return v.pass && !*v.pass; });
}

double resonance_energy(const PotentialSpec& potential, double K, int n_kicks) {
  const double n = n_kicks;
  return 0.5 * potential.mean_square_force() * K * K * n * n;
}

double fit_growth_exponent(const std::vector<EnergyRecord>& energies) {
  if (energies.empty()) return std::numeric_limits<double>::quiet_NaN();
  const int last = energies.back().kick;
  const int first = std::max(16, (last + 1) / 2);
  double emax = 0.0;
  for (const auto& r : energies) emax = std::max(emax, r.energy);
  std::vector<double> x, y;
  for (const auto& r : energies) {
    if (r.kick < first || r.energy <= 1e-12 * emax || r.energy <= 0) continue;
    x.push_back(std::log(static_cast<double>(r.kick)));
    y.push_back(std::log(r.energy));
  }
  return fit_slope(x, y);
}

double default_localization_kbar() {
  const double phi = std::numbers::phi;
  return 4.0 * pi / (4.0 + 1.0 / (2.0 + 1.0 / phi));
}

ScenarioResult run_resonance(const PotentialSpec& potential, double K, int multiplier, int n_kicks,
                             const ScenarioOptions& options) {
  if (multiplier < 1) throw std::invalid_argument("run_resonance: multiplier must be >= 1");
  const double kbar = 4.0 * pi * multiplier;
  auto run = simulate(potential, K, kbar, n_kicks, options);
  const double tol = options.tolerance_for(potential);

  ScenarioResult result;
  result.scenario = "resonance";
  result.params = make_params(potential, K, kbar, n_kicks, options);

  double law = 0.0;
  for (const auto& r : run.energies)
    law = std::max(law, relative(r.energy, resonance_energy(potential, K, r.kick)));
  result.verdicts.push_back(bounded("energy_law", law, tol, "max relative |E_N - <F^2>K^2N^2/2|"));

  const double nk = result.params.kappa * n_kicks;
  if (run.field) {
    KernelOptions report_only;
    report_only.tail_budget = std::numeric_limits<double>::infinity();
    const auto closure = build_adaptive_wigner_kernel(potential, nk, options.grid_points, report_only);
    const int r = std::max(run.field->radius(), closure.truncation());
    double dev = 0.0;
    for (int m = -r; m <= r; ++m)
      for (std::size_t j = 0; j < options.grid_points; ++j)
        dev = std::max(dev, std::abs(run.field->at(m, j) - closure.at(j, -m) / (2.0 * pi)));
    result.verdicts.push_back(bounded("wigner_closure", dev, tol, "slices vs kernel at N*kappa"));
  }

  const auto target = build_adaptive_kick_spectrum(potential, nk);
  const int span = std::max(run.state.truncation(), target.truncation);
  double dist = 0.0;
  for (int l = -span; l <= span; ++l)
    dist = std::max(dist, std::abs(run.state.weight(l) - target[l] * target[l]));
  result.verdicts.push_back(
      bounded("distribution_closure", dist, tol, "max |w_l - S_l(N*kappa)^2|"));

  finish(result, run, potential, options);
  return result;
}

ScenarioResult run_antiresonance(const PotentialSpec& potential, double K, int n_kicks,
                                 const ScenarioOptions& options) {
  const double kbar = 2.0 * pi;
  const auto psi0 = init_ladder(1, kbar);
  const auto w0 = init_wigner(options.grid_points, 0, kbar);
  double fidelity_loss = 0.0;
  double wigner_dev = 0.0;
  auto hook = [&](int n, const LadderState& state, const WignerField* field) {
    if (n == 0 || n % 2 != 0) return;
    fidelity_loss = std::max(fidelity_loss, 1.0 - std::abs(overlap(psi0, state)));
    if (field) wigner_dev = std::max(wigner_dev, max_deviation(*field, w0));
  };
  auto run = simulate(potential, K, kbar, n_kicks, options, hook);
  const double tol = options.tolerance_for(potential);
  const double e1 = resonance_energy(potential, K, 1);

  ScenarioResult result;
  result.scenario = "antiresonance";
  result.params = make_params(potential, K, kbar, n_kicks, options);

  double even = 0.0, odd = 0.0;
  for (const auto& r : run.energies) {
    if (r.kick % 2 == 0)
      even = std::max(even, r.energy);
    else
      odd = std::max(odd, relative(r.energy, e1));
  }
  result.verdicts.push_back(
      bounded("energy_even", even, tol * std::max(1.0, e1), "max E_2n"));
  result.verdicts.push_back(
      bounded("energy_odd", odd, tol, "max relative |E_2n+1 - <F^2>K^2/2|"));
  result.verdicts.push_back(bounded("state_recurrence", fidelity_loss,
                                    options.recurrence_tolerance, "max 1 - |<psi_0|psi_2n>|"));
  if (run.field)
    result.verdicts.push_back(bounded("wigner_recurrence", wigner_dev,
                                      options.recurrence_tolerance, "max |W_2n - W_0|"));
  finish(result, run, potential, options);
  return result;
}

std::vector<ScenarioResult> run_ladder_sweep(const PotentialSpec& potential, double K,
                                             const std::vector<std::pair<int, int>>& ratios,
                                             int n_kicks, const ScenarioOptions& options) {
  for (const auto& [r, s] : ratios) {
    if (r < 1 || s < 1 || std::gcd(r, s) != 1) {
      std::ostringstream msg;
      msg << "run_ladder_sweep: ratio " << r << '/' << s << " must be coprime positive integers";
      throw std::invalid_argument(msg.str());
    }
  }
  auto one = [&](std::pair<int, int> ratio) {
    const double kbar = 4.0 * pi * ratio.first / ratio.second;
    auto run = simulate(potential, K, kbar, n_kicks, options);
    ScenarioResult result;
    result.scenario = "sweep";
    result.params = make_params(potential, K, kbar, n_kicks, options);
    result.params.r = ratio.first;
    result.params.s = ratio.second;
    result.verdicts.push_back({"growth_exponent", fit_growth_exponent(run.energies), std::nullopt,
                               std::nullopt, "log E vs log N, last half, N >= 16; reported only"});
    finish(result, run, potential, options);
    return result;
  };

  const unsigned hw = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<ScenarioResult> results(ratios.size());
  std::size_t next = 0;
  while (next < ratios.size()) {
    std::vector<std::future<ScenarioResult>> batch;
    for (unsigned t = 0; t < hw && next < ratios.size(); ++t, ++next)
      batch.push_back(std::async(std::launch::async, one, ratios[next]));
    const std::size_t base = next - batch.size();
    for (std::size_t i = 0; i < batch.size(); ++i) results[base + i] = batch[i].get();
  }
  return results;
}

ScenarioResult run_localization(const PotentialSpec& potential, double K, double kbar, int n_kicks,
                                const ScenarioOptions& options) {
  auto run = simulate(potential, K, kbar, n_kicks, options);

  ScenarioResult result;
  result.scenario = "localization";
  result.params = make_params(potential, K, kbar, n_kicks, options);

  const int from = (n_kicks + 1) / 2;
  double saturation = 0.0;
  std::vector<double> xs, ys;
  for (const auto& r : run.energies) {
    if (r.kick < from) continue;
    const double pred = resonance_energy(potential, K, r.kick);
    saturation = std::max(saturation, pred > 0 ? r.energy / pred : r.energy);
    xs.push_back(r.kick);
    ys.push_back(r.energy);
  }
  const double initial = run.energies.empty() ? 0.0 : run.energies.front().energy;
  double slope = fit_slope(xs, ys);
  if (std::isnan(slope)) slope = 0.0;
  const double rate = initial > 0 ? slope / initial : slope;

  const std::string stand_in = "localization stand-in; engineering threshold";
  result.verdicts.push_back({"initial_rate", initial, std::nullopt, std::nullopt, "E_1 per kick"});
  result.verdicts.push_back(bounded("saturation", saturation, options.saturation_fraction,
                                    "max E_N / (<F^2>K^2N^2/2) over [N/2, N]; " + stand_in));
  result.verdicts.push_back(bounded("late_rate", rate, options.rate_fraction,
                                    "LSQ slope of E over [N/2, N] / E_1; " + stand_in));
  finish(result, run, potential, options);
  return result;
}

std::vector<std::filesystem::path> export_results(const ScenarioResult& result,
                                                  const std::filesystem::path& directory,
                                                  std::optional<std::string> stem) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error("cannot create output directory " + directory.string() + ": " + ec.message());
  const std::string base = stem.value_or(result.scenario.empty() ? "result" : result.scenario);

  const fs::path energy = directory / (base + "_energy.csv");
  const fs::path dist = directory / (base + "_distribution.csv");
  const fs::path phase = directory / (base + "_phase_space.csv");
  const fs::path manifest = directory / (base + "_manifest.json");

  {
    auto out = csv::open_output(energy);
    write_trajectory_csv(out, result.energies);
  }
  {
    auto out = csv::open_output(dist);
    write_distribution_csv(out, result.distribution, result.params.kbar);
  }
  {
    auto out = csv::open_output(phase);
    if (result.phase_space)
      write_phase_space_csv(out, *result.phase_space);
    else
      out << "m,p_m,j,x_j,weight\n";
  }

  using nlohmann::ordered_json;
  auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
  ordered_json params{{"potential", result.params.potential},
                      {"K", num(result.params.K)},
                      {"kbar", num(result.params.kbar)},
                      {"kappa", num(result.params.kappa)},
                      {"n_kicks", result.params.n_kicks},
                      {"grid_points", result.params.grid_points}};
  if (result.params.r) params["r"] = *result.params.r;
  if (result.params.s) params["s"] = *result.params.s;
  ordered_json verdicts = ordered_json::array();
  for (const auto& v : result.verdicts) {
    verdicts.push_back({{"name", v.name},
                        {"measured", num(v.measured)},
                        {"threshold", v.threshold ? num(*v.threshold) : ordered_json(nullptr)},
                        {"pass", v.pass ? ordered_json(*v.pass) : ordered_json(nullptr)},
                        {"note", v.note}});
  }
  ordered_json doc{{"scenario", result.scenario},
                   {"params", params},
                   {"verdicts", verdicts},
                   {"files",
                    {energy.filename().string(), dist.filename().string(),
                     phase.filename().string()}}};
  {
    auto out = csv::open_output(manifest);
    out << doc.dump(2) << '\n';
    if (!out) throw Error("write failed: " + manifest.string());
  }
  return {energy, dist, phase, manifest};
}

}  // namespace kickwig
