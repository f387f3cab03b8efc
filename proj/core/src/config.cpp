#include "kickwig/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kickwig/fft.hpp"

namespace kickwig {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
constexpr double pi = std::numbers::pi;

constexpr std::pair<Scenario, std::string_view> kScenarios[] = {
    {Scenario::resonance, "resonance"},
    {Scenario::antiresonance, "antiresonance"},
    {Scenario::sweep, "sweep"},
    {Scenario::localization, "localization"},
    {Scenario::dump_coefficients, "dump-coefficients"},
};

std::string join(const std::string& base, std::string_view key) {
  return base + "/" + std::string(key);
}

void reject_unknown(const json& obj, const std::string& at, std::initializer_list<std::string_view> keys) {
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (auto key : keys) known = known || key == k;
    if (!known) throw ConfigError(join(at, k), "unknown field");
  }
}

const json& require_object(const json& j, const std::string& at) {
  if (!j.is_object()) throw ConfigError(at, "expected an object");
  return j;
}

double get_number(const json& obj, const std::string& at, std::string_view key) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) throw ConfigError(join(at, key), "missing required number");
  if (!it->is_number()) throw ConfigError(join(at, key), "expected a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ConfigError(join(at, key), "must be finite");
  return v;
}

std::optional<double> opt_number(const json& obj, const std::string& at, std::string_view key) {
  if (!obj.contains(std::string(key))) return std::nullopt;
  return get_number(obj, at, key);
}

long long get_integer(const json& j, const std::string& at, long long lo, long long hi) {
  if (!j.is_number_integer()) throw ConfigError(at, "expected an integer");
  const long long v = j.get<long long>();
  if (v < lo || v > hi) {
    std::ostringstream msg;
    msg << "must be in [" << lo << ", " << hi << "], got " << v;
    throw ConfigError(at, msg.str());
  }
  return v;
}

Scenario parse_scenario(const json& j, const std::string& at) {
  if (!j.is_string()) throw ConfigError(at, "expected a string");
  const auto s = j.get<std::string>();
  for (const auto& [e, name] : kScenarios)
    if (name == s) return e;
  std::string valid;
  for (const auto& [e, name] : kScenarios) valid += (valid.empty() ? "" : ", ") + std::string(name);
  throw ConfigError(at, "unknown scenario '" + s + "' (valid: " + valid + ")");
}

PotentialKind parse_kind(const json& j, const std::string& at) {
  if (!j.is_string()) throw ConfigError(at, "expected a string");
  const auto s = j.get<std::string>();
  for (auto k : {PotentialKind::sine, PotentialKind::triangle, PotentialKind::table})
    if (to_string(k) == s) return k;
  throw ConfigError(at, "unknown potential '" + s + "' (valid: sine, triangle, table)");
}

void check_positive(double v, const char* field) {
  if (!(v > 0) || !std::isfinite(v))
    throw ConfigError(std::string("/physical/") + field, "must be positive");
}

int default_kicks(Scenario s) {
  switch (s) {
    case Scenario::sweep: return 100;
    case Scenario::localization: return 500;
    case Scenario::dump_coefficients: return 0;
    default: return 10;
  }
}

// Pointer of the field that sets k̄.
std::string kbar_pointer(const SimConfig& c) {
  return std::holds_alternative<ScaledParameters>(c.parameters) ? "/scaled/kbar" : "/physical/hbar";
}

}  // namespace

std::string_view to_string(Scenario scenario) noexcept {
  for (const auto& [e, name] : kScenarios)
    if (e == scenario) return name;
  return "unknown";
}

std::pair<double, double> scale_physical_parameters(double mass, double period, double wavenumber,
                                                    double hbar, double kick_strength) {
  check_positive(mass, "mass");
  check_positive(period, "period");
  check_positive(wavenumber, "wavenumber");
  check_positive(hbar, "hbar");
  check_positive(kick_strength, "kick_strength");
  const double factor = wavenumber * wavenumber * period / mass;
  return {kick_strength * factor, hbar * factor};
}

ResolvedParameters resolve_parameters(const SimConfig& c) {
  ResolvedParameters r;
  std::optional<double> kbar;
  if (const auto* s = std::get_if<ScaledParameters>(&c.parameters)) {
    if (!(s->K >= 0) || !std::isfinite(s->K)) throw ConfigError("/scaled/K", "must be >= 0");
    r.K = s->K;
    kbar = s->kbar;
    if (kbar && (!(*kbar > 0) || !std::isfinite(*kbar)))
      throw ConfigError("/scaled/kbar", "must be positive");
  } else {
    const auto& p = std::get<PhysicalParameters>(c.parameters);
    std::tie(r.K, r.kbar) =
        scale_physical_parameters(p.mass, p.period, p.wavenumber, p.hbar, p.kick_strength);
    kbar = r.kbar;
  }

  auto snap = [&](double unit, const char* what) {
    const double k = kbar.value_or(unit);
    const double m = std::round(k / unit);
    if (m < 1 || std::abs(k - m * unit) > 1e-9 * k)
      throw ConfigError(kbar_pointer(c), std::string("must give ") + what);
    return m;
  };
  switch (c.scenario) {
    case Scenario::resonance: {
      r.multiplier = static_cast<int>(snap(4.0 * pi, "kbar = 4*pi*m for resonance"));
      r.kbar = 4.0 * pi * r.multiplier;
      break;
    }
    case Scenario::antiresonance:
      if (snap(2.0 * pi, "kbar = 2*pi for antiresonance") != 1.0)
        throw ConfigError(kbar_pointer(c), "must give kbar = 2*pi for antiresonance");
      r.kbar = 2.0 * pi;
      break;
    case Scenario::localization:
      r.kbar = kbar.value_or(default_localization_kbar());
      break;
    case Scenario::sweep:
      if (kbar) throw ConfigError(kbar_pointer(c), "sweep derives kbar from ratios; remove it");
      r.kbar = 0.0;
      break;
    case Scenario::dump_coefficients:
      if (!kbar) throw ConfigError("/scaled/kbar", "dump-coefficients requires kbar");
      r.kbar = *kbar;
      break;
  }
  return r;
}

PotentialSpec load_potential(const SimConfig& c) {
  switch (c.potential.kind) {
    case PotentialKind::sine: return PotentialSpec::sine();
    case PotentialKind::triangle: return PotentialSpec::triangle();
    case PotentialKind::table: break;
  }
  if (!c.potential.table) throw ConfigError("/potential/table", "table potential needs a file");
  return PotentialSpec::from_table(read_table_file(*c.potential.table));
}

SimConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  require_object(doc, "");
  reject_unknown(doc, "", {"scenario", "potential", "scaled", "physical", "n_kicks", "ratios",
                           "truncation", "grid_points", "wigner_max_kicks", "tolerances",
                           "output_dir", "seed"});
  SimConfig c;
  if (!doc.contains("scenario")) throw ConfigError("/scenario", "missing required field");
  c.scenario = parse_scenario(doc["scenario"], "/scenario");

  if (doc.contains("potential")) {
    const auto& p = doc["potential"];
    if (p.is_string()) {
      c.potential.kind = parse_kind(p, "/potential");
    } else {
      require_object(p, "/potential");
      reject_unknown(p, "/potential", {"kind", "table"});
      if (!p.contains("kind")) throw ConfigError("/potential/kind", "missing required field");
      c.potential.kind = parse_kind(p["kind"], "/potential/kind");
      if (p.contains("table")) {
        if (!p["table"].is_string()) throw ConfigError("/potential/table", "expected a path string");
        std::filesystem::path t = p["table"].get<std::string>();
        c.potential.table = (t.is_absolute() ? t : base_dir / t).lexically_normal();
      }
    }
    if ((c.potential.kind == PotentialKind::table) != c.potential.table.has_value())
      throw ConfigError("/potential/table", "a table file is required for, and only for, kind 'table'");
  }

  const bool scaled = doc.contains("scaled");
  const bool physical = doc.contains("physical");
  if (scaled == physical)
    throw ConfigError(scaled ? "/physical" : "/scaled",
                      "exactly one of 'scaled' and 'physical' must be present");
  if (scaled) {
    const auto& s = require_object(doc["scaled"], "/scaled");
    reject_unknown(s, "/scaled", {"K", "kbar"});
    c.parameters = ScaledParameters{get_number(s, "/scaled", "K"), opt_number(s, "/scaled", "kbar")};
  } else {
    const auto& p = require_object(doc["physical"], "/physical");
    reject_unknown(p, "/physical", {"mass", "period", "wavenumber", "hbar", "kick_strength"});
    c.parameters = PhysicalParameters{get_number(p, "/physical", "mass"),
                                      get_number(p, "/physical", "period"),
                                      get_number(p, "/physical", "wavenumber"),
                                      get_number(p, "/physical", "hbar"),
                                      get_number(p, "/physical", "kick_strength")};
  }

  c.n_kicks = doc.contains("n_kicks")
                  ? static_cast<int>(get_integer(doc["n_kicks"], "/n_kicks", 0, 10'000'000))
                  : default_kicks(c.scenario);

  if (doc.contains("ratios")) {
    if (c.scenario != Scenario::sweep) throw ConfigError("/ratios", "only valid for the sweep scenario");
    const auto& rs = doc["ratios"];
    if (!rs.is_array() || rs.empty()) throw ConfigError("/ratios", "expected a non-empty array of [r, s]");
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const std::string at = "/ratios/" + std::to_string(i);
      if (!rs[i].is_array() || rs[i].size() != 2) throw ConfigError(at, "expected [r, s]");
      const int r = static_cast<int>(get_integer(rs[i][0], at + "/0", 1, 1'000'000));
      const int s = static_cast<int>(get_integer(rs[i][1], at + "/1", 1, 1'000'000));
      if (std::gcd(r, s) != 1) throw ConfigError(at, "r and s must be coprime");
      c.ratios.emplace_back(r, s);
    }
  } else if (c.scenario == Scenario::sweep) {
    c.ratios = {{1, 1}, {1, 2}, {3, 5}};
  }

  if (doc.contains("truncation"))
    c.truncation = static_cast<int>(get_integer(doc["truncation"], "/truncation", 1, 1 << 20));
  if (doc.contains("grid_points")) {
    c.grid_points = static_cast<std::size_t>(get_integer(doc["grid_points"], "/grid_points", 16, 1 << 22));
    if (!fft::is_pow2(c.grid_points)) throw ConfigError("/grid_points", "must be a power of two");
  }
  if (doc.contains("wigner_max_kicks"))
    c.wigner_max_kicks = static_cast<int>(get_integer(doc["wigner_max_kicks"], "/wigner_max_kicks", 0, 100'000));

  if (doc.contains("tolerances")) {
    const auto& t = require_object(doc["tolerances"], "/tolerances");
    reject_unknown(t, "/tolerances", {"sine", "triangle", "cross_check", "recurrence", "saturation", "rate"});
    auto read = [&](std::string_view key, double& field) {
      if (auto v = opt_number(t, "/tolerances", key)) {
        if (!(*v > 0)) throw ConfigError(join("/tolerances", key), "must be positive");
        field = *v;
      }
    };
    read("sine", c.tolerances.sine);
    read("triangle", c.tolerances.triangle);
    read("cross_check", c.tolerances.cross_check);
    read("recurrence", c.tolerances.recurrence);
    read("saturation", c.tolerances.saturation);
    read("rate", c.tolerances.rate);
  }

  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) throw ConfigError("/output_dir", "expected a path string");
    c.output_dir = std::filesystem::path(doc["output_dir"].get<std::string>());
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("/seed", "expected a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }

  resolve_parameters(c);
  load_potential(c);
  return c;
}

SimConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return parse_config_text(text.str(), std::filesystem::absolute(base));
}

std::string to_json(const SimConfig& c) {
  ordered_json doc;
  doc["scenario"] = std::string(to_string(c.scenario));
  ordered_json pot{{"kind", std::string(to_string(c.potential.kind))}};
  if (c.potential.table) pot["table"] = c.potential.table->string();
  doc["potential"] = pot;
  if (const auto* s = std::get_if<ScaledParameters>(&c.parameters)) {
    ordered_json sc{{"K", s->K}};
    if (s->kbar) sc["kbar"] = *s->kbar;
    doc["scaled"] = sc;
  } else {
    const auto& p = std::get<PhysicalParameters>(c.parameters);
    doc["physical"] = {{"mass", p.mass},
                       {"period", p.period},
                       {"wavenumber", p.wavenumber},
                       {"hbar", p.hbar},
                       {"kick_strength", p.kick_strength}};
  }
  doc["n_kicks"] = c.n_kicks;
  if (c.scenario == Scenario::sweep) {
    ordered_json rs = ordered_json::array();
    for (const auto& [r, s] : c.ratios) rs.push_back({r, s});
    doc["ratios"] = rs;
  }
  if (c.truncation) doc["truncation"] = *c.truncation;
  doc["grid_points"] = c.grid_points;
  doc["wigner_max_kicks"] = c.wigner_max_kicks;
  doc["tolerances"] = {{"sine", c.tolerances.sine},
                       {"triangle", c.tolerances.triangle},
                       {"cross_check", c.tolerances.cross_check},
                       {"recurrence", c.tolerances.recurrence},
                       {"saturation", c.tolerances.saturation},
                       {"rate", c.tolerances.rate}};
  if (c.output_dir) doc["output_dir"] = c.output_dir->string();
  doc["seed"] = c.seed;
  return doc.dump(2) + "\n";
}

ScenarioOptions scenario_options(const SimConfig& c) {
  ScenarioOptions o;
  o.grid_points = c.grid_points;
  o.wigner_max_kicks = c.wigner_max_kicks;
  o.sine_tolerance = c.tolerances.sine;
  o.triangle_tolerance = c.tolerances.triangle;
  o.cross_check_tolerance = c.tolerances.cross_check;
  o.recurrence_tolerance = c.tolerances.recurrence;
  o.saturation_fraction = c.tolerances.saturation;
  o.rate_fraction = c.tolerances.rate;
  o.truncation = c.truncation;
  return o;
}

}  // namespace kickwig
