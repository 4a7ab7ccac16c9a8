#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cqed/scenario/config.hpp"

namespace cqed::scenario {

struct PresetInfo {
  const char* name;
  const char* summary;
};

inline const std::vector<PresetInfo>& preset_list() {
  static const std::vector<PresetInfo> list{
      {"fig2a", "vacuum Rabi doublet without the NAMR, uniform grid over both peaks"},
      {"fig2b", "weak coupling, zeta^2/delta = 0.2 MHz, cases N C Q (n_c = 1)"},
      {"fig3", "strong coupling, zeta^2/delta = 10 MHz, cases N C Q (n_c = 1)"},
      {"paper-weak", "zeta = 30 MHz at delta = 5 GHz (eta = 6e-3), cases N C Q"},
      {"paper-strong", "same parameters as fig3"},
      {"bath-check", "lambda = 5 MHz doublet for the discretised-bath oracle (mode_count 2000)"},
      {"reference-circuit", "couplings derived from the reference device (zeta ~ 30 MHz, V_rms ~ 2 uV)"},
  };
  return list;
}

/// Shared parameter set: nu = omega0 = 6 GHz, omega_R = 1 GHz, lambda = 500 MHz,
/// gc = 0.6 MHz (nu / Q_nu, Q_nu = 1e4), gd = 0.6 gc, n_c = 1.
inline ScenarioConfig figure_base() {
  ScenarioConfig c;
  c.nu = 6000;
  c.omega0 = 6000;
  c.omega_R = 1000;
  c.lambda = 500;
  c.damping = DampingParams::from_quality(6000, 1e4, 0.6);
  c.n_c = 1;
  return c;
}

inline ScenarioConfig preset(const std::string& name) {
  ScenarioConfig c = figure_base();
  c.name = name;
  if (name == "fig2a") {
    c.cases = {CaseKind::N};
    c.zeta = 0.0;
    c.grid.mode = GridSpec::Mode::Uniform;
    c.grid.lo = 2490;
    c.grid.hi = 3510;
    c.grid.points = 102001;  // 0.01 MHz spacing
    c.plot = {2490, 3510, 20401};
  } else if (name == "fig2b") {
    c.stark = 0.2;
    c.plot = {2498.5, 2501.5, 6001};
    c.oracle.position_tolerance = 0.02;
    c.oracle.differential = true;
  } else if (name == "fig3" || name == "paper-strong") {
    c.stark = 10.0;
    c.plot = {2494, 2512, 18001};
  } else if (name == "paper-weak") {
    c.zeta = 30.0;
    c.plot = {2498.5, 2501.5, 6001};
    c.oracle.position_tolerance = 0.02;
    c.oracle.differential = true;
  } else if (name == "bath-check") {
    // A 10 MHz doublet keeps 50x the feature scale inside a 500 MHz bath
    // while the 4 us recurrence time stays above the decay time.
    c.cases = {CaseKind::N};
    c.lambda = 5;
    c.zeta = 0.0;
    c.grid.window = 9.6;
    c.grid.points = 4000;
    c.oracle.markov = true;
    c.oracle.discretized = true;
    c.oracle.mode_count = 2000;
    c.oracle.half_bandwidth = 250;
    c.oracle.t_max = 3.6;
    c.oracle.sample_dt = 1e-3;
    c.oracle.points = 1000;
    c.plot = {2990, 3010, 4001};
  } else if (name == "reference-circuit") {
    c.from_circuit = true;
    c.circuit = reference_circuit();
    c.plot = {0, 0, 4001};
  } else {
    throw ConfigError("unknown preset '" + name + "'", 0, "preset");
  }
  return c;
}

inline bool is_preset(const std::string& name) {
  for (const auto& p : preset_list())
    if (name == p.name) return true;
  return false;
}

/// Reads a scenario file. `preset = NAME` in [scenario] seeds every value
/// not given in the file; otherwise the shared figure parameter set is used.
inline ScenarioConfig load_scenario(std::istream& in, const std::vector<std::string>& skip = {},
                                    detail::Parsed* tokens = nullptr) {
  auto parsed = detail::tokenize(in);
  ScenarioConfig base = figure_base();
  if (auto it = parsed.sections.find("scenario"); it != parsed.sections.end()) {
    for (const auto& l : it->second)
      if (l.key == "preset") {
        if (!is_preset(l.value)) throw ConfigError("unknown preset '" + l.value + "'", l.number, l.key);
        base = preset(l.value);
      }
  }
  auto cfg = apply_sections(parsed, base, skip);
  cfg.validate();
  if (tokens) *tokens = std::move(parsed);
  return cfg;
}

inline ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  auto cfg = load_scenario(in);
  return cfg;
}

/// Scenario by preset name, or from a file when `ref` names one.
inline ScenarioConfig resolve_scenario(const std::string& ref) {
  if (is_preset(ref)) {
    auto c = preset(ref);
    c.validate();
    return c;
  }
  if (std::filesystem::exists(ref)) {
    auto c = load_scenario_file(ref);
    if (c.name == "scenario") c.name = std::filesystem::path(ref).stem().string();
    return c;
  }
  throw ConfigError("'" + ref + "' is neither a preset nor a readable file");
}

/// Sweep file: scenario sections plus
///   [sweep] parameter = stark|n_c|gamma_c|lambda, values = v1, v2, ...
inline SweepSpec load_sweep(std::istream& in) {
  detail::Parsed tokens;
  SweepSpec spec;
  spec.base = load_scenario(in, {"sweep"}, &tokens);
  auto it = tokens.sections.find("sweep");
  if (it == tokens.sections.end()) throw ConfigError("missing [sweep] section");
  const detail::Line* values = nullptr;
  bool have_parameter = false;
  for (const auto& l : it->second) {
    if (l.key == "parameter") {
      if (l.value == "stark") spec.parameter = SweepParameter::Stark;
      else if (l.value == "n_c") spec.parameter = SweepParameter::NC;
      else if (l.value == "gamma_c") spec.parameter = SweepParameter::GammaC;
      else if (l.value == "lambda") spec.parameter = SweepParameter::Lambda;
      else throw ConfigError("expected stark, n_c, gamma_c or lambda", l.number, l.key);
      have_parameter = true;
    } else if (l.key == "values") {
      values = &l;
    } else {
      throw ConfigError("unknown key in [sweep]", l.number, l.key);
    }
  }
  if (!have_parameter) throw ConfigError("missing key", 0, "parameter");
  if (!values) throw ConfigError("missing key", 0, "values");
  const auto dim = spec.parameter == SweepParameter::NC ? detail::Dim::None : detail::Dim::Frequency;
  for (const auto& item : detail::split_list(values->value))
    spec.values.push_back(detail::parse_quantity(*values, item, dim));
  spec.validate();
  return spec;
}

inline SweepSpec load_sweep_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep file " + path.string());
  auto spec = load_sweep(in);
  if (spec.base.name == "scenario") spec.base.name = path.stem().string();
  return spec;
}

}  // namespace cqed::scenario
