#pragma once

// Scenario files: sections of `key = value` lines, '#' comments. Every
// dimensional number carries its unit ("6 GHz", "0.6 MHz", "3.8 us", "1 fF");
// a missing or wrong unit is a ConfigError, as is any unknown key.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cqed/errors.hpp"
#include "cqed/motion.hpp"
#include "cqed/params.hpp"

namespace cqed::scenario {

struct GridSpec {
  enum class Mode { Dual, Uniform };
  Mode mode = Mode::Dual;
  double window = 0;         // MHz; 0 means 40 (gc + gd)
  std::size_t points = 10000;  // per window (dual) or total (uniform)
  double lo = 0, hi = 0;     // MHz, uniform mode
  double fine_halfwidth = 0.05;  // MHz
  std::size_t fine_points = 100000;
  bool fine_fit = true;
};

struct OracleSpec {
  bool markov = false;
  bool discretized = false;
  std::size_t mode_count = 2000;
  double half_bandwidth = 250;  // MHz
  int phonon_truncation = 1;
  double t_max = 0;      // us; 0 picks a decay-based default
  double sample_dt = 0;  // us; 0 resolves the fastest core frequency
  std::size_t points = 2000;  // oracle grid points per window
  double linf_tolerance = 0.05;
  double position_tolerance = 0.05;  // MHz
  // compare peak shifts relative to case N instead of absolute positions
  bool differential = false;
};

struct PlotSpec {
  double lo = 0, hi = 0;  // MHz; both 0 means around the left peaks
  std::size_t points = 4001;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::vector<CaseKind> cases{CaseKind::N, CaseKind::C, CaseKind::Q};
  unsigned n_c = 1;

  // couplings, given directly ...
  double nu = 6000, omega0 = 6000, omega_R = 1000, lambda = 500;
  std::optional<double> zeta;
  std::optional<double> stark;  // zeta^2 / delta, alternative to zeta
  // ... or derived from a device
  bool from_circuit = false;
  CircuitParams circuit;
  MixingConvention convention = MixingConvention::AsWritten;
  double eta_threshold = 0.1;

  DampingParams damping{0.6, 0.36, 1e4, 0, false};
  GridSpec grid;
  OracleSpec oracle;
  PlotSpec plot;

  DerivedCouplings couplings() const {
    if (from_circuit) return derive_couplings(circuit, nu, convention);
    if (stark) return make_couplings_from_stark(nu, omega0, omega_R, lambda, *stark);
    return make_couplings(nu, omega0, omega_R, lambda, zeta.value_or(0.0), convention);
  }

  void validate() const {
    if (cases.empty()) throw ConfigError("at least one case must be selected", 0, "cases");
    if (zeta && stark) throw ConfigError("give either zeta or stark, not both", 0, "stark");
    damping.validate();
    if (grid.points < 3 || grid.fine_points < 8) throw ConfigError("too few grid points", 0, "points");
    if (grid.mode == GridSpec::Mode::Uniform && !(grid.hi > grid.lo))
      throw ConfigError("uniform grid needs hi > lo", 0, "hi");
    if (oracle.phonon_truncation < 1) throw ConfigError("must be >= 1", 0, "phonon_truncation");
  }
};

enum class SweepParameter { Stark, NC, GammaC, Lambda };

inline const char* parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::Stark: return "stark";
    case SweepParameter::NC: return "n_c";
    case SweepParameter::GammaC: return "gamma_c";
    case SweepParameter::Lambda: return "lambda";
  }
  return "?";
}

struct SweepSpec {
  ScenarioConfig base;
  SweepParameter parameter = SweepParameter::Stark;
  std::vector<double> values;

  void validate() const {
    base.validate();
    if (values.empty()) throw ConfigError("sweep needs at least one value", 0, "values");
    for (double v : values)
      if (!std::isfinite(v)) throw ConfigError("sweep values must be finite", 0, "values");
    if (parameter == SweepParameter::NC)
      for (double v : values)
        if (v < 0 || v != std::floor(v)) throw ConfigError("n_c values must be non-negative integers", 0, "values");
  }
};

namespace detail {

enum class Dim { Frequency, Time, Voltage, Capacitance, Mass, Length, None };

inline const char* dim_name(Dim d) {
  switch (d) {
    case Dim::Frequency: return "frequency (Hz, kHz, MHz, GHz)";
    case Dim::Time: return "time (ns, us, ms, s)";
    case Dim::Voltage: return "voltage (uV, mV, V)";
    case Dim::Capacitance: return "capacitance (aF, fF, pF, nF, F)";
    case Dim::Mass: return "mass (g, kg)";
    case Dim::Length: return "length (nm, um, mm, m)";
    case Dim::None: return "dimensionless";
  }
  return "?";
}

/// Scale from `unit` to the internal unit of `d` (MHz, us, V, F, kg, m).
inline std::optional<double> unit_scale(Dim d, const std::string& unit) {
  static const std::map<std::string, std::pair<Dim, double>> table{
      {"Hz", {Dim::Frequency, 1e-6}}, {"kHz", {Dim::Frequency, 1e-3}}, {"MHz", {Dim::Frequency, 1.0}},
      {"GHz", {Dim::Frequency, 1e3}}, {"ns", {Dim::Time, 1e-3}},       {"us", {Dim::Time, 1.0}},
      {"ms", {Dim::Time, 1e3}},       {"s", {Dim::Time, 1e6}},         {"uV", {Dim::Voltage, 1e-6}},
      {"mV", {Dim::Voltage, 1e-3}},   {"V", {Dim::Voltage, 1.0}},      {"aF", {Dim::Capacitance, 1e-18}},
      {"fF", {Dim::Capacitance, 1e-15}}, {"pF", {Dim::Capacitance, 1e-12}}, {"nF", {Dim::Capacitance, 1e-9}},
      {"F", {Dim::Capacitance, 1.0}}, {"g", {Dim::Mass, 1e-3}},        {"kg", {Dim::Mass, 1.0}},
      {"nm", {Dim::Length, 1e-9}},    {"um", {Dim::Length, 1e-6}},     {"mm", {Dim::Length, 1e-3}},
      {"m", {Dim::Length, 1.0}},
  };
  if (unit.empty()) return d == Dim::None ? std::optional<double>(1.0) : std::nullopt;
  auto it = table.find(unit);
  if (it == table.end() || it->second.first != d) return std::nullopt;
  return it->second.second;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Line {
  int number;
  std::string key;
  std::string value;
};

inline double parse_quantity(const Line& l, const std::string& text, Dim d) {
  const std::string t = trim(text);
  double v = 0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr == begin) throw ConfigError("expected a number, got '" + t + "'", l.number, l.key);
  const std::string unit = trim(std::string(ptr, end));
  const auto scale = unit_scale(d, unit);
  if (!scale) {
    if (unit.empty()) throw ConfigError(std::string("missing unit, expected ") + dim_name(d), l.number, l.key);
    throw ConfigError("unit '" + unit + "' is not a " + dim_name(d), l.number, l.key);
  }
  if (!std::isfinite(v)) throw ConfigError("value must be finite", l.number, l.key);
  return v * *scale;
}

inline bool parse_bool(const Line& l) {
  std::string v = l.value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError("expected true/false, got '" + l.value + "'", l.number, l.key);
}

inline std::size_t parse_count(const Line& l) {
  const double v = parse_quantity(l, l.value, Dim::None);
  if (v < 0 || v != std::floor(v) || v > 1e9) throw ConfigError("expected a non-negative integer", l.number, l.key);
  return static_cast<std::size_t>(v);
}

using Handler = std::function<void(const Line&)>;

inline std::map<std::string, std::map<std::string, Handler>> scenario_handlers(ScenarioConfig& c) {
  auto q = [](double& dst, Dim d) { return [&dst, d](const Line& l) { dst = parse_quantity(l, l.value, d); }; };
  // The first [circuit] key switches to device-derived couplings, starting
  // from the reference device for anything left unspecified.
  auto enter_circuit = [&c] {
    if (!c.from_circuit) c.circuit = reference_circuit();
    c.from_circuit = true;
  };
  auto circuit_q = [enter_circuit](double& dst, Dim d) {
    return [enter_circuit, &dst, d](const Line& l) {
      enter_circuit();
      dst = parse_quantity(l, l.value, d);
    };
  };
  std::map<std::string, std::map<std::string, Handler>> h;
  h["scenario"] = {
      {"name", [&c](const Line& l) { c.name = l.value; }},
      {"preset", [](const Line&) {}},  // resolved before the other keys
      {"cases",
       [&c](const Line& l) {
         c.cases.clear();
         for (const auto& s : split_list(l.value)) {
           try {
             const auto k = parse_case(s);
             if (std::find(c.cases.begin(), c.cases.end(), k) == c.cases.end()) c.cases.push_back(k);
           } catch (const std::invalid_argument& e) {
             throw ConfigError(e.what(), l.number, l.key);
           }
         }
         if (c.cases.empty()) throw ConfigError("at least one case must be selected", l.number, l.key);
       }},
      {"n_c", [&c](const Line& l) { c.n_c = static_cast<unsigned>(parse_count(l)); }},
  };
  h["couplings"] = {
      {"nu", q(c.nu, Dim::Frequency)},
      {"omega0", q(c.omega0, Dim::Frequency)},
      {"omega_R", q(c.omega_R, Dim::Frequency)},
      {"lambda", q(c.lambda, Dim::Frequency)},
      {"zeta",
       [&c](const Line& l) {
         c.zeta = parse_quantity(l, l.value, Dim::Frequency);
         c.stark.reset();
       }},
      {"stark",
       [&c](const Line& l) {
         c.stark = parse_quantity(l, l.value, Dim::Frequency);
         c.zeta.reset();
       }},
      {"eta_threshold", q(c.eta_threshold, Dim::None)},
      {"mixing",
       [&c](const Line& l) {
         if (l.value == "as-written") c.convention = MixingConvention::AsWritten;
         else if (l.value == "standard") c.convention = MixingConvention::Standard;
         else throw ConfigError("expected as-written or standard", l.number, l.key);
       }},
  };
  h["circuit"] = {
      {"c_J", circuit_q(c.circuit.c_J, Dim::Capacitance)},
      {"C0", circuit_q(c.circuit.C0, Dim::Capacitance)},
      {"Cd", circuit_q(c.circuit.Cd, Dim::Capacitance)},
      {"Cg", circuit_q(c.circuit.Cg, Dim::Capacitance)},
      {"C_t", circuit_q(c.circuit.C_t, Dim::Capacitance)},
      {"L_tlr", circuit_q(c.circuit.L_tlr, Dim::Length)},
      {"V_g", circuit_q(c.circuit.V_g, Dim::Voltage)},
      {"V_x", circuit_q(c.circuit.V_x, Dim::Voltage)},
      {"flux_ratio", circuit_q(c.circuit.flux_ratio, Dim::None)},
      {"eps_J", circuit_q(c.circuit.eps_J, Dim::Frequency)},
      {"m", circuit_q(c.circuit.m, Dim::Mass)},
      {"d", circuit_q(c.circuit.d, Dim::Length)},
      {"omega_R",  // written as a linear frequency, stored in rad/s
       [&c, enter_circuit](const Line& l) {
         enter_circuit();
         c.circuit.omega_R = constants::two_pi * parse_quantity(l, l.value, Dim::Frequency) * constants::hz_per_mhz;
       }},
  };
  h["damping"] = {
      {"gamma_c", q(c.damping.gamma_c, Dim::Frequency)},
      {"gamma_d", q(c.damping.gamma_d, Dim::Frequency)},
      {"Q_nu", q(c.damping.Q_nu, Dim::None)},
      {"Q_R", q(c.damping.Q_R, Dim::None)},
      {"swapped", [&c](const Line& l) { c.damping.swapped = parse_bool(l); }},
  };
  h["grid"] = {
      {"mode",
       [&c](const Line& l) {
         if (l.value == "dual") c.grid.mode = GridSpec::Mode::Dual;
         else if (l.value == "uniform") c.grid.mode = GridSpec::Mode::Uniform;
         else throw ConfigError("expected dual or uniform", l.number, l.key);
       }},
      {"window", q(c.grid.window, Dim::Frequency)},
      {"points", [&c](const Line& l) { c.grid.points = parse_count(l); }},
      {"lo", q(c.grid.lo, Dim::Frequency)},
      {"hi", q(c.grid.hi, Dim::Frequency)},
      {"fine_halfwidth", q(c.grid.fine_halfwidth, Dim::Frequency)},
      {"fine_points", [&c](const Line& l) { c.grid.fine_points = parse_count(l); }},
      {"fine_fit", [&c](const Line& l) { c.grid.fine_fit = parse_bool(l); }},
  };
  h["oracle"] = {
      {"markov", [&c](const Line& l) { c.oracle.markov = parse_bool(l); }},
      {"discretized", [&c](const Line& l) { c.oracle.discretized = parse_bool(l); }},
      {"mode_count", [&c](const Line& l) { c.oracle.mode_count = parse_count(l); }},
      {"half_bandwidth", q(c.oracle.half_bandwidth, Dim::Frequency)},
      {"phonon_truncation", [&c](const Line& l) { c.oracle.phonon_truncation = static_cast<int>(parse_count(l)); }},
      {"t_max", q(c.oracle.t_max, Dim::Time)},
      {"sample_dt", q(c.oracle.sample_dt, Dim::Time)},
      {"points", [&c](const Line& l) { c.oracle.points = parse_count(l); }},
      {"linf_tolerance", q(c.oracle.linf_tolerance, Dim::None)},
      {"position_tolerance", q(c.oracle.position_tolerance, Dim::Frequency)},
      {"differential", [&c](const Line& l) { c.oracle.differential = parse_bool(l); }},
  };
  h["plot"] = {
      {"lo", q(c.plot.lo, Dim::Frequency)},
      {"hi", q(c.plot.hi, Dim::Frequency)},
      {"points", [&c](const Line& l) { c.plot.points = parse_count(l); }},
  };
  return h;
}

struct Parsed {
  std::map<std::string, std::vector<Line>> sections;
  std::vector<std::string> order;
};

inline Parsed tokenize(std::istream& in) {
  Parsed p;
  std::string section;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", number);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", number);
      p.order.push_back(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", number);
    if (section.empty()) throw ConfigError("key outside any section", number, trim(line.substr(0, eq)));
    Line l{number, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    if (l.key.empty()) throw ConfigError("empty key", number);
    if (l.value.empty()) throw ConfigError("empty value", number, l.key);
    p.sections[section].push_back(l);
  }
  return p;
}

}  // namespace detail

/// Applies the scenario sections of a tokenized file on top of `base`.
/// Sections named in `skip` belong to another reader.
inline ScenarioConfig apply_sections(const detail::Parsed& parsed, ScenarioConfig base,
                                     const std::vector<std::string>& skip = {}) {
  auto handlers = detail::scenario_handlers(base);
  std::map<std::string, int> seen;
  for (const auto& section : parsed.order) {
    if (std::find(skip.begin(), skip.end(), section) != skip.end()) continue;
    if (!handlers.count(section)) {
      const auto it = parsed.sections.find(section);
      const int line = it == parsed.sections.end() || it->second.empty() ? 0 : it->second.front().number;
      throw ConfigError("unknown section [" + section + "]", line);
    }
  }
  for (const auto& [section, lines] : parsed.sections) {
    if (std::find(skip.begin(), skip.end(), section) != skip.end()) continue;
    auto& sh = handlers.at(section);
    for (const auto& l : lines) {
      auto kh = sh.find(l.key);
      if (kh == sh.end()) throw ConfigError("unknown key in [" + section + "]", l.number, l.key);
      const std::string full = section + "." + l.key;
      if (seen.count(full))
        throw ConfigError("duplicate key (first on line " + std::to_string(seen[full]) + ")", l.number, l.key);
      seen[full] = l.number;
      kh->second(l);
    }
  }
  if (seen.count("couplings.zeta") && seen.count("couplings.stark"))
    throw ConfigError("give either zeta or stark, not both", seen["couplings.stark"], "stark");
  return base;
}

}  // namespace cqed::scenario
