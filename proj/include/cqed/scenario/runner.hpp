#pragma once

// Scenario orchestration: analytic curves and fitted peaks for each case,
// optional oracle comparisons, sweeps, and the on-disk bundle.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cqed/analytic.hpp"
#include "cqed/constants.hpp"
#include "cqed/csv.hpp"
#include "cqed/oracle.hpp"
#include "cqed/peaks.hpp"
#include "cqed/scenario/config.hpp"
#include "cqed/stats.hpp"

namespace cqed::scenario {

struct RunOptions {
  std::optional<bool> markov;  // overrides the config when set
  std::optional<bool> discretized;
  bool strict = false;  // warnings count as failures
  unsigned workers = 1;
};

struct CaseResult {
  CaseKind kind = CaseKind::N;
  MotionCase motion;
  bool selected = true;  // false for a reference N computed only for shifts
  SpectrumCurve curve;   // unit peak on the scenario grid
  peaks::PeakReport fit;
  std::vector<double> fine_centers;  // per fitted peak; empty if fine fits are off
  analytic::SplittingParams splitting;
  analytic::PredictedPeaks predicted;

  /// Best available centre of peak `i` (fine fit when present).
  double center(std::size_t i) const { return fine_centers.empty() ? fit.peaks.at(i).center : fine_centers.at(i); }
  double left() const { return center(0); }
  double right() const { return center(fit.peaks.size() - 1); }
  double split() const { return right() - left(); }
};

struct OracleComparison {
  CaseKind kind = CaseKind::N;
  std::string method;  // markov or discretized
  bool supported = true;
  std::string note;
  double linf = NAN;                // unit-peak L-infinity vs analytic on the oracle grid
  std::vector<double> center_deltas;  // oracle minus analytic fitted centres, MHz
  std::vector<double> shift_deltas;   // same, each relative to case N
  double position_error = NAN;        // the quantity held to the position tolerance
  double bath_linf = NAN;             // bath occupation vs c1 transform (discretized)
  double c1_deviation = NAN;          // max ||c1_disc| - |c1_markov|| / max |c1_markov|
  double norm_drift = NAN;
  double bath_total = NAN;
  double final_core_norm = NAN;
  bool pass = false;
  std::vector<std::string> warnings;
  SpectrumCurve oracle_curve;
  SpectrumCurve analytic_curve;
};

struct Bundle {
  ScenarioConfig config;
  DerivedCouplings dc;
  std::vector<double> grid;
  std::vector<CaseResult> cases;
  std::vector<OracleComparison> oracle;
  std::vector<double> plot_grid;
  std::vector<SpectrumCurve> plot_curves;  // parallel to the selected cases
  std::vector<std::string> warnings;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }

  const CaseResult* find(CaseKind k) const {
    for (const auto& c : cases)
      if (c.kind == k) return &c;
    return nullptr;
  }

  std::vector<const CaseResult*> selected() const {
    std::vector<const CaseResult*> out;
    for (const auto& c : cases)
      if (c.selected) out.push_back(&c);
    return out;
  }
};

namespace detail {

inline double window_width(const ScenarioConfig& cfg) {
  return cfg.grid.window > 0 ? cfg.grid.window : 40.0 * (cfg.damping.gamma_c + cfg.damping.gamma_d);
}

/// Uniform window around [lo, hi] padded by width/2 on each side, keeping
/// the per-MHz density of `points` per `width`.
inline std::vector<double> padded_window(double lo, double hi, double width, std::size_t points) {
  const double a = lo - 0.5 * width, b = hi + 0.5 * width;
  const auto n = static_cast<std::size_t>(std::llround(static_cast<double>(points) * (b - a) / width));
  return uniform_grid(a, b, std::max<std::size_t>(n, 3));
}

inline std::vector<double> merge(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end(), [](double x, double y) { return !(y > x); }), a.end());
  return a;
}

/// Dual windows covering the predicted left and right peaks of `motions`.
inline std::vector<double> dual_grid(const std::vector<analytic::PredictedPeaks>& predicted, double width,
                                     std::size_t points) {
  double l_lo = INFINITY, l_hi = -INFINITY, r_lo = INFINITY, r_hi = -INFINITY;
  for (const auto& p : predicted) {
    l_lo = std::min(l_lo, p.left);
    l_hi = std::max(l_hi, p.left);
    r_lo = std::min(r_lo, p.right);
    r_hi = std::max(r_hi, p.right);
  }
  return merge(padded_window(l_lo, l_hi, width, points), padded_window(r_lo, r_hi, width, points));
}

inline peaks::PeakReport fit_curve(const SpectrumCurve& c) {
  return peaks::fit_lorentzian_pair(c, peaks::find_peaks(c));
}

/// Single-line fit of each fitted peak on a narrow dense window.
inline std::vector<double> fine_centers(const MotionCase& mc, const DerivedCouplings& dc, const DampingParams& dp,
                                        const peaks::PeakReport& coarse, const GridSpec& g) {
  std::vector<double> out;
  for (const auto& pk : coarse.peaks) {
    const auto grid = uniform_grid(pk.center - g.fine_halfwidth, pk.center + g.fine_halfwidth, g.fine_points);
    const auto curve = analytic::spectrum(mc, grid, dc, dp);
    peaks::PeakReport seed;
    seed.peaks.push_back({pk.center, pk.fwhm, curve.max_value(), 0});
    out.push_back(peaks::fit_lorentzian_pair(curve, seed).peaks.front().center);
  }
  return out;
}

inline CaseResult analyze_case(CaseKind kind, const ScenarioConfig& cfg, const DerivedCouplings& dc,
                               const std::vector<double>& grid) {
  CaseResult r;
  r.kind = kind;
  r.motion = make_case(kind, dc, cfg.n_c);
  if (kind != CaseKind::N) require_dispersive(dc, cfg.eta_threshold);
  r.splitting = analytic::splitting_params(r.motion, dc, cfg.damping);
  r.predicted = analytic::predicted_peaks(r.motion, dc, cfg.damping);
  r.curve = analytic::spectrum(r.motion, grid, dc, cfg.damping);
  r.fit = fit_curve(r.curve);
  if (cfg.grid.fine_fit) r.fine_centers = fine_centers(r.motion, dc, cfg.damping, r.fit, cfg.grid);
  return r;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline void run_markov(Bundle& b, const CaseResult& cr) {
  const auto& cfg = b.config;
  OracleComparison oc;
  oc.kind = cr.kind;
  oc.method = "markov";
  const auto space = oracle::build_state_space(cr.motion, b.dc, cfg.oracle.phonon_truncation);
  const double t_max = cfg.oracle.t_max > 0 ? cfg.oracle.t_max : oracle::default_t_max(cfg.damping);
  const auto tr = oracle::evolve_markov(space, cfg.damping, t_max, cfg.oracle.sample_dt);
  oc.warnings = tr.warnings;
  oc.final_core_norm = tr.core_norm.back();
  const auto grid = dual_grid({cr.predicted}, window_width(cfg), cfg.oracle.points);
  oc.oracle_curve = oracle::spectrum_from_c1(tr, grid, &oc.warnings).unit_peak();
  oc.analytic_curve = analytic::spectrum(cr.motion, grid, b.dc, cfg.damping);
  oc.linf = linf_unit_peak(oc.oracle_curve, oc.analytic_curve);
  const auto fo = fit_curve(oc.oracle_curve), fa = fit_curve(oc.analytic_curve);
  if (fo.peaks.size() != fa.peaks.size()) {
    oc.note = "oracle and analytic curves have different peak counts";
    oc.position_error = INFINITY;
  } else {
    oc.center_deltas = peaks::compare_reports(fo, fa).center_deltas;
    oc.position_error = max_abs(oc.center_deltas);
  }
  b.oracle.push_back(std::move(oc));
}

inline void run_discretized(Bundle& b, const CaseResult& cr) {
  const auto& cfg = b.config;
  OracleComparison oc;
  oc.kind = cr.kind;
  oc.method = "discretized";
  const auto space = oracle::build_state_space(cr.motion, b.dc, cfg.oracle.phonon_truncation);
  const double centre = space.states[space.photon].energy;
  const auto pb = oracle::BathDiscretization::flat(cfg.oracle.mode_count, centre, cfg.oracle.half_bandwidth,
                                                   cfg.damping.photon_rate());
  const auto qb = oracle::BathDiscretization::flat(cfg.oracle.mode_count, centre, cfg.oracle.half_bandwidth,
                                                   cfg.damping.qubit_rate());
  const double t_max = cfg.oracle.t_max > 0
                           ? cfg.oracle.t_max
                           : std::min(oracle::default_t_max(cfg.damping), 0.95 * pb.recurrence_time());
  oracle::AmplitudeTrajectory tr;
  try {
    tr = oracle::evolve_discretized(space, pb, qb, t_max, cfg.oracle.sample_dt);
  } catch (const std::invalid_argument& e) {
    oc.supported = false;
    oc.note = e.what();
    oc.pass = true;
    b.warnings.push_back(std::string("discretized oracle skipped for case ") + case_label(cr.kind) + ": " + e.what());
    b.oracle.push_back(std::move(oc));
    return;
  }
  oc.warnings = tr.warnings;
  oc.norm_drift = tr.max_norm_drift();
  oc.final_core_norm = tr.core_norm.back();
  oc.bath_total = oracle::bath_population(tr);

  const auto markov = oracle::evolve_markov(space, cfg.damping, t_max, tr.times[1] - tr.times[0]);
  double worst = 0, scale = 0;
  const std::size_t n = std::min(markov.c1.size(), tr.c1.size());
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(std::abs(tr.c1[i]) - std::abs(markov.c1[i])));
    scale = std::max(scale, std::abs(markov.c1[i]));
  }
  oc.c1_deviation = scale > 0 ? worst / scale : 0.0;

  const auto bath = oracle::spectrum_from_bath(tr, tr.bath_c_frequencies);
  const auto c1_on_bath = oracle::spectrum_from_c1(tr, tr.bath_c_frequencies, &oc.warnings);
  oc.bath_linf = linf_unit_peak(bath, c1_on_bath);

  const auto grid = dual_grid({cr.predicted}, window_width(cfg), cfg.oracle.points);
  oc.oracle_curve = oracle::spectrum_from_c1(tr, grid).unit_peak();
  oc.analytic_curve = analytic::spectrum(cr.motion, grid, b.dc, cfg.damping);
  oc.linf = linf_unit_peak(oc.oracle_curve, oc.analytic_curve);
  const auto fo = fit_curve(oc.oracle_curve), fa = fit_curve(oc.analytic_curve);
  if (fo.peaks.size() == fa.peaks.size()) {
    oc.center_deltas = peaks::compare_reports(fo, fa).center_deltas;
    oc.position_error = max_abs(oc.center_deltas);
  } else {
    oc.position_error = INFINITY;
  }
  b.oracle.push_back(std::move(oc));
}

inline void judge_oracle(Bundle& b) {
  const auto& o = b.config.oracle;
  const OracleComparison* markov_n = nullptr;
  for (const auto& oc : b.oracle)
    if (oc.method == "markov" && oc.kind == CaseKind::N) markov_n = &oc;
  for (auto& oc : b.oracle) {
    if (!oc.supported) continue;
    if (o.differential && oc.kind != CaseKind::N && oc.method == "markov" && markov_n &&
        markov_n->center_deltas.size() == oc.center_deltas.size()) {
      oc.shift_deltas.clear();
      for (std::size_t i = 0; i < oc.center_deltas.size(); ++i)
        oc.shift_deltas.push_back(oc.center_deltas[i] - markov_n->center_deltas[i]);
      oc.position_error = max_abs(oc.shift_deltas);
    }
    bool pass = oc.linf < o.linf_tolerance && oc.position_error <= o.position_tolerance;
    if (oc.method == "discretized") {
      pass = pass && oc.bath_linf < 0.05 && oc.c1_deviation < 0.02 && oc.norm_drift < 1e-6;
      if (oc.final_core_norm < 1e-4) pass = pass && std::abs(oc.bath_total - 1.0) < 1e-4;
    }
    oc.pass = pass;
    if (!pass)
      b.failures.push_back(std::string("oracle ") + oc.method + " case " + case_label(oc.kind) +
                           ": L-inf " + fmt(oc.linf) + ", position error " + fmt(oc.position_error) + " MHz");
    for (const auto& w : oc.warnings)
      b.warnings.push_back(std::string("oracle ") + oc.method + " case " + case_label(oc.kind) + ": " + w);
  }
}

}  // namespace detail

/// Scenario grid: dual windows around the predicted peaks of every case
/// (plus case N), or the configured uniform grid.
inline std::vector<double> scenario_grid(const ScenarioConfig& cfg, const DerivedCouplings& dc) {
  if (cfg.grid.mode == GridSpec::Mode::Uniform) return uniform_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.points);
  std::vector<analytic::PredictedPeaks> pred;
  pred.push_back(analytic::predicted_peaks(NoMotion{}, dc, cfg.damping));
  for (auto k : cfg.cases)
    if (k != CaseKind::N) pred.push_back(analytic::predicted_peaks(make_case(k, dc, cfg.n_c), dc, cfg.damping));
  return detail::dual_grid(pred, detail::window_width(cfg), cfg.grid.points);
}

/// Runs every selected case. Regime violations propagate as RegimeError;
/// oracle mismatches are collected in Bundle::failures.
inline Bundle run_scenario(const ScenarioConfig& config, const RunOptions& opts = {}) {
  config.validate();
  Bundle b;
  b.config = config;
  if (opts.markov) b.config.oracle.markov = *opts.markov;
  if (opts.discretized) b.config.oracle.discretized = *opts.discretized;
  const auto& cfg = b.config;
  b.dc = cfg.couplings();
  if (std::abs(b.dc.nu - b.dc.omega0) > 1e-9 * b.dc.nu)
    b.warnings.push_back("qubit detuned from the TLR mode; peak registration at nu/2 assumes omega0 = nu");
  b.grid = scenario_grid(cfg, b.dc);

  const bool has_n = std::find(cfg.cases.begin(), cfg.cases.end(), CaseKind::N) != cfg.cases.end();
  if (!has_n) {
    b.cases.push_back(detail::analyze_case(CaseKind::N, cfg, b.dc, b.grid));
    b.cases.back().selected = false;
  }
  for (auto k : cfg.cases) b.cases.push_back(detail::analyze_case(k, cfg, b.dc, b.grid));

  if (cfg.oracle.markov) {
    if (!has_n && cfg.oracle.differential) detail::run_markov(b, *b.find(CaseKind::N));
    for (auto k : cfg.cases) detail::run_markov(b, *b.find(k));
  }
  if (cfg.oracle.discretized)
    for (auto k : cfg.cases) detail::run_discretized(b, *b.find(k));
  detail::judge_oracle(b);

  // plot data
  double lo = cfg.plot.lo, hi = cfg.plot.hi;
  if (!(hi > lo)) {
    lo = INFINITY;
    hi = -INFINITY;
    for (const auto& c : b.cases) {
      lo = std::min(lo, c.left());
      hi = std::max(hi, c.left());
    }
    lo -= 5;
    hi += 5;
  }
  b.plot_grid = uniform_grid(lo, hi, std::max<std::size_t>(cfg.plot.points, 3));
  for (const auto* c : b.selected()) b.plot_curves.push_back(analytic::spectrum(c->motion, b.plot_grid, b.dc, cfg.damping));

  if (opts.strict)
    for (const auto& w : b.warnings) b.failures.push_back("warning (strict): " + w);
  return b;
}

namespace detail {

inline std::string curves_csv(const Bundle& b) {
  std::string s = "omega_MHz";
  const auto sel = b.selected();
  for (const auto* c : sel) s += std::string(",S_") + case_label(c->kind) + "_unit_peak";
  s += '\n';
  for (std::size_t i = 0; i < b.grid.size(); ++i) {
    s += csv::num(b.grid[i]);
    for (const auto* c : sel) s += "," + csv::num(c->curve.values[i]);
    s += '\n';
  }
  return s;
}

inline std::string peaks_csv(const Bundle& b) {
  std::string s = "case,peak,center_MHz,center_fine_MHz,center_error_MHz,fwhm_MHz,height_unit_peak,predicted_MHz\n";
  for (const auto* c : b.selected()) {
    for (std::size_t i = 0; i < c->fit.peaks.size(); ++i) {
      const auto& p = c->fit.peaks[i];
      const bool left = i == 0 && c->fit.peaks.size() > 1;
      const double pred = c->fit.peaks.size() == 1
                              ? (std::abs(p.center - c->predicted.left) < std::abs(p.center - c->predicted.right)
                                     ? c->predicted.left
                                     : c->predicted.right)
                              : (left ? c->predicted.left : c->predicted.right);
      s += std::string(case_label(c->kind)) + "," + (left || c->fit.peaks.size() == 1 ? "left" : "right") + "," +
           csv::num(p.center) + "," + (c->fine_centers.empty() ? std::string("nan") : csv::num(c->fine_centers[i])) +
           "," + csv::num(p.center_error) + "," + csv::num(p.fwhm) + "," + csv::num(p.height) + "," +
           csv::num(pred) + "\n";
    }
  }
  return s;
}

inline std::string comparison_csv(const Bundle& b) {
  std::string s = "case,quantity,measured_MHz,predicted_MHz,difference_MHz\n";
  const auto* n = b.find(CaseKind::N);
  auto row = [&s](const CaseResult& c, const char* q, double m, double p) {
    s += std::string(case_label(c.kind)) + "," + q + "," + csv::num(m) + "," + csv::num(p) + "," + csv::num(m - p) +
         "\n";
  };
  for (const auto* c : b.selected()) {
    if (c->fit.peaks.size() < 2) continue;
    row(*c, "left_center", c->left(), c->predicted.left);
    row(*c, "right_center", c->right(), c->predicted.right);
    row(*c, "splitting", c->split(), c->predicted.splitting);
    if (c->kind == CaseKind::N || !n || n->fit.peaks.size() < 2) continue;
    const double ls = c->left() - n->left(), rs = c->right() - n->right();
    row(*c, "left_shift", ls, c->predicted.left_shift);
    row(*c, "right_shift", rs, c->predicted.right_shift);
    row(*c, "splitting_increment", c->split() - n->split(), c->predicted.splitting_increment);
    row(*c, "common_shift", 0.5 * (ls + rs), c->predicted.delta_omega);
  }
  return s;
}

inline std::string oracle_csv(const Bundle& b) {
  std::string s =
      "case,method,supported,linf,position_error_MHz,left_delta_MHz,right_delta_MHz,bath_linf,c1_deviation,"
      "norm_drift,bath_total,final_core_norm,pass\n";
  for (const auto& o : b.oracle) {
    const double l = o.center_deltas.empty() ? NAN : o.center_deltas.front();
    const double r = o.center_deltas.size() < 2 ? NAN : o.center_deltas.back();
    s += std::string(case_label(o.kind)) + "," + o.method + "," + (o.supported ? "yes" : "no") + "," +
         csv::num(o.linf) + "," + csv::num(o.position_error) + "," + csv::num(l) + "," + csv::num(r) + "," +
         csv::num(o.bath_linf) + "," + csv::num(o.c1_deviation) + "," + csv::num(o.norm_drift) + "," +
         csv::num(o.bath_total) + "," + csv::num(o.final_core_norm) + "," + (o.pass ? "yes" : "no") + "\n";
  }
  return s;
}

inline std::string describe(const ScenarioConfig& c, const DerivedCouplings& dc) {
  std::ostringstream m;
  m.precision(17);
  m << "scenario = " << c.name << "\n";
  m << "cases =";
  for (auto k : c.cases) m << " " << case_label(k);
  m << "\nn_c = " << c.n_c << "\n";
  m << "couplings.source = " << (c.from_circuit ? "circuit" : "direct") << "\n";
  m << "couplings.mixing = " << (c.convention == MixingConvention::AsWritten ? "as-written" : "standard") << "\n";
  if (c.from_circuit) {
    const auto& p = c.circuit;
    m << "circuit.c_J_F = " << p.c_J << "\ncircuit.C0_F = " << p.C0 << "\ncircuit.Cd_F = " << p.Cd
      << "\ncircuit.Cg_F = " << p.Cg << "\ncircuit.C_t_F = " << p.C_t << "\ncircuit.L_tlr_m = " << p.L_tlr
      << "\ncircuit.V_g_V = " << p.V_g << "\ncircuit.V_x_V = " << p.V_x << "\ncircuit.flux_ratio = " << p.flux_ratio
      << "\ncircuit.eps_J_MHz = " << p.eps_J << "\ncircuit.m_kg = " << p.m << "\ncircuit.d_m = " << p.d
      << "\ncircuit.omega_R_rad_per_s = " << p.omega_R << "\n";
  }
  m << "derived.nu_MHz = " << dc.nu << "\nderived.omega0_MHz = " << dc.omega0 << "\nderived.E_C_MHz = " << dc.E_C
    << "\nderived.E_J_MHz = " << dc.E_J << "\nderived.alpha_rad = " << dc.alpha << "\nderived.lambda_MHz = "
    << dc.lambda << "\nderived.zeta_MHz = " << dc.zeta << "\nderived.delta_MHz = " << dc.delta
    << "\nderived.eta = " << dc.eta << "\nderived.stark_MHz = " << dc.stark() << "\n";
  m << "damping.gamma_c_MHz = " << c.damping.gamma_c << "\ndamping.gamma_d_MHz = " << c.damping.gamma_d
    << "\ndamping.Q_nu = " << c.damping.Q_nu << "\ndamping.Q_R = " << c.damping.Q_R
    << "\ndamping.swapped = " << (c.damping.swapped ? "true" : "false") << "\n";
  m << "guard.eta_threshold = " << c.eta_threshold << "\n";
  m << "grid.mode = " << (c.grid.mode == GridSpec::Mode::Dual ? "dual" : "uniform")
    << "\ngrid.window_MHz = " << window_width(c) << "\ngrid.points = " << c.grid.points << "\ngrid.lo_MHz = " << c.grid.lo
    << "\ngrid.hi_MHz = " << c.grid.hi << "\ngrid.fine_fit = " << (c.grid.fine_fit ? "true" : "false")
    << "\ngrid.fine_halfwidth_MHz = " << c.grid.fine_halfwidth << "\ngrid.fine_points = " << c.grid.fine_points << "\n";
  m << "oracle.markov = " << (c.oracle.markov ? "true" : "false")
    << "\noracle.discretized = " << (c.oracle.discretized ? "true" : "false")
    << "\noracle.mode_count = " << c.oracle.mode_count << "\noracle.half_bandwidth_MHz = " << c.oracle.half_bandwidth
    << "\noracle.phonon_truncation = " << c.oracle.phonon_truncation << "\noracle.t_max_us = " << c.oracle.t_max
    << "\noracle.sample_dt_us = " << c.oracle.sample_dt << "\noracle.points = " << c.oracle.points
    << "\noracle.linf_tolerance = " << c.oracle.linf_tolerance
    << "\noracle.position_tolerance_MHz = " << c.oracle.position_tolerance
    << "\noracle.differential = " << (c.oracle.differential ? "true" : "false") << "\n";
  m << "integrator.markov = dopri5 rtol 1e-9 atol 1e-12\nintegrator.discretized = taylor order 12, "
       "step <= 1/(50 half_bandwidth)\n";
  m << "fit.prominence = 0.05\n";
  m << "plot.lo_MHz = " << c.plot.lo << "\nplot.hi_MHz = " << c.plot.hi << "\nplot.points = " << c.plot.points << "\n";
  return m.str();
}

inline void write_manifest(const std::filesystem::path& dir, const std::string& header,
                           const std::vector<std::pair<std::string, std::string>>& files,
                           const std::vector<std::string>& warnings, const std::vector<std::string>& failures) {
  std::string m = "# run manifest\nversion = " + std::string(version) + "\n" + header;
  for (const auto& [name, content] : files)
    m += "file." + name + " = " + std::to_string(content.size()) + " bytes fnv1a " + csv::hex(csv::fnv1a(content)) +
         "\n";
  for (const auto& w : warnings) m += "warning = " + w + "\n";
  for (const auto& f : failures) m += "failure = " + f + "\n";
  m += std::string("status = ") + (failures.empty() ? "ok" : "failed") + "\n";
  csv::atomic_write(dir / "manifest.txt", m);
}

}  // namespace detail

/// curves.csv, peaks.csv, comparison.csv, oracle.csv (when run), then manifest.txt.
inline void write_bundle(const Bundle& b, const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, std::string>> files{
      {"curves.csv", detail::curves_csv(b)},
      {"peaks.csv", detail::peaks_csv(b)},
      {"comparison.csv", detail::comparison_csv(b)},
  };
  if (!b.oracle.empty()) files.push_back({"oracle.csv", detail::oracle_csv(b)});
  for (const auto& [name, content] : files) csv::atomic_write(dir / name, content);
  detail::write_manifest(dir, detail::describe(b.config, b.dc), files, b.warnings, b.failures);
}

/// <name>.dat (omega and one column per case, each scaled to unit peak in the
/// plot window) and a gnuplot script <name>.gp that overlays them.
inline void emit_plotdata(const Bundle& b, const std::filesystem::path& dir) {
  const auto sel = b.selected();
  std::string dat = "# omega_MHz";
  for (const auto* c : sel) dat += std::string(" S_") + case_label(c->kind);
  dat += "\n";
  std::vector<SpectrumCurve> scaled;
  for (const auto& c : b.plot_curves) scaled.push_back(c.unit_peak());
  for (std::size_t i = 0; i < b.plot_grid.size(); ++i) {
    dat += csv::num(b.plot_grid[i]);
    for (const auto& c : scaled) dat += " " + csv::num(c.values[i]);
    dat += "\n";
  }
  const std::string name = b.config.name;
  std::string gp = "# gnuplot -p " + name + ".gp\nset xlabel 'omega / 2pi (MHz)'\nset ylabel 'S_V (unit peak)'\n"
                   "set key top right\nset xrange [" + csv::num(b.plot_grid.front()) + ":" +
                   csv::num(b.plot_grid.back()) + "]\nplot ";
  for (std::size_t k = 0; k < sel.size(); ++k) {
    if (k) gp += ", \\\n     ";
    gp += "'" + name + ".dat' using 1:" + std::to_string(k + 2) + " with lines title 'S_" + case_label(sel[k]->kind) + "'";
  }
  gp += "\n";
  csv::atomic_write(dir / (name + ".dat"), dat);
  csv::atomic_write(dir / (name + ".gp"), gp);
}

struct SweepRow {
  double value = 0;
  CaseKind kind = CaseKind::N;
  std::string status = "ok";  // or the guard/fit message
  double left = NAN, right = NAN, splitting = NAN;
  double left_shift = NAN, right_shift = NAN, common_shift = NAN, splitting_increment = NAN;
  double predicted_increment = NAN, predicted_common_shift = NAN;
};

struct SweepSlope {
  CaseKind kind;
  std::string quantity;
  std::string abscissa;
  double slope;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
  std::vector<SweepSlope> slopes;
};

inline ScenarioConfig sweep_point(const SweepSpec& spec, double v) {
  ScenarioConfig c = spec.base;
  if (c.from_circuit && (spec.parameter == SweepParameter::Stark || spec.parameter == SweepParameter::Lambda)) {
    // freeze the device-derived couplings, then override one of them
    const auto dc = c.couplings();
    c.from_circuit = false;
    c.nu = dc.nu;
    c.omega0 = dc.omega0;
    c.omega_R = dc.omega_R();
    c.lambda = dc.lambda;
    c.zeta = dc.zeta;
    c.stark.reset();
  }
  switch (spec.parameter) {
    case SweepParameter::Stark:
      c.stark = v;
      c.zeta.reset();
      break;
    case SweepParameter::NC: c.n_c = static_cast<unsigned>(v); break;
    case SweepParameter::GammaC: c.damping.gamma_c = v; break;
    case SweepParameter::Lambda: c.lambda = v; break;
  }
  c.oracle.markov = c.oracle.discretized = false;
  return c;
}

inline std::vector<SweepRow> sweep_value(const SweepSpec& spec, double v) {
  std::vector<SweepRow> rows;
  ScenarioConfig cfg = sweep_point(spec, v);
  std::optional<CaseResult> n;
  for (auto k : cfg.cases) {
    SweepRow row;
    row.value = v;
    row.kind = k;
    try {
      const auto dc = cfg.couplings();
      const auto grid = scenario_grid(cfg, dc);
      if (!n) n = detail::analyze_case(CaseKind::N, cfg, dc, grid);
      const auto c = k == CaseKind::N ? *n : detail::analyze_case(k, cfg, dc, grid);
      if (c.fit.peaks.size() < 2 || n->fit.peaks.size() < 2) throw EmptySpectrum("fewer than two peaks resolved");
      row.left = c.left();
      row.right = c.right();
      row.splitting = c.split();
      row.left_shift = c.left() - n->left();
      row.right_shift = c.right() - n->right();
      row.common_shift = 0.5 * (row.left_shift + row.right_shift);
      row.splitting_increment = c.split() - n->split();
      row.predicted_increment = c.predicted.splitting_increment;
      row.predicted_common_shift = c.predicted.delta_omega;
    } catch (const std::exception& e) {
      row.status = std::string("flagged: ") + e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

/// Log-log slopes of the shift columns against the swept value (n_c + 1/2
/// for occupation sweeps). Flagged rows are excluded.
inline std::vector<SweepSlope> sweep_slopes(const SweepResult& r) {
  std::vector<SweepSlope> out;
  const bool occupation = r.spec.parameter == SweepParameter::NC;
  const std::string abscissa = occupation ? "n_c+1/2" : parameter_name(r.spec.parameter);
  for (auto k : r.spec.base.cases) {
    if (k == CaseKind::N) continue;
    std::vector<double> x, inc, common;
    for (const auto& row : r.rows) {
      if (row.kind != k || row.status != "ok") continue;
      x.push_back(occupation ? row.value + 0.5 : row.value);
      inc.push_back(row.splitting_increment);
      common.push_back(std::abs(row.common_shift));
    }
    auto add = [&](const char* q, const std::vector<double>& y) {
      try {
        out.push_back({k, q, abscissa, loglog_slope(x, y)});
      } catch (const std::invalid_argument&) {
        out.push_back({k, q, abscissa, NAN});
      }
    };
    add("splitting_increment", inc);
    if (k == CaseKind::Q) add("common_shift", common);
  }
  return out;
}

/// Evaluates every (value, case) pair on up to `workers` threads; row order
/// follows the value list regardless of scheduling.
inline SweepResult run_sweep(const SweepSpec& spec, unsigned workers = 1) {
  spec.validate();
  SweepResult r;
  r.spec = spec;
  std::vector<std::vector<SweepRow>> per(spec.values.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < spec.values.size(); i = next++) per[i] = sweep_value(spec, spec.values[i]);
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(spec.values.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& v : per) r.rows.insert(r.rows.end(), v.begin(), v.end());
  r.slopes = sweep_slopes(r);
  return r;
}

/// sweep.csv (long form), sweep_slopes.csv, manifest.txt.
inline void write_sweep(const SweepResult& r, const std::filesystem::path& dir) {
  const std::string unit = r.spec.parameter == SweepParameter::NC ? "" : "_MHz";
  std::string s = std::string(parameter_name(r.spec.parameter)) + unit +
                  ",case,status,left_MHz,right_MHz,splitting_MHz,left_shift_MHz,right_shift_MHz,common_shift_MHz,"
                  "splitting_increment_MHz,predicted_increment_MHz,predicted_common_shift_MHz\n";
  for (const auto& row : r.rows) {
    std::string status = row.status;
    std::replace(status.begin(), status.end(), ',', ';');
    s += csv::num(row.value) + "," + case_label(row.kind) + "," + status + "," + csv::num(row.left) + "," +
         csv::num(row.right) + "," + csv::num(row.splitting) + "," + csv::num(row.left_shift) + "," +
         csv::num(row.right_shift) + "," + csv::num(row.common_shift) + "," + csv::num(row.splitting_increment) +
         "," + csv::num(row.predicted_increment) + "," + csv::num(row.predicted_common_shift) + "\n";
  }
  std::string sl = "case,quantity,abscissa,loglog_slope\n";
  for (const auto& x : r.slopes)
    sl += std::string(case_label(x.kind)) + "," + x.quantity + "," + x.abscissa + "," + csv::num(x.slope) + "\n";
  std::vector<std::pair<std::string, std::string>> files{{"sweep.csv", s}, {"sweep_slopes.csv", sl}};
  for (const auto& [name, content] : files) csv::atomic_write(dir / name, content);
  std::string header = "sweep.parameter = " + std::string(parameter_name(r.spec.parameter)) + "\nsweep.values =";
  for (double v : r.spec.values) header += " " + csv::num(v);
  header += "\n" + detail::describe(r.spec.base, DerivedCouplings{});
  std::vector<std::string> flagged;
  for (const auto& row : r.rows)
    if (row.status != "ok") flagged.push_back(csv::num(row.value) + " " + case_label(row.kind) + " " + row.status);
  detail::write_manifest(dir, header, files, flagged, {});
}

}  // namespace cqed::scenario
