#pragma once

// Closed-form TLR voltage-fluctuation spectra for the three NAMR motion cases.
//
// All spectra share one kernel:
//
//   S(w) ~ (lambda / Delta)^2 |1/P+ - 1/P-|^2,
//   P(+/-) = -(gc + gd)/4 +/- xi/2 + i [w - (nu_eff -/+ chi)/2],
//
// with (Delta, theta, xi, chi) from the Stark scale rho of the case and
// nu_eff = nu + zeta^2/delta for the quantum case (nu otherwise). The peak
// registration at (nu -/+ chi)/2 assumes the qubit tuned to the TLR mode.

#include <cmath>
#include <complex>
#include <span>
#include <variant>
#include <vector>

#include "cqed/errors.hpp"
#include "cqed/motion.hpp"
#include "cqed/params.hpp"
#include "cqed/spectrum.hpp"

namespace cqed::analytic {

struct SplittingParams {
  double rho = 0;          // Stark detuning between |e,0> and |g,1>, MHz
  double Delta = 0;        // (complex) Rabi splitting modulus, MHz
  double theta = 0;        // its phase, rad
  double xi = 0;           // Delta sin(theta/2)
  double chi = 0;          // Delta cos(theta/2)
  double delta_omega = 0;  // common rightward shift zeta^2/(2 delta); case Q only
};

namespace detail {

/// 4 lambda^2 + gc gd - (gc + gd)^2 / 4; must be non-negative for a split doublet.
inline double rabi_radicand(double lambda, const DampingParams& dp) {
  const double gs = dp.gamma_c + dp.gamma_d;
  return 4.0 * lambda * lambda + dp.gamma_c * dp.gamma_d - gs * gs / 4.0;
}

inline SplittingParams from_rho(double rho, double delta_omega, const DerivedCouplings& dc, const DampingParams& dp) {
  dp.validate();
  const double radicand = rabi_radicand(dc.lambda, dp);
  if (radicand < 0)
    throw RegimeError("Rabi splitting radicand is negative (" + std::to_string(radicand) +
                      " MHz^2): overdamped, no two-peak structure");
  SplittingParams sp;
  sp.rho = rho;
  sp.delta_omega = delta_omega;
  if (rho == 0) {
    sp.Delta = std::sqrt(radicand);
    sp.theta = 0;
  } else {
    const double base = radicand + rho * rho;
    const double cross = rho * (dp.gamma_c - dp.gamma_d);
    sp.Delta = std::pow(base * base + cross * cross, 0.25);
    sp.theta = std::atan(cross / base);
  }
  sp.xi = sp.Delta * std::sin(sp.theta / 2.0);
  sp.chi = sp.Delta * std::cos(sp.theta / 2.0);
  return sp;
}

inline double density(double w, double nu_eff, double lambda, double gamma_sum, const SplittingParams& sp) {
  using C = std::complex<double>;
  const C p_plus(-gamma_sum / 4.0 + sp.xi / 2.0, w - (nu_eff - sp.chi) / 2.0);
  const C p_minus(-gamma_sum / 4.0 - sp.xi / 2.0, w - (nu_eff + sp.chi) / 2.0);
  const double pref = lambda / sp.Delta;
  return pref * pref * std::norm(1.0 / p_plus - 1.0 / p_minus);
}

inline SpectrumCurve evaluate(std::span<const double> grid, double nu_eff, const DerivedCouplings& dc,
                              const DampingParams& dp, const SplittingParams& sp, Normalization norm) {
  if (grid.empty()) throw std::invalid_argument("spectrum: empty grid");
  SpectrumCurve c;
  c.omega.assign(grid.begin(), grid.end());
  c.values.resize(grid.size());
  const double gs = dp.gamma_c + dp.gamma_d;
  for (std::size_t i = 0; i < grid.size(); ++i) c.values[i] = density(grid[i], nu_eff, dc.lambda, gs, sp);
  return norm == Normalization::UnitPeak ? c.unit_peak() : c;
}

/// Quantum-case spectrum at a formal (possibly non-integer) occupation.
/// Only meant for identity checks; physical callers use spectrum_Q.
inline SpectrumCurve spectrum_Q_formal(std::span<const double> grid, const DerivedCouplings& dc,
                                       const DampingParams& dp, double n_c,
                                       Normalization norm = Normalization::UnitPeak) {
  if (n_c < 0) throw std::invalid_argument("spectrum_Q: n_c must be non-negative");
  const double s = dc.stark();
  const auto sp = from_rho((2.0 * n_c + 1.0) * s, s / 2.0, dc, dp);
  return evaluate(grid, dc.nu + 2.0 * sp.delta_omega, dc, dp, sp, norm);
}

}  // namespace detail

/// Bare TLR Lorentzian centred at nu with FWHM nu / Q_nu.
inline SpectrumCurve bare_spectrum(std::span<const double> grid, double nu, double Q_nu,
                                   Normalization norm = Normalization::UnitPeak) {
  if (grid.empty()) throw std::invalid_argument("bare_spectrum: empty grid");
  if (!(Q_nu > 0)) throw std::invalid_argument("bare_spectrum: Q_nu must be positive");
  const double half = nu / Q_nu / 2.0;
  SpectrumCurve c;
  c.omega.assign(grid.begin(), grid.end());
  c.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i] - nu;
    c.values[i] = 1.0 / (x * x + half * half);
  }
  return norm == Normalization::UnitPeak ? c.unit_peak() : c;
}

inline SplittingParams splitting_params(const MotionCase& mc, const DerivedCouplings& dc, const DampingParams& dp) {
  if (std::holds_alternative<NoMotion>(mc)) return detail::from_rho(0.0, 0.0, dc, dp);
  const double s = dc.stark();
  if (std::holds_alternative<Classical>(mc)) return detail::from_rho(2.0 * s, 0.0, dc, dp);
  const auto& q = std::get<Quantum>(mc);
  return detail::from_rho((2.0 * q.n_c + 1.0) * s, s / 2.0, dc, dp);
}

inline SpectrumCurve spectrum_N(std::span<const double> grid, const DerivedCouplings& dc, const DampingParams& dp,
                                Normalization norm = Normalization::UnitPeak) {
  return detail::evaluate(grid, dc.nu, dc, dp, splitting_params(NoMotion{}, dc, dp), norm);
}

inline SpectrumCurve spectrum_C(std::span<const double> grid, const DerivedCouplings& dc, const DampingParams& dp,
                                Normalization norm = Normalization::UnitPeak) {
  return detail::evaluate(grid, dc.nu, dc, dp, splitting_params(Classical{dc.omega_R()}, dc, dp), norm);
}

inline SpectrumCurve spectrum_Q(std::span<const double> grid, const DerivedCouplings& dc, const DampingParams& dp,
                                unsigned n_c, Normalization norm = Normalization::UnitPeak) {
  return detail::spectrum_Q_formal(grid, dc, dp, static_cast<double>(n_c), norm);
}

inline SpectrumCurve spectrum(const MotionCase& mc, std::span<const double> grid, const DerivedCouplings& dc,
                              const DampingParams& dp, Normalization norm = Normalization::UnitPeak) {
  check_consistent(mc, dc);
  return std::visit(
      [&](const auto& m) -> SpectrumCurve {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NoMotion>) return spectrum_N(grid, dc, dp, norm);
        else if constexpr (std::is_same_v<T, Classical>) return spectrum_C(grid, dc, dp, norm);
        else return spectrum_Q(grid, dc, dp, m.n_c, norm);
      },
      mc);
}

/// Small-shift predictions for the two peaks, valid for 2|lambda| >> gc, gd.
struct PredictedPeaks {
  double left = 0;     // MHz
  double right = 0;    // MHz
  double splitting = 0;
  double splitting_increment = 0;   // rho^2 / (4 lambda)
  double increment_as_written = 0;  // zeta^4/(lambda delta^2) (C), (n_c+1/2)^2 zeta^4/(lambda delta^2) (Q)
  double delta_omega = 0;           // zeta^2 / (2 delta), case Q
  double left_shift = 0;            // vs case N, positive = rightward
  double right_shift = 0;
};

inline PredictedPeaks predicted_peaks(const MotionCase& mc, const DerivedCouplings& dc, const DampingParams& dp) {
  const auto base = splitting_params(NoMotion{}, dc, dp);
  const auto sp = splitting_params(mc, dc, dp);
  const double lam = std::abs(dc.lambda);
  PredictedPeaks p;
  p.delta_omega = sp.delta_omega;
  if (sp.rho != 0 && lam > 0) {
    p.splitting_increment = sp.rho * sp.rho / (4.0 * lam);
    const double z4 = std::pow(dc.zeta, 4) / (lam * dc.delta * dc.delta);
    if (auto* q = std::get_if<Quantum>(&mc)) {
      const double h = q->n_c + 0.5;
      p.increment_as_written = h * h * z4;
    } else {
      p.increment_as_written = z4;
    }
  }
  p.splitting = base.Delta + p.splitting_increment;
  p.left = dc.nu / 2.0 - p.splitting / 2.0 + p.delta_omega;
  p.right = dc.nu / 2.0 + p.splitting / 2.0 + p.delta_omega;
  p.left_shift = -p.splitting_increment / 2.0 + p.delta_omega;
  p.right_shift = p.splitting_increment / 2.0 + p.delta_omega;
  return p;
}

}  // namespace cqed::analytic
