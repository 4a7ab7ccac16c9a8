#pragma once

// Stark-shift picture of the qubit/NAMR coupling checked against exact
// diagonalisation. The rotating-wave qubit-phonon ladder is block diagonal in
// the excitation number, so each 2x2 block is diagonalised on its own.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cqed/errors.hpp"
#include "cqed/motion.hpp"
#include "cqed/params.hpp"
#include "cqed/stats.hpp"

namespace cqed::dispersive {

struct LevelShifts {
  double shift_e = 0;           // MHz
  double shift_g = 0;           // MHz
  double transition_shift = 0;  // shift_e - shift_g
  double asymmetry = 0;         // shift_e + shift_g

  static LevelShifts of(double e, double g) { return {e, g, e - g, e + g}; }
};

/// Level displacements of the effective Stark Hamiltonians.
inline LevelShifts effective_shifts(const MotionCase& mc, const DerivedCouplings& dc, double eta_threshold = 0.1) {
  if (std::holds_alternative<NoMotion>(mc)) return {};
  require_dispersive(dc, eta_threshold);
  check_consistent(mc, dc);
  const double s = dc.stark();
  if (std::holds_alternative<Classical>(mc)) return LevelShifts::of(s, -s);
  const double n = std::get<Quantum>(mc).n_c;
  return LevelShifts::of(s * (n + 1.0), -s * n);
}

struct DressedLevel {
  unsigned excitations = 0;  // qubit excitation + phonon number
  bool qubit_excited = false;  // label of the bare state with the larger overlap
  unsigned phonons = 0;        // phonon number of that bare state
  double energy = 0;           // MHz
  double bare_energy = 0;      // MHz
};

/// Eigenvalues of every excitation block up to n_max, with energies
/// -omega0/2 + m omega_R for |g, m> and omega0/2 + m omega_R for |e, m>.
/// Zero detuning is accepted here (resonant blocks split by 2 zeta sqrt(N)).
inline std::vector<DressedLevel> exact_jc_levels(const DerivedCouplings& dc, unsigned n_max) {
  const double wR = dc.omega_R();
  std::vector<DressedLevel> out;
  out.push_back({0, false, 0, -0.5 * dc.omega0, -0.5 * dc.omega0});
  for (unsigned N = 1; N <= n_max; ++N) {
    const double ee = 0.5 * dc.omega0 + (N - 1) * wR;  // |e, N-1>
    const double eg = -0.5 * dc.omega0 + N * wR;       // |g, N>
    Eigen::Matrix2d h;
    h << ee, dc.zeta * std::sqrt(double(N)), dc.zeta * std::sqrt(double(N)), eg;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
    for (int k = 0; k < 2; ++k) {
      const double ov_e = std::abs(es.eigenvectors()(0, k));
      const double ov_g = std::abs(es.eigenvectors()(1, k));
      // resonant blocks mix evenly; keep the eigenvalue ordering as the label
      const bool excited = ov_e == ov_g ? (k == 1) == (ee >= eg) : ov_e > ov_g;
      out.push_back({N, excited, excited ? N - 1 : N, es.eigenvalues()(k), excited ? ee : eg});
    }
  }
  return out;
}

/// Shifts of |e> and |g> obtained without the Stark approximation: from the
/// dressed ladder for the quantum case, and from the drive-frame 2x2 for the
/// classical case.
inline LevelShifts exact_shifts(const MotionCase& mc, const DerivedCouplings& dc) {
  if (std::holds_alternative<NoMotion>(mc)) return {};
  check_consistent(mc, dc);
  if (std::holds_alternative<Classical>(mc)) {
    const double r = std::hypot(0.5 * dc.delta, dc.zeta);
    const double e = std::copysign(r, dc.delta) - 0.5 * dc.delta;
    return LevelShifts::of(e, -e);
  }
  const unsigned n_c = std::get<Quantum>(mc).n_c;
  const auto levels = exact_jc_levels(dc, n_c + 2);
  double se = 0, sg = 0;
  bool found_e = false, found_g = false;
  for (const auto& l : levels) {
    if (l.qubit_excited && l.phonons == n_c) se = l.energy - l.bare_energy, found_e = true;
    if (!l.qubit_excited && l.phonons == n_c) sg = l.energy - l.bare_energy, found_g = true;
  }
  if (!found_e || !found_g) throw std::logic_error("exact_shifts: dressed level not found");
  return LevelShifts::of(se, sg);
}

struct ErrorRow {
  double zeta = 0;  // MHz
  double eta = 0;
  double error_e = 0;           // |exact - effective| for each quantity, MHz
  double error_g = 0;
  double error_transition = 0;
  double error_max = 0;
};

struct ErrorScaling {
  std::vector<ErrorRow> rows;
  double exponent = 0;  // fitted d log(error_max) / d log(zeta)
};

/// Effective-vs-exact discrepancy along a ladder of zeta values at fixed
/// detuning. Every ladder point must pass the dispersive guard.
inline ErrorScaling dispersive_error_scaling(const MotionCase& mc, const DerivedCouplings& dc,
                                             std::span<const double> zeta_ladder, double eta_threshold = 0.1) {
  if (std::holds_alternative<NoMotion>(mc)) throw std::invalid_argument("dispersive_error_scaling: needs a moving case");
  ErrorScaling out;
  std::vector<double> zs, errs;
  for (double z : zeta_ladder) {
    DerivedCouplings d = dc;
    d.zeta = z;
    d.eta = z / d.delta;
    const auto eff = effective_shifts(mc, d, eta_threshold);
    const auto ex = exact_shifts(mc, d);
    ErrorRow r;
    r.zeta = z;
    r.eta = d.eta;
    r.error_e = std::abs(ex.shift_e - eff.shift_e);
    r.error_g = std::abs(ex.shift_g - eff.shift_g);
    r.error_transition = std::abs(ex.transition_shift - eff.transition_shift);
    r.error_max = std::max({r.error_e, r.error_g, r.error_transition});
    out.rows.push_back(r);
    zs.push_back(std::abs(z));
    errs.push_back(r.error_max);
  }
  std::size_t usable = 0;
  for (std::size_t i = 0; i < zs.size(); ++i) usable += (zs[i] > 0 && errs[i] > 0);
  if (usable >= 2) out.exponent = loglog_slope(zs, errs);
  return out;
}

inline void write_error_csv(const ErrorScaling& s, std::ostream& os) {
  char buf[256];
  os << "zeta_MHz,eta,error_e_MHz,error_g_MHz,error_transition_MHz,error_max_MHz\n";
  for (const auto& r : s.rows) {
    std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e,%.16e,%.16e\n", r.zeta, r.eta, r.error_e, r.error_g,
                  r.error_transition, r.error_max);
    os << buf;
  }
}

}  // namespace cqed::dispersive
