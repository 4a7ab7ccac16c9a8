#pragma once

// Device parameters and the couplings derived from them.
//
// Internal convention: every frequency, rate and energy is a linear frequency
// in MHz (omega / 2pi). SI quantities only enter through derive_couplings()
// and vacuum_voltage().

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"

namespace cqed {

struct CircuitParams {
  double c_J = 0;         // single junction capacitance (F)
  double C0 = 0;          // qubit-TLR coupling capacitance (F)
  double Cd = 0;          // qubit-NAMR gate capacitance at x = 0 (F)
  double Cg = 0;          // gate capacitance (F)
  double C_t = 0;         // total TLR capacitance (F)
  double L_tlr = 0;       // TLR length (m)
  double V_g = 0;         // gate voltage (V)
  double V_x = 0;         // NAMR bias voltage (V)
  double flux_ratio = 0;  // Phi_e / Phi_0
  double eps_J = 0;       // single-junction Josephson energy (MHz)
  double m = 0;           // NAMR mass (kg)
  double d = 0;           // NAMR equilibrium gap (m)
  double omega_R = 0;     // NAMR angular frequency (rad/s)

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0) || !std::isfinite(v))
        throw std::invalid_argument(std::string("CircuitParams: ") + name + " must be positive");
    };
    positive(c_J, "c_J");
    positive(C0, "C0");
    positive(Cd, "Cd");
    positive(Cg, "Cg");
    positive(C_t, "C_t");
    positive(m, "m");
    positive(d, "d");
    positive(omega_R, "omega_R");
    if (!std::isfinite(flux_ratio)) throw std::invalid_argument("CircuitParams: flux_ratio must be finite");
  }
};

/// How the qubit mixing angle is obtained from the charging/Josephson energies.
enum class MixingConvention {
  AsWritten,  // tan(alpha) = E_J / omega0
  Standard,   // tan(alpha) = E_J / E_C (usual charge-qubit relation)
};

struct DerivedCouplings {
  double E_C = 0;     // MHz
  double E_J = 0;     // MHz
  double omega0 = 0;  // qubit frequency, MHz
  double alpha = 0;   // mixing angle, rad
  double lambda = 0;  // qubit-TLR coupling, MHz (sign as computed)
  double zeta = 0;    // qubit-NAMR coupling, MHz
  double nu = 0;      // selected TLR mode, MHz
  double delta = 0;   // omega0 - omega_R, MHz
  double eta = 0;     // zeta / delta

  double omega_R() const { return omega0 - delta; }
  /// zeta^2 / delta, the Stark scale that sets every NAMR-induced shift.
  double stark() const { return zeta * zeta / delta; }
};

struct DampingParams {
  double gamma_c = 0;  // c-bath rate, MHz
  double gamma_d = 0;  // d-bath rate, MHz
  double Q_nu = 0;     // TLR mode quality factor
  double Q_R = 0;      // NAMR quality factor; metadata, never enters the dynamics
  // false: c-bath damps the photon, d-bath the excited qubit (Hamiltonian
  // structure). true: the assignment stated in the prose (c on the qubit).
  bool swapped = false;

  double photon_rate() const { return swapped ? gamma_d : gamma_c; }
  double qubit_rate() const { return swapped ? gamma_c : gamma_d; }
  double gamma_R(double nu) const { return Q_R > 0 ? nu / Q_R : 0.0; }

  void validate() const {
    if (!(gamma_c >= 0) || !(gamma_d >= 0))
      throw std::invalid_argument("DampingParams: decay rates must be non-negative");
  }

  /// gamma_c = nu / Q_nu, gamma_d = ratio * gamma_c.
  static DampingParams from_quality(double nu, double Q_nu, double ratio_d_over_c, double Q_R = 0) {
    if (!(Q_nu > 0)) throw std::invalid_argument("DampingParams: Q_nu must be positive");
    DampingParams dp;
    dp.Q_nu = Q_nu;
    dp.Q_R = Q_R;
    dp.gamma_c = nu / Q_nu;
    dp.gamma_d = ratio_d_over_c * dp.gamma_c;
    return dp;
  }
};

/// Qubit/resonator couplings specified directly, as in the figure parameter
/// sets. The operating point is taken at charge degeneracy (E_C = 0).
inline DerivedCouplings make_couplings(double nu, double omega0, double omega_R, double lambda, double zeta,
                                       MixingConvention convention = MixingConvention::AsWritten) {
  DerivedCouplings dc;
  dc.nu = nu;
  dc.omega0 = omega0;
  dc.E_C = 0;
  dc.E_J = omega0;
  dc.alpha = convention == MixingConvention::AsWritten ? std::atan2(dc.E_J, omega0) : std::atan2(dc.E_J, dc.E_C);
  dc.lambda = lambda;
  dc.zeta = zeta;
  dc.delta = omega0 - omega_R;
  if (dc.delta == 0) throw std::invalid_argument("make_couplings: zero qubit-NAMR detuning");
  dc.eta = zeta / dc.delta;
  return dc;
}

/// Same, with zeta fixed by the Stark scale zeta^2/delta.
inline DerivedCouplings make_couplings_from_stark(double nu, double omega0, double omega_R, double lambda,
                                                  double stark) {
  const double delta = omega0 - omega_R;
  if (!(delta > 0)) throw RegimeError("make_couplings_from_stark: requires omega0 > omega_R");
  if (stark < 0) throw std::invalid_argument("make_couplings_from_stark: negative Stark scale");
  return make_couplings(nu, omega0, omega_R, lambda, std::sqrt(stark * delta));
}

/// Evaluates the charge-qubit operating point and both couplings from circuit
/// quantities. C0 and Cd must agree (the model takes C = C0 = Cd).
inline DerivedCouplings derive_couplings(const CircuitParams& p, double nu,
                                         MixingConvention convention = MixingConvention::AsWritten,
                                         double capacitance_tolerance = 0.01) {
  using namespace constants;
  p.validate();
  if (!(nu > 0)) throw std::invalid_argument("derive_couplings: nu must be positive");
  if (std::abs(p.C0 - p.Cd) > capacitance_tolerance * std::max(p.C0, p.Cd))
    throw std::invalid_argument("derive_couplings: C0 and Cd must be equal within tolerance");

  const double C = 0.5 * (p.C0 + p.Cd);
  const double C_J = 2.0 * p.c_J;
  const double beta = C / (2.0 * C_J + C);

  DerivedCouplings dc;
  dc.nu = nu;
  dc.E_C = elementary_charge * beta * (p.V_g + p.V_x) / planck / hz_per_mhz;
  dc.E_J = 2.0 * p.eps_J * std::cos(pi * p.flux_ratio);
  dc.omega0 = std::hypot(dc.E_C, dc.E_J);
  dc.alpha = convention == MixingConvention::AsWritten ? std::atan2(dc.E_J, dc.omega0)
                                                       : std::atan2(dc.E_J, dc.E_C);
  const double sin_alpha = std::sin(dc.alpha);

  // hbar * lambda = -e V_rms beta sin(alpha), V_rms = sqrt(hbar nu / C_t).
  const double v_rms = std::sqrt(hbar * two_pi * nu * hz_per_mhz / p.C_t);
  dc.lambda = -elementary_charge * v_rms * beta * sin_alpha / planck / hz_per_mhz;

  // hbar * zeta = e V_x beta sin(alpha) x_zpf / (2 d), x_zpf = sqrt(hbar / (2 m omega_R)).
  const double x_zpf = std::sqrt(hbar / (2.0 * p.m * p.omega_R));
  dc.zeta = elementary_charge * p.V_x * beta * sin_alpha * x_zpf / (2.0 * p.d) / planck / hz_per_mhz;

  const double omega_R = p.omega_R / two_pi / hz_per_mhz;
  dc.delta = dc.omega0 - omega_R;
  if (std::abs(dc.delta) <= 1e-12 * dc.omega0)
    throw std::invalid_argument("derive_couplings: omega0 equals omega_R, detuning undefined");
  dc.eta = dc.zeta / dc.delta;
  return dc;
}

/// Zero-point voltage of a TLR mode, sqrt(hbar * 2pi nu / C_t), in volts.
inline double vacuum_voltage(double nu, double C_t) {
  if (!(nu > 0) || !(C_t > 0)) throw std::invalid_argument("vacuum_voltage: inputs must be positive");
  return std::sqrt(constants::hbar * constants::two_pi * nu * constants::hz_per_mhz / C_t);
}

/// Throws RegimeError unless delta > 0 and |eta| < threshold.
inline void require_dispersive(const DerivedCouplings& dc, double threshold = 0.1) {
  if (!(dc.delta > 0))
    throw RegimeError("dispersive regime requires omega0 > omega_R (delta = " + std::to_string(dc.delta) + " MHz)");
  if (!(std::abs(dc.eta) < threshold))
    throw RegimeError("dispersive regime violated: eta = " + std::to_string(dc.eta) +
                      " >= " + std::to_string(threshold));
}

/// Reference device. The capacitance ratio C_J/C = 0.1 and V_x = 0.1 V follow
/// the estimate behind zeta ~ 30 MHz; the gap, mass and TLR capacitance are
/// our own choices that land zeta near 30 MHz and V_rms near 2 uV at 6 GHz.
inline CircuitParams reference_circuit() {
  CircuitParams p;
  p.C0 = 1.0e-15;
  p.Cd = 1.0e-15;
  p.Cg = 1.0e-15;
  p.c_J = 0.05e-15;  // C_J = 2 c_J = 0.1 C
  p.C_t = 1.0e-12;
  p.L_tlr = 0.024;
  p.V_x = 0.1;
  p.V_g = -0.1 + 4.962801236308631e-06;  // E_C = 1000 MHz
  p.flux_ratio = 0.0;
  p.eps_J = 0.5 * std::sqrt(6000.0 * 6000.0 - 1000.0 * 1000.0);  // omega0 = 6000 MHz
  p.m = 4.666e-20;
  p.d = 100e-9;
  p.omega_R = constants::two_pi * 1.0e9;
  return p;
}

}  // namespace cqed
