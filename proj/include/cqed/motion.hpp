#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "cqed/params.hpp"

namespace cqed {

/// NAMR plate at rest.
struct NoMotion {};

/// NAMR oscillating classically at omega_R (MHz): a coherent qubit drive.
struct Classical {
  double omega_R = 0;
};

/// NAMR as a quantised mode at omega_R (MHz) holding n_c phonons.
struct Quantum {
  double omega_R = 0;
  unsigned n_c = 0;
};

using MotionCase = std::variant<NoMotion, Classical, Quantum>;

enum class CaseKind { N, C, Q };

inline CaseKind kind_of(const MotionCase& mc) { return static_cast<CaseKind>(mc.index()); }

inline const char* case_label(CaseKind k) {
  switch (k) {
    case CaseKind::N: return "N";
    case CaseKind::C: return "C";
    case CaseKind::Q: return "Q";
  }
  return "?";
}

inline CaseKind parse_case(const std::string& s) {
  if (s == "N" || s == "none" || s == "NoMotion") return CaseKind::N;
  if (s == "C" || s == "classical" || s == "Classical") return CaseKind::C;
  if (s == "Q" || s == "quantum" || s == "Quantum") return CaseKind::Q;
  throw std::invalid_argument("unknown motion case '" + s + "'");
}

inline MotionCase make_case(CaseKind k, const DerivedCouplings& dc, unsigned n_c) {
  switch (k) {
    case CaseKind::N: return NoMotion{};
    case CaseKind::C: return Classical{dc.omega_R()};
    case CaseKind::Q: return Quantum{dc.omega_R(), n_c};
  }
  return NoMotion{};
}

/// NAMR frequency carried by a moving case must agree with omega0 - delta.
inline void check_consistent(const MotionCase& mc, const DerivedCouplings& dc) {
  double omega_R = 0;
  if (auto* c = std::get_if<Classical>(&mc)) omega_R = c->omega_R;
  else if (auto* q = std::get_if<Quantum>(&mc)) omega_R = q->omega_R;
  else return;
  if (std::abs(omega_R - dc.omega_R()) > 1e-9 * std::max(1.0, std::abs(dc.omega0)))
    throw std::invalid_argument("motion case omega_R disagrees with omega0 - delta");
}

}  // namespace cqed
