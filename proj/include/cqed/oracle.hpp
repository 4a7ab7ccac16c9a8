#pragma once

// Time-domain oracle. The single-excitation amplitudes of the rotating-wave
// Hamiltonian are integrated directly, with the reservoirs either folded into
// non-Hermitian decay (Wigner-Weisskopf) or kept as explicit discretised mode
// sets, and the TLR spectrum is read off |int dt e^{iwt} c1(t)|^2. Nothing
// here uses the closed-form spectra.
//
// Frequency registration: states carry absolute energies (qubit +/- omega0/2,
// photon nu, phonons counted relative to n_c), so spectra land on the same
// axis as the analytic curves. Time is in microseconds, frequencies in MHz.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"
#include "cqed/motion.hpp"
#include "cqed/params.hpp"
#include "cqed/spectrum.hpp"

namespace cqed::oracle {

using cplx = std::complex<double>;

enum class Qubit { g, e };

struct BasisState {
  Qubit qubit = Qubit::g;
  int photons = 0;
  int phonons = 0;  // absolute phonon number (case Q); 0 otherwise
  double energy = 0;

  bool excited() const { return qubit == Qubit::e; }
  int excitations() const { return (excited() ? 1 : 0) + photons + phonons; }
};

/// Off-diagonal element H[upper][lower] = strength * exp(-i 2pi f t), with
/// f = drive_frequency for the classical NAMR drive and 0 otherwise. The
/// Hermitian partner is implied.
struct Coupling {
  std::size_t upper = 0;
  std::size_t lower = 0;
  double strength = 0;
  double drive_frequency = 0;
  bool driven = false;
};

struct StateSpace {
  MotionCase motion;
  std::vector<BasisState> states;
  std::vector<Coupling> couplings;
  int phonon_truncation = 1;
  unsigned n_c = 0;
  std::size_t initial = 0;  // |e, 0_a, n_c>
  std::size_t photon = 0;   // |g, 1_a, n_c>, whose amplitude is c1
  std::vector<std::string> excluded;

  std::string label(std::size_t i) const {
    const auto& s = states.at(i);
    std::string out = "(";
    out += s.excited() ? "e" : "g";
    out += "," + std::to_string(s.photons);
    if (std::holds_alternative<Quantum>(motion)) out += "," + std::to_string(s.phonons);
    return out + ")";
  }

  std::optional<std::size_t> find(Qubit q, int photons, int phonons) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i].qubit == q && states[i].photons == photons && states[i].phonons == phonons) return i;
    return std::nullopt;
  }

  /// Static couplings conserve qubit + photon + phonon number; driven ones
  /// change it by exactly the one drive quantum absorbed by the excited side.
  void check_excitation_conservation() const {
    for (const auto& c : couplings) {
      const int up = states[c.upper].excitations(), lo = states[c.lower].excitations();
      if (c.driven ? (up != lo + 1) : (up != lo))
        throw std::logic_error("StateSpace: coupling " + label(c.upper) + " - " + label(c.lower) +
                               " violates excitation bookkeeping");
    }
  }
};

/// Enumerates the core states reachable from |e, 0_a, n_c> under the
/// rotating-wave couplings, with at most one TLR photon and phonon numbers
/// within `phonon_truncation` of n_c. Pruned transitions are recorded.
inline StateSpace build_state_space(const MotionCase& mc, const DerivedCouplings& dc, int phonon_truncation = 1) {
  if (phonon_truncation < 1) throw std::invalid_argument("build_state_space: phonon truncation must be >= 1");
  check_consistent(mc, dc);

  StateSpace sp;
  sp.motion = mc;
  sp.phonon_truncation = phonon_truncation;
  const bool quantum = std::holds_alternative<Quantum>(mc);
  const bool classical = std::holds_alternative<Classical>(mc);
  const double omega_R = dc.omega_R();
  if (quantum) sp.n_c = std::get<Quantum>(mc).n_c;
  const int n_c = static_cast<int>(sp.n_c);

  using Key = std::tuple<int, int, int>;  // qubit (0 g / 1 e), photons, phonons
  auto energy = [&](const Key& k) {
    const auto [q, p, m] = k;
    double e = (q == 1 ? 0.5 : -0.5) * dc.omega0 + p * dc.nu;
    if (quantum) e += (m - n_c) * omega_R;
    return e;
  };
  auto name = [&](const Key& k) {
    const auto [q, p, m] = k;
    std::string s = std::string("(") + (q == 1 ? "e" : "g") + "," + std::to_string(p);
    if (quantum) s += "," + std::to_string(m);
    return s + ")";
  };

  struct Edge {
    Key to;
    double amp;
    bool driven;
    const char* via;
  };
  auto neighbours = [&](const Key& k) {
    const auto [q, p, m] = k;
    std::vector<Edge> out;
    if (q == 0 && p >= 1) out.push_back({{1, p - 1, m}, dc.lambda * std::sqrt(double(p)), false, "lambda"});
    if (q == 1) out.push_back({{0, p + 1, m}, dc.lambda * std::sqrt(double(p + 1)), false, "lambda"});
    if (quantum) {
      if (q == 0 && m >= 1) out.push_back({{1, p, m - 1}, dc.zeta * std::sqrt(double(m)), false, "zeta"});
      if (q == 1) out.push_back({{0, p, m + 1}, dc.zeta * std::sqrt(double(m + 1)), false, "zeta"});
    }
    if (classical) out.push_back({{1 - q, p, m}, dc.zeta, true, "zeta drive"});
    return out;
  };

  std::map<Key, std::size_t> index;
  std::queue<Key> frontier;
  const Key start{1, 0, quantum ? n_c : 0};
  index[start] = 0;
  sp.states.push_back({Qubit::e, 0, std::get<2>(start), energy(start)});
  frontier.push(start);
  std::set<std::pair<std::size_t, std::size_t>> seen_edges;
  std::set<std::string> excluded;

  while (!frontier.empty()) {
    const Key k = frontier.front();
    frontier.pop();
    const std::size_t from = index.at(k);
    for (const auto& e : neighbours(k)) {
      const auto [q, p, m] = e.to;
      std::string reason;
      if (p > 1) reason = "photon number capped at 1";
      else if (quantum && std::abs(m - n_c) > phonon_truncation) reason = "phonon truncation";
      if (!reason.empty()) {
        excluded.insert(name(k) + " -> " + name(e.to) + " via " + e.via + " (" + reason + ")");
        continue;
      }
      auto it = index.find(e.to);
      if (it == index.end()) {
        it = index.emplace(e.to, sp.states.size()).first;
        sp.states.push_back({q == 1 ? Qubit::e : Qubit::g, p, m, energy(e.to)});
        frontier.push(e.to);
      }
      const std::size_t to = it->second;
      const auto edge_key = std::minmax(from, to);
      if (!seen_edges.insert(edge_key).second) continue;
      const bool from_excited = std::get<0>(k) == 1;
      Coupling c;
      c.upper = from_excited ? from : to;
      c.lower = from_excited ? to : from;
      c.strength = e.amp;
      c.driven = e.driven;
      c.drive_frequency = e.driven ? omega_R : 0.0;
      sp.couplings.push_back(c);
    }
  }
  sp.excluded.assign(excluded.begin(), excluded.end());
  sp.initial = 0;
  const auto photon = sp.find(Qubit::g, 1, std::get<2>(start));
  if (!photon) throw std::logic_error("build_state_space: photon state missing");
  sp.photon = *photon;
  sp.check_excitation_conservation();
  return sp;
}

struct AmplitudeTrajectory {
  std::vector<double> times;  // us, uniform
  std::vector<cplx> c1;       // |g, 1_a> amplitude
  std::vector<cplx> c2;       // |e, 0_a> amplitude
  std::vector<std::string> extra_labels;
  std::vector<std::vector<cplx>> core_extra;  // remaining core states
  std::vector<double> core_norm;
  std::vector<double> total_norm;  // discretised runs only
  std::vector<cplx> bath_c;        // final photon-bath amplitudes C_j
  std::vector<cplx> bath_d;        // final qubit-bath amplitudes D_k
  std::vector<double> bath_c_frequencies;
  std::vector<double> bath_d_frequencies;
  bool discretized = false;
  std::vector<std::string> warnings;

  double max_norm_drift() const {
    double d = 0;
    for (double n : total_norm) d = std::max(d, std::abs(n - 1.0));
    return d;
  }
};

/// Evolution time after which the Rabi doublet has decayed to `residual`
/// population, for dressed states that are half photon and half qubit.
inline double default_t_max(const DampingParams& dp, double residual = 1e-5) {
  const double rate = constants::pi * (dp.gamma_c + dp.gamma_d);  // |c|^2 decay rate in 1/us
  if (!(rate > 0)) throw std::invalid_argument("default_t_max: needs non-zero damping");
  return std::log(1.0 / residual) / rate;
}

namespace detail {

inline double frame_energy(const StateSpace& sp) { return sp.states[sp.initial].energy; }

/// Highest frequency present in the core amplitudes relative to the frame.
inline double max_core_frequency(const StateSpace& sp) {
  const double ref = frame_energy(sp);
  double f = 0;
  for (const auto& s : sp.states) f = std::max(f, std::abs(s.energy - ref));
  for (const auto& c : sp.couplings) f = std::max({f, 2.0 * std::abs(c.strength), c.drive_frequency});
  return f;
}

inline std::vector<double> sample_times(double t_max, double sample_dt) {
  if (!(t_max > 0) || !(sample_dt > 0)) throw std::invalid_argument("evolve: t_max and sample spacing must be positive");
  const auto n = static_cast<std::size_t>(std::ceil(t_max / sample_dt)) + 1;
  std::vector<double> t(n);
  const double dt = t_max / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) t[i] = dt * static_cast<double>(i);
  t.back() = t_max;
  return t;
}

inline double resolve_sample_dt(const StateSpace& sp, double sample_dt) {
  if (sample_dt > 0) return sample_dt;
  const double f = max_core_frequency(sp);
  return 1.0 / (20.0 * std::max(f, 1.0));
}

inline void prepare(AmplitudeTrajectory& tr, const StateSpace& sp) {
  for (std::size_t i = 0; i < sp.states.size(); ++i) {
    if (i == sp.initial || i == sp.photon) continue;
    tr.extra_labels.push_back(sp.label(i));
  }
  tr.core_extra.assign(tr.extra_labels.size(), {});
}

/// Stores a core state given in the frame rotating at `ref`.
inline void record(AmplitudeTrajectory& tr, const StateSpace& sp, std::span<const cplx> core, double t, double ref) {
  const cplx phase = std::polar(1.0, -constants::two_pi * ref * t);
  tr.times.push_back(t);
  tr.c1.push_back(core[sp.photon] * phase);
  tr.c2.push_back(core[sp.initial] * phase);
  double norm = 0;
  std::size_t extra = 0;
  for (std::size_t i = 0; i < sp.states.size(); ++i) {
    norm += std::norm(core[i]);
    if (i == sp.initial || i == sp.photon) continue;
    tr.core_extra[extra++].push_back(core[i] * phase);
  }
  tr.core_norm.push_back(norm);
}

}  // namespace detail

/// Wigner-Weisskopf evolution: each photon adds -i gamma_photon/2 and an
/// excited qubit -i gamma_qubit/2 to the state energy. Integrated with an
/// adaptive Dormand-Prince 5(4) scheme, sampled on a uniform grid resolving
/// the highest core frequency with at least 20 points per period.
inline AmplitudeTrajectory evolve_markov(const StateSpace& sp, const DampingParams& dp, double t_max,
                                         double sample_dt = 0, double rel_tol = 1e-9, double abs_tol = 1e-12) {
  namespace ode = boost::numeric::odeint;
  using State = std::vector<cplx>;
  dp.validate();

  const std::size_t n = sp.states.size();
  const double ref = detail::frame_energy(sp);
  std::vector<cplx> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = sp.states[i];
    const double rate = s.photons * dp.photon_rate() + (s.excited() ? dp.qubit_rate() : 0.0);
    diag[i] = cplx(s.energy - ref, -0.5 * rate);
  }

  AmplitudeTrajectory tr;
  detail::prepare(tr, sp);
  const double min_t = 10.0 / (constants::two_pi * std::max(dp.gamma_c + dp.gamma_d, 1e-300));
  if (t_max < min_t)
    tr.warnings.push_back("t_max = " + std::to_string(t_max) + " us is below 10/(2pi (gc+gd)) = " +
                          std::to_string(min_t) + " us; spectra may not be converged");

  const auto times = detail::sample_times(t_max, detail::resolve_sample_dt(sp, sample_dt));
  const double w = constants::two_pi;
  auto rhs = [&](const State& y, State& dy, double t) {
    for (std::size_t i = 0; i < n; ++i) dy[i] = diag[i] * y[i];
    for (const auto& c : sp.couplings) {
      const cplx h = c.driven ? c.strength * std::polar(1.0, -w * c.drive_frequency * t) : cplx(c.strength, 0.0);
      dy[c.upper] += h * y[c.lower];
      dy[c.lower] += std::conj(h) * y[c.upper];
    }
    for (auto& v : dy) v *= cplx(0.0, -w);
  };

  State y(n, cplx(0, 0));
  y[sp.initial] = 1.0;
  try {
    auto stepper = ode::make_controlled(abs_tol, rel_tol, ode::runge_kutta_dopri5<State>());
    ode::integrate_times(stepper, rhs, y, times.begin(), times.end(), (times[1] - times[0]) / 4.0,
                         [&](const State& s, double t) { detail::record(tr, sp, s, t, ref); },
                         ode::max_step_checker(100000));
  } catch (const std::exception& e) {
    throw IntegrationError(std::string("evolve_markov: ") + e.what());
  }
  return tr;
}

/// Uniformly spaced reservoir modes with a flat coupling reproducing the
/// golden-rule rate gamma. Frequencies are in the same registration as the
/// spectra: the energy of the single-excitation state holding that mode.
struct BathDiscretization {
  std::size_t mode_count = 0;
  double center = 0;          // MHz
  double half_bandwidth = 0;  // MHz
  double spacing = 0;         // MHz
  double coupling_per_mode = 0;  // MHz, sqrt(gamma spacing / 2pi)

  static BathDiscretization flat(std::size_t mode_count, double center, double half_bandwidth, double gamma) {
    if (mode_count < 2 || !(half_bandwidth > 0) || !(gamma >= 0))
      throw std::invalid_argument("BathDiscretization: invalid mode count, bandwidth or rate");
    BathDiscretization b;
    b.mode_count = mode_count;
    b.center = center;
    b.half_bandwidth = half_bandwidth;
    b.spacing = 2.0 * half_bandwidth / static_cast<double>(mode_count);
    b.coupling_per_mode = std::sqrt(gamma * b.spacing / constants::two_pi);
    return b;
  }

  std::vector<double> frequencies() const {
    std::vector<double> f(mode_count);
    for (std::size_t j = 0; j < mode_count; ++j)
      f[j] = center - half_bandwidth + (static_cast<double>(j) + 0.5) * spacing;
    return f;
  }

  /// Golden-rule rate implied by the flat coupling.
  double gamma() const { return constants::two_pi * coupling_per_mode * coupling_per_mode / spacing; }
  /// First revival of emitted amplitude, 2pi / (angular spacing).
  double recurrence_time() const { return 1.0 / spacing; }
};

/// Unitary evolution of core states plus both reservoirs. Requires a space in
/// which all emission returns to one common ground state (case N, or case Q
/// with n_c = 0): one photon-carrying state and one excited-qubit state.
/// Fixed-step degree-12 Taylor propagator with step <= 1/(50 half_bandwidth).
inline AmplitudeTrajectory evolve_discretized(const StateSpace& sp, const BathDiscretization& photon_bath,
                                              const BathDiscretization& qubit_bath, double t_max,
                                              double sample_dt = 0) {
  for (const auto& c : sp.couplings)
    if (c.driven) throw std::invalid_argument("evolve_discretized: driven (classical) cases are not supported");
  std::vector<std::size_t> photon_states, excited_states;
  for (std::size_t i = 0; i < sp.states.size(); ++i) {
    if (sp.states[i].photons > 0) photon_states.push_back(i);
    if (sp.states[i].excited()) excited_states.push_back(i);
  }
  if (photon_states.size() != 1 || excited_states.size() != 1 || photon_states[0] == excited_states[0])
    throw std::invalid_argument(
        "evolve_discretized: emission must return every decaying state to a common ground (case N or Q with n_c = 0)");
  const std::size_t ph = photon_states[0], ex = excited_states[0];
  const double horizon = std::min(photon_bath.recurrence_time(), qubit_bath.recurrence_time());
  if (!(t_max < horizon))
    throw std::invalid_argument("evolve_discretized: t_max = " + std::to_string(t_max) +
                                " us reaches the bath recurrence time " + std::to_string(horizon) + " us");

  AmplitudeTrajectory tr;
  tr.discretized = true;
  detail::prepare(tr, sp);
  {
    double feature = 0;
    for (const auto& c : sp.couplings) feature = std::max(feature, 2.0 * std::abs(c.strength));
    const double need = 50.0 * std::max({photon_bath.gamma(), qubit_bath.gamma(), feature});
    if (2.0 * std::min(photon_bath.half_bandwidth, qubit_bath.half_bandwidth) < need)
      tr.warnings.push_back("bath bandwidth below 50x the largest rate/coupling scale (" + std::to_string(need) +
                            " MHz)");
  }

  const std::size_t nc = sp.states.size(), mc = photon_bath.mode_count, md = qubit_bath.mode_count;
  const std::size_t dim = nc + mc + md;
  const double ref = photon_bath.center;
  const double w = constants::two_pi;
  std::vector<double> ec(nc);
  for (std::size_t i = 0; i < nc; ++i) ec[i] = w * (sp.states[i].energy - ref);
  auto fc = photon_bath.frequencies(), fd = qubit_bath.frequencies();
  for (double& f : fc) f = w * (f - ref);
  for (double& f : fd) f = w * (f - ref);
  const double uc = w * photon_bath.coupling_per_mode, ud = w * qubit_bath.coupling_per_mode;

  // out = -i dt H in
  auto apply = [&](const std::vector<cplx>& in, std::vector<cplx>& out, double dt) {
    const cplx f(0.0, -dt);
    cplx sum_c = 0, sum_d = 0;
    for (std::size_t j = 0; j < mc; ++j) {
      out[nc + j] = f * (fc[j] * in[nc + j] + uc * in[ph]);
      sum_c += in[nc + j];
    }
    for (std::size_t k = 0; k < md; ++k) {
      out[nc + mc + k] = f * (fd[k] * in[nc + mc + k] + ud * in[ex]);
      sum_d += in[nc + mc + k];
    }
    for (std::size_t i = 0; i < nc; ++i) out[i] = ec[i] * in[i];
    for (const auto& c : sp.couplings) {
      out[c.upper] += w * c.strength * in[c.lower];
      out[c.lower] += w * c.strength * in[c.upper];
    }
    out[ph] += uc * sum_c;
    out[ex] += ud * sum_d;
    for (std::size_t i = 0; i < nc; ++i) out[i] *= f;
  };

  const auto times = detail::sample_times(t_max, detail::resolve_sample_dt(sp, sample_dt));
  const double sample_step = times[1] - times[0];
  const double max_step = 1.0 / (50.0 * std::max(photon_bath.half_bandwidth, qubit_bath.half_bandwidth));
  const auto substeps = static_cast<std::size_t>(std::ceil(sample_step / max_step));
  const double dt = sample_step / static_cast<double>(substeps);
  constexpr int order = 12;

  std::vector<cplx> y(dim, cplx(0, 0)), term(dim), next(dim);
  y[sp.initial] = 1.0;
  auto snapshot = [&](double t) {
    detail::record(tr, sp, std::span<const cplx>(y.data(), nc), t, ref);
    double total = 0;
    for (const auto& v : y) total += std::norm(v);
    tr.total_norm.push_back(total);
  };
  snapshot(times[0]);
  for (std::size_t s = 1; s < times.size(); ++s) {
    for (std::size_t sub = 0; sub < substeps; ++sub) {
      std::vector<cplx> acc = y;
      term = y;
      for (int k = 1; k <= order; ++k) {
        apply(term, next, dt);
        const double inv = 1.0 / k;
        for (std::size_t i = 0; i < dim; ++i) {
          term[i] = next[i] * inv;
          acc[i] += term[i];
        }
      }
      y.swap(acc);
    }
    snapshot(times[s]);
  }

  const cplx phase = std::polar(1.0, -w * ref * times.back());
  tr.bath_c.resize(mc);
  tr.bath_d.resize(md);
  for (std::size_t j = 0; j < mc; ++j) tr.bath_c[j] = y[nc + j] * phase;
  for (std::size_t k = 0; k < md; ++k) tr.bath_d[k] = y[nc + mc + k] * phase;
  tr.bath_c_frequencies = photon_bath.frequencies();
  tr.bath_d_frequencies = qubit_bath.frequencies();
  return tr;
}

/// |int_0^T dt e^{i 2pi w t} c1(t)|^2 by trapezoidal quadrature on the
/// trajectory samples, evaluated at arbitrary grid points.
inline SpectrumCurve spectrum_from_c1(const AmplitudeTrajectory& tr, std::span<const double> grid,
                                      std::vector<std::string>* warnings = nullptr) {
  if (grid.empty()) throw std::invalid_argument("spectrum_from_c1: empty grid");
  if (tr.times.size() < 2) throw std::invalid_argument("spectrum_from_c1: trajectory too short");
  const std::size_t n = tr.times.size();
  const double dt = tr.times[1] - tr.times[0];
  const double t0 = tr.times.front();
  if (warnings && std::norm(tr.c1.back()) + std::norm(tr.c2.back()) > 1e-4)
    warnings->push_back("spectrum_from_c1: emitting amplitudes not decayed below 1e-4 at t_max; expect truncation ringing");

  SpectrumCurve out;
  out.omega.assign(grid.begin(), grid.end());
  out.values.resize(grid.size());
  constexpr std::size_t resync = 2048;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double w = constants::two_pi * grid[g];
    const cplx step = std::polar(1.0, w * dt);
    cplx phase = std::polar(1.0, w * t0);
    cplx acc = 0.5 * tr.c1[0] * phase;
    for (std::size_t k = 1; k < n; ++k) {
      phase = (k % resync == 0) ? std::polar(1.0, w * (t0 + dt * static_cast<double>(k))) : phase * step;
      acc += (k + 1 == n ? 0.5 : 1.0) * tr.c1[k] * phase;
    }
    out.values[g] = std::norm(acc * dt);
  }
  return out;
}

/// Emission spectrum read from the asymptotic photon-reservoir occupations.
inline SpectrumCurve spectrum_from_bath(const AmplitudeTrajectory& tr, std::span<const double> bath_c_frequencies) {
  if (!tr.discretized || tr.bath_c.empty())
    throw std::invalid_argument("spectrum_from_bath: trajectory carries no reservoir amplitudes");
  if (bath_c_frequencies.size() != tr.bath_c.size())
    throw std::invalid_argument("spectrum_from_bath: frequency list does not match the reservoir");
  SpectrumCurve out;
  out.omega.assign(bath_c_frequencies.begin(), bath_c_frequencies.end());
  out.values.resize(tr.bath_c.size());
  for (std::size_t j = 0; j < tr.bath_c.size(); ++j) out.values[j] = std::norm(tr.bath_c[j]);
  return out;
}

/// Sum of asymptotic reservoir occupations.
inline double bath_population(const AmplitudeTrajectory& tr) {
  double s = 0;
  for (const auto& v : tr.bath_c) s += std::norm(v);
  for (const auto& v : tr.bath_d) s += std::norm(v);
  return s;
}

/// State label "(g,0,2)" as a CSV-safe column stem "g_0_2".
inline std::string column_stem(const std::string& label) {
  std::string out;
  for (char ch : label) {
    if (ch == '(' || ch == ')') continue;
    out += ch == ',' ? '_' : ch;
  }
  return out;
}

/// CSV columns: time_us, re/im of c1, c2 and every other core amplitude
/// (re_g_0_2 for state (g,0,2)), core_norm.
inline void write_trajectory_csv(const AmplitudeTrajectory& tr, std::ostream& os) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return std::string(buf);
  };
  os << "time_us,re_c1,im_c1,re_c2,im_c2";
  for (const auto& l : tr.extra_labels) os << ",re_" << column_stem(l) << ",im_" << column_stem(l);
  os << ",core_norm\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    os << num(tr.times[i]) << ',' << num(tr.c1[i].real()) << ',' << num(tr.c1[i].imag()) << ','
       << num(tr.c2[i].real()) << ',' << num(tr.c2[i].imag());
    for (const auto& series : tr.core_extra) os << ',' << num(series[i].real()) << ',' << num(series[i].imag());
    os << ',' << num(tr.core_norm[i]) << '\n';
  }
}

}  // namespace cqed::oracle
