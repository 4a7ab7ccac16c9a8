#pragma once

// Peak extraction from sampled spectra: local-maximum search with quadratic
// refinement, and a Levenberg-Marquardt fit of one or two Lorentzians on a
// constant baseline for sub-grid centres.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cqed/errors.hpp"
#include "cqed/spectrum.hpp"

namespace cqed::peaks {

struct Peak {
  double center = 0;        // MHz
  double fwhm = 0;          // MHz
  double height = 0;        // arbitrary units, above baseline for fitted peaks
  double center_error = 0;  // standard error of a fitted centre, MHz
};

struct PeakReport {
  std::vector<Peak> peaks;  // sorted by centre
  std::optional<double> splitting;
  double baseline = 0;
  double fit_residual = 0;  // RMS residual relative to the curve maximum
  int iterations = 0;

  void finalize() {
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.center < b.center; });
    splitting.reset();
    if (peaks.size() >= 2) splitting = peaks[1].center - peaks[0].center;
  }
};

struct FitError : std::runtime_error {
  FitError(const std::string& what, PeakReport last) : std::runtime_error(what), last_iterate(std::move(last)) {}
  PeakReport last_iterate;
};

namespace detail {

/// Vertex of the parabola through three (possibly unevenly spaced) points.
inline double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2, double* curvature) {
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double a = (d12 - d01) / (x2 - x0);  // y = a x^2 + ...
  if (curvature) *curvature = 2.0 * a;
  if (a == 0) return x1;
  const double b = d01 - a * (x0 + x1);
  return -b / (2.0 * a);
}

inline double crossing(double xa, double ya, double xb, double yb, double level) {
  if (yb == ya) return 0.5 * (xa + xb);
  return xa + (level - ya) * (xb - xa) / (yb - ya);
}

}  // namespace detail

/// Local maxima whose topographic prominence exceeds `prominence` times the
/// global maximum. At most the two tallest are kept.
inline PeakReport find_peaks(const SpectrumCurve& curve, double prominence = 0.05) {
  if (curve.empty()) throw std::invalid_argument("find_peaks: empty curve");
  const auto& x = curve.omega;
  const auto& y = curve.values;
  const std::size_t n = y.size();
  const double ymax = curve.max_value();
  if (!(ymax > 0) || n < 3) throw EmptySpectrum("find_peaks: no peak above threshold");

  std::vector<std::size_t> maxima;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1])) continue;
    std::size_t j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;  // plateau
    if (j + 1 < n && y[j + 1] < y[i]) maxima.push_back((i + j) / 2);
    i = j;
  }

  struct Candidate {
    std::size_t index;
    double prominence;
  };
  std::vector<Candidate> kept;
  for (std::size_t idx : maxima) {
    double left_min = y[idx], right_min = y[idx];
    for (std::size_t k = idx; k-- > 0;) {
      if (y[k] > y[idx]) break;
      left_min = std::min(left_min, y[k]);
    }
    for (std::size_t k = idx + 1; k < n; ++k) {
      if (y[k] > y[idx]) break;
      right_min = std::min(right_min, y[k]);
    }
    const double prom = y[idx] - std::max(left_min, right_min);
    if (prom >= prominence * ymax) kept.push_back({idx, prom});
  }
  if (kept.empty()) throw EmptySpectrum("find_peaks: no peak above threshold");
  std::sort(kept.begin(), kept.end(), [&](const Candidate& a, const Candidate& b) { return y[a.index] > y[b.index]; });
  if (kept.size() > 2) kept.resize(2);

  PeakReport report;
  for (const auto& c : kept) {
    const std::size_t i = c.index;
    double curv = 0;
    Peak p;
    p.center = detail::parabola_vertex(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1], &curv);
    if (p.center < x[i - 1] || p.center > x[i + 1]) p.center = x[i];
    p.height = y[i];
    const double half = 0.5 * y[i];
    std::optional<double> lo, hi;
    for (std::size_t k = i; k-- > 0;) {
      if (y[k] <= half) {
        lo = detail::crossing(x[k], y[k], x[k + 1], y[k + 1], half);
        break;
      }
    }
    for (std::size_t k = i + 1; k < n; ++k) {
      if (y[k] <= half) {
        hi = detail::crossing(x[k - 1], y[k - 1], x[k], y[k], half);
        break;
      }
    }
    if (lo && hi) {
      p.fwhm = *hi - *lo;
    } else if (lo) {
      p.fwhm = 2.0 * (p.center - *lo);
    } else if (hi) {
      p.fwhm = 2.0 * (*hi - p.center);
    } else if (curv < 0) {
      // Window narrower than the peak: Lorentzian curvature at the top.
      p.fwhm = 2.0 * std::sqrt(-2.0 * y[i] / curv);
    } else {
      p.fwhm = x.back() - x.front();
    }
    report.peaks.push_back(p);
  }
  report.finalize();
  return report;
}

struct FitOptions {
  int max_iterations = 400;
  double step_tolerance = 1e-13;  // on scaled parameters
  double cost_tolerance = 1e-16;  // relative cost decrease
};

/// Least-squares fit of len(initial.peaks) Lorentzians (one or two) plus a
/// constant baseline. Centres move in units of the initial FWHM, widths are
/// fitted in log space, amplitudes relative to the curve maximum.
inline PeakReport fit_lorentzian_pair(const SpectrumCurve& curve, const PeakReport& initial, FitOptions opts = {}) {
  if (initial.peaks.empty()) throw std::invalid_argument("fit_lorentzian_pair: initial report has no peaks");
  if (curve.size() < 8) throw std::invalid_argument("fit_lorentzian_pair: too few samples");

  std::vector<Peak> seeds = initial.peaks;
  if (seeds.size() > 2) {
    std::sort(seeds.begin(), seeds.end(), [](const Peak& a, const Peak& b) { return a.height > b.height; });
    seeds.resize(2);
  }
  const int k_peaks = static_cast<int>(seeds.size());
  const int n_par = 3 * k_peaks + 1;
  const Eigen::Index n = static_cast<Eigen::Index>(curve.size());
  const double scale = curve.max_value();
  if (!(scale > 0)) throw EmptySpectrum("fit_lorentzian_pair: curve is identically zero");

  // Parameter layout per peak: [center offset / s, log(hwhm / h0), amplitude]; last: baseline.
  std::vector<double> c0(k_peaks), s(k_peaks), h0(k_peaks);
  Eigen::VectorXd p(n_par);
  for (int k = 0; k < k_peaks; ++k) {
    c0[k] = seeds[k].center;
    s[k] = seeds[k].fwhm > 0 ? seeds[k].fwhm : (curve.omega.back() - curve.omega.front()) / 10.0;
    h0[k] = 0.5 * s[k];
    p(3 * k) = 0;
    p(3 * k + 1) = 0;
    p(3 * k + 2) = std::max(seeds[k].height - initial.baseline, 0.0) / scale;
    if (p(3 * k + 2) <= 0) p(3 * k + 2) = 1.0;
  }
  p(n_par - 1) = initial.baseline / scale;

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = curve.values[static_cast<std::size_t>(i)] / scale;

  auto residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
    r.resize(n);
    if (J) J->resize(n, n_par);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double xi = curve.omega[static_cast<std::size_t>(i)];
      double f = q(n_par - 1);
      if (J) (*J)(i, n_par - 1) = 1.0;
      for (int k = 0; k < k_peaks; ++k) {
        const double c = c0[k] + s[k] * q(3 * k);
        const double h = h0[k] * std::exp(q(3 * k + 1));
        const double a = q(3 * k + 2);
        const double u = (xi - c) / h;
        const double den = 1.0 + u * u;
        const double lor = 1.0 / den;
        f += a * lor;
        if (J) {
          const double dl_du = -2.0 * u * lor * lor;
          (*J)(i, 3 * k) = a * dl_du * (-s[k] / h);
          (*J)(i, 3 * k + 1) = a * dl_du * (-u);
          (*J)(i, 3 * k + 2) = lor;
        }
      }
      r(i) = f - y(i);
    }
  };

  auto make_report = [&](const Eigen::VectorXd& q, double cost, const Eigen::MatrixXd* cov, int iters) {
    PeakReport rep;
    rep.baseline = q(n_par - 1) * scale;
    rep.fit_residual = std::sqrt(2.0 * cost / static_cast<double>(n));
    rep.iterations = iters;
    for (int k = 0; k < k_peaks; ++k) {
      Peak pk;
      pk.center = c0[k] + s[k] * q(3 * k);
      pk.fwhm = 2.0 * h0[k] * std::exp(q(3 * k + 1));
      pk.height = q(3 * k + 2) * scale;
      if (cov) pk.center_error = s[k] * std::sqrt(std::max((*cov)(3 * k, 3 * k), 0.0));
      rep.peaks.push_back(pk);
    }
    rep.finalize();
    return rep;
  };

  Eigen::VectorXd r, r_try;
  Eigen::MatrixXd J;
  residuals(p, r, &J);
  double cost = 0.5 * r.squaredNorm();
  double mu = 1e-3;
  bool converged = false;
  int it = 0;
  for (; it < opts.max_iterations && !converged; ++it) {
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    bool accepted = false;
    for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
      Eigen::MatrixXd A = JtJ;
      for (int j = 0; j < n_par; ++j) A(j, j) += mu * std::max(JtJ(j, j), 1e-300);
      const Eigen::VectorXd step = A.ldlt().solve(-g);
      if (!step.allFinite()) {
        mu *= 10;
        continue;
      }
      const Eigen::VectorXd trial = p + step;
      residuals(trial, r_try, nullptr);
      const double trial_cost = 0.5 * r_try.squaredNorm();
      if (trial_cost <= cost) {
        const double decrease = cost - trial_cost;
        p = trial;
        accepted = true;
        mu = std::max(mu / 3.0, 1e-15);
        if (step.norm() < opts.step_tolerance || decrease <= opts.cost_tolerance * std::max(cost, 1e-300))
          converged = true;
        cost = trial_cost;
        residuals(p, r, &J);
      } else {
        mu *= 4;
        if (step.norm() < opts.step_tolerance) {
          converged = true;  // no further progress possible at this resolution
          break;
        }
      }
    }
    if (!accepted && !converged) break;
  }

  if (!converged) {
    throw FitError("fit_lorentzian_pair: no convergence after " + std::to_string(it) + " iterations",
                   make_report(p, cost, nullptr, it));
  }

  const double dof = std::max<double>(1.0, static_cast<double>(n - n_par));
  const double sigma2 = 2.0 * cost / dof;
  const Eigen::MatrixXd JtJ = J.transpose() * J;
  Eigen::MatrixXd cov = JtJ.completeOrthogonalDecomposition().pseudoInverse() * sigma2;
  return make_report(p, cost, &cov, it);
}

struct ShiftSummary {
  std::vector<double> center_deltas;  // test - reference, positive = rightward
  std::optional<double> splitting_delta;
};

/// Per-peak centre deltas with peaks matched by nearest centre.
inline ShiftSummary compare_reports(const PeakReport& test, const PeakReport& reference) {
  if (test.peaks.size() != reference.peaks.size())
    throw ComparisonError("compare_reports: peak counts differ (" + std::to_string(test.peaks.size()) + " vs " +
                          std::to_string(reference.peaks.size()) + ")");
  ShiftSummary out;
  std::vector<bool> used(reference.peaks.size(), false);
  for (const auto& pk : test.peaks) {
    std::size_t best = reference.peaks.size();
    for (std::size_t j = 0; j < reference.peaks.size(); ++j) {
      if (used[j]) continue;
      if (best == reference.peaks.size() ||
          std::abs(reference.peaks[j].center - pk.center) < std::abs(reference.peaks[best].center - pk.center))
        best = j;
    }
    used[best] = true;
    out.center_deltas.push_back(pk.center - reference.peaks[best].center);
  }
  if (test.splitting && reference.splitting) out.splitting_delta = *test.splitting - *reference.splitting;
  return out;
}

}  // namespace cqed::peaks
