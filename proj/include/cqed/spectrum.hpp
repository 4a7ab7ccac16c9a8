#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace cqed {

enum class Normalization { Raw, UnitPeak };

/// Spectral density samples on a strictly increasing frequency grid (MHz).
struct SpectrumCurve {
  std::vector<double> omega;
  std::vector<double> values;
  Normalization normalization = Normalization::Raw;

  std::size_t size() const { return omega.size(); }
  bool empty() const { return omega.empty(); }

  double max_value() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }

  void validate() const {
    if (omega.size() != values.size()) throw std::invalid_argument("SpectrumCurve: grid/value length mismatch");
    for (std::size_t i = 1; i < omega.size(); ++i)
      if (!(omega[i] > omega[i - 1])) throw std::invalid_argument("SpectrumCurve: grid not strictly increasing");
    for (double v : values)
      if (!(v >= 0)) throw std::invalid_argument("SpectrumCurve: negative or NaN spectral density");
  }

  SpectrumCurve unit_peak() const {
    SpectrumCurve out = *this;
    const double m = max_value();
    if (m > 0)
      for (double& v : out.values) v /= m;
    out.normalization = Normalization::UnitPeak;
    return out;
  }

  /// Same samples with the grid translated by `shift` MHz.
  SpectrumCurve translated(double shift) const {
    SpectrumCurve out = *this;
    for (double& w : out.omega) w += shift;
    return out;
  }
};

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw std::invalid_argument("uniform_grid: need n >= 2 and hi > lo");
  std::vector<double> g(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

/// Union of uniform windows of the given width centred on each entry of
/// `centers`. Overlapping windows are merged into one increasing grid.
inline std::vector<double> window_grid(std::span<const double> centers, double width, std::size_t points_each) {
  if (centers.empty()) throw std::invalid_argument("window_grid: no centers");
  std::vector<double> g;
  g.reserve(centers.size() * points_each);
  for (double c : centers) {
    auto w = uniform_grid(c - 0.5 * width, c + 0.5 * width, points_each);
    g.insert(g.end(), w.begin(), w.end());
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end(), [](double a, double b) { return !(b > a); }), g.end());
  return g;
}

/// Max pointwise distance between two curves sampled on the same grid, after
/// scaling each to unit peak.
inline double linf_unit_peak(const SpectrumCurve& a, const SpectrumCurve& b) {
  if (a.size() != b.size()) throw std::invalid_argument("linf_unit_peak: grid size mismatch");
  const double ma = a.max_value(), mb = b.max_value();
  double err = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.omega[i] - b.omega[i]) > 1e-9 * std::max(1.0, std::abs(a.omega[i])))
      throw std::invalid_argument("linf_unit_peak: grids differ");
    err = std::max(err, std::abs(a.values[i] / ma - b.values[i] / mb));
  }
  return err;
}

}  // namespace cqed
