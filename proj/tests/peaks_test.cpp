#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "cqed/analytic.hpp"
#include "cqed/peaks.hpp"

using namespace cqed;
using namespace cqed::peaks;

namespace {

const DampingParams rates{0.6, 0.36, 1e4, 0, false};

SpectrumCurve lorentzians(const std::vector<double>& grid, const std::vector<std::array<double, 3>>& lines,
                          double baseline = 0) {
  SpectrumCurve c;
  c.omega = grid;
  for (double x : grid) {
    double v = baseline;
    for (const auto& [centre, fwhm, amp] : lines) {
      const double u = (x - centre) / (fwhm / 2);
      v += amp / (1 + u * u);
    }
    c.values.push_back(v);
  }
  return c;
}

PeakReport fit(const SpectrumCurve& c) { return fit_lorentzian_pair(c, find_peaks(c)); }

// Left-peak centre of a spectrum by a single-line fit on +/-0.05 MHz, 1e5 points.
double fitted_left(const MotionCase& mc, const DerivedCouplings& dc) {
  const double guess = analytic::predicted_peaks(mc, dc, rates).left;
  const auto coarse = analytic::spectrum(mc, uniform_grid(guess - 1, guess + 1, 20001), dc, rates);
  const auto seed = find_peaks(coarse);
  const double top = seed.peaks.front().center;
  // the window sits inside the half-height points, so seed from the coarse pass
  const auto fine = analytic::spectrum(mc, uniform_grid(top - 0.05, top + 0.05, 100000), dc, rates);
  return fit_lorentzian_pair(fine, seed).peaks.front().center;
}

}  // namespace

TEST(FindPeaks, SyntheticLorentzian) {
  const auto grid = uniform_grid(2490, 2510, 10000);
  const double step = grid[1] - grid[0];
  const auto r = find_peaks(lorentzians(grid, {{2500, 0.48, 1}}));
  ASSERT_EQ(r.peaks.size(), 1u);
  EXPECT_NEAR(r.peaks[0].center, 2500, step);
  EXPECT_NEAR(r.peaks[0].fwhm, 0.48, 0.02 * 0.48);
  EXPECT_FALSE(r.splitting.has_value());
}

TEST(FindPeaks, VacuumRabiDoublet) {
  const auto dc = make_couplings(6000, 6000, 1000, 500, 0);
  const auto grid = window_grid(std::vector<double>{2500, 3500}, 38.4, 10000);
  const auto r = find_peaks(analytic::spectrum_N(grid, dc, rates));
  ASSERT_EQ(r.peaks.size(), 2u);
  EXPECT_NEAR(*r.splitting, 1000, 0.01);
}

TEST(FindPeaks, FlatCurveIsEmpty) {
  SpectrumCurve c;
  c.omega = uniform_grid(0, 1, 100);
  c.values.assign(100, 1.0);
  EXPECT_THROW(find_peaks(c), EmptySpectrum);
  c.values.assign(100, 0.0);
  EXPECT_THROW(find_peaks(c), EmptySpectrum);
}

TEST(FindPeaks, KeepsTwoTallest) {
  const auto grid = uniform_grid(0, 30, 30001);
  const auto r = find_peaks(lorentzians(grid, {{5, 0.5, 0.4}, {15, 0.5, 1}, {25, 0.5, 0.7}}));
  ASSERT_EQ(r.peaks.size(), 2u);
  EXPECT_NEAR(r.peaks[0].center, 15, 1e-3);
  EXPECT_NEAR(r.peaks[1].center, 25, 1e-3);
}

TEST(FindPeaks, ProminenceRejectsShoulders) {
  const auto grid = uniform_grid(0, 30, 30001);
  const auto r = find_peaks(lorentzians(grid, {{10, 0.5, 1}, {20, 0.5, 0.02}}));
  EXPECT_EQ(r.peaks.size(), 1u);
}

TEST(FitPair, RecoversSyntheticCentres) {
  const auto grid = uniform_grid(2490, 2520, 6001);
  const auto c = lorentzians(grid, {{2500.0123, 0.48, 1}, {2507.7777, 0.6, 0.55}}, 0.01);
  const auto r = fit(c);
  ASSERT_EQ(r.peaks.size(), 2u);
  EXPECT_NEAR(r.peaks[0].center, 2500.0123, 1e-3 * 0.48);
  EXPECT_NEAR(r.peaks[1].center, 2507.7777, 1e-3 * 0.6);
  EXPECT_NEAR(r.peaks[0].fwhm, 0.48, 1e-6);
  EXPECT_NEAR(r.baseline, 0.01, 1e-8);
  EXPECT_LT(r.fit_residual, 1e-8);
}

TEST(FitPair, Idempotent) {
  const auto dc = make_couplings_from_stark(6000, 6000, 1000, 500, 10);
  const auto c = analytic::spectrum_Q(uniform_grid(2500, 2510, 4001), dc, rates, 1);
  const auto once = fit(c);
  const auto twice = fit_lorentzian_pair(c, once);
  EXPECT_NEAR(twice.peaks[0].center, once.peaks[0].center, 1e-6 * once.peaks[0].fwhm);
}

TEST(FitPair, FittingBeatsGridding) {
  for (double offset : {0.013, 0.029, 0.041}) {
    const double fwhm = 0.48, spacing = fwhm / 5;
    std::vector<double> grid;
    for (int k = -50; k <= 50; ++k) grid.push_back(2500 + k * spacing);
    const double truth = 2500 + offset;
    const auto c = lorentzians(grid, {{truth, fwhm, 1}});
    const auto r = fit(c);
    EXPECT_LT(std::abs(r.peaks[0].center - truth), spacing / 10);
  }
}

TEST(FitPair, ShiftEquivariant) {
  const auto grid = uniform_grid(2490, 2520, 3001);
  const auto c = lorentzians(grid, {{2500.2, 0.48, 1}, {2510.1, 0.48, 0.8}});
  const auto a = fit(c);
  const auto b = fit(c.translated(3.75));
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(b.peaks[k].center - a.peaks[k].center, 3.75, 1e-6 * 0.48);
}

TEST(FitPair, ScaleInvariant) {
  const auto grid = uniform_grid(2490, 2520, 3001);
  auto c = lorentzians(grid, {{2500.2, 0.48, 1}, {2510.1, 0.48, 0.8}});
  const auto a = fit(c);
  for (double& v : c.values) v *= 1234.5;
  const auto b = fit(c);
  for (int k = 0; k < 2; ++k) {
    EXPECT_NEAR(b.peaks[k].center, a.peaks[k].center, 1e-9);
    EXPECT_NEAR(b.peaks[k].fwhm, a.peaks[k].fwhm, 1e-9);
  }
  EXPECT_NEAR(*b.splitting, *a.splitting, 1e-9);
}

TEST(FitPair, NeedsSeed) {
  const auto c = lorentzians(uniform_grid(0, 1, 100), {{0.5, 0.1, 1}});
  EXPECT_THROW(fit_lorentzian_pair(c, PeakReport{}), std::invalid_argument);
}

TEST(FitPair, BoundedIterationsReportLastIterate) {
  const auto c = lorentzians(uniform_grid(2490, 2510, 2001), {{2500.3, 0.48, 1}});
  FitOptions opts;
  opts.max_iterations = 1;
  opts.step_tolerance = 0;
  opts.cost_tolerance = 0;
  PeakReport seed;
  seed.peaks.push_back({2501.0, 1.0, 0.5, 0});
  try {
    fit_lorentzian_pair(c, seed, opts);
    FAIL() << "expected FitError";
  } catch (const FitError& e) {
    EXPECT_EQ(e.last_iterate.peaks.size(), 1u);
  }
}

TEST(FitPair, ClassicalWeakCouplingEightyHertz) {
  const auto dc = make_couplings_from_stark(6000, 6000, 1000, 500, 0.2);
  const double left_n = fitted_left(NoMotion{}, dc);
  const double left_c = fitted_left(Classical{1000}, dc);
  // mirror peak moves symmetrically, so the splitting grows by twice the left shift
  EXPECT_NEAR(-2 * (left_c - left_n) * 1e6, 80.0, 40.0);
}

TEST(CompareReports, StrongCouplingShifts) {
  const auto dc = make_couplings_from_stark(6000, 6000, 1000, 500, 10);
  const auto grid = uniform_grid(2494, 2512, 18001);
  const auto n = fit(analytic::spectrum_N(grid, dc, rates));
  const auto c = fit(analytic::spectrum_C(grid, dc, rates));
  const auto q = fit(analytic::spectrum_Q(grid, dc, rates, 1));
  EXPECT_NEAR(compare_reports(q, n).center_deltas[0], 4.8, 0.1);
  EXPECT_NEAR(compare_reports(c, n).center_deltas[0], -0.1, 0.01);
}

TEST(CompareReports, SelfIsZero) {
  const auto r = fit(lorentzians(uniform_grid(0, 20, 2001), {{5, 0.5, 1}, {15, 0.5, 1}}));
  const auto s = compare_reports(r, r);
  for (double d : s.center_deltas) EXPECT_EQ(d, 0.0);
  EXPECT_EQ(*s.splitting_delta, 0.0);
}

TEST(CompareReports, CountMismatch) {
  const auto one = find_peaks(lorentzians(uniform_grid(0, 20, 2001), {{5, 0.5, 1}}));
  const auto two = find_peaks(lorentzians(uniform_grid(0, 20, 2001), {{5, 0.5, 1}, {15, 0.5, 1}}));
  EXPECT_THROW(compare_reports(one, two), ComparisonError);
}

TEST(CompareReports, MatchesByNearestCentre) {
  PeakReport a, b;
  a.peaks = {{10.0, 1, 1, 0}, {20.0, 1, 1, 0}};
  b.peaks = {{10.5, 1, 1, 0}, {19.0, 1, 1, 0}};
  a.finalize();
  b.finalize();
  const auto s = compare_reports(b, a);
  EXPECT_DOUBLE_EQ(s.center_deltas[0], 0.5);
  EXPECT_DOUBLE_EQ(s.center_deltas[1], -1.0);
  EXPECT_DOUBLE_EQ(*s.splitting_delta, -1.5);
}
