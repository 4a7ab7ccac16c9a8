#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "cqed/analytic.hpp"

using namespace cqed;
using namespace cqed::analytic;

namespace {

DampingParams default_damping() { return {0.6, 0.36, 1e4, 0, false}; }

DerivedCouplings strong() { return make_couplings_from_stark(6000, 6000, 1000, 500, 10); }
DerivedCouplings weak() { return make_couplings_from_stark(6000, 6000, 1000, 500, 0.2); }

double argmax(const SpectrumCurve& c, double lo, double hi) {
  double best = -1, at = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.omega[i] >= lo && c.omega[i] <= hi && c.values[i] > best) best = c.values[i], at = c.omega[i];
  return at;
}

// Independent route to (Delta, theta): Delta e^{i theta/2} is the principal
// square root of (radicand + rho^2) + i rho (gc - gd).
std::complex<double> complex_root(double rho, double lambda, const DampingParams& dp) {
  const double gs = dp.gamma_c + dp.gamma_d;
  const double base = 4 * lambda * lambda + dp.gamma_c * dp.gamma_d - gs * gs / 4 + rho * rho;
  return std::sqrt(std::complex<double>(base, rho * (dp.gamma_c - dp.gamma_d)));
}

}  // namespace

TEST(BareSpectrum, WidthFromQualityFactor) {
  const auto g = uniform_grid(5990, 6010, 2001);
  const auto c = bare_spectrum(g, 6000, 1e4);
  EXPECT_EQ(argmax(c, 5990, 6010), 6000.0);
  EXPECT_DOUBLE_EQ(c.max_value(), 1.0);
  const std::vector<double> pts{6000 - 0.3, 6000, 6000 + 0.3};
  const auto at = bare_spectrum(pts, 6000, 1e4, Normalization::Raw);
  EXPECT_NEAR(at.values[0] / at.values[1], 0.5, 1e-12);
  EXPECT_NEAR(at.values[2] / at.values[1], 0.5, 1e-12);
}

TEST(BareSpectrum, Rejects) {
  EXPECT_THROW(bare_spectrum(std::vector<double>{}, 6000, 1e4), std::invalid_argument);
  EXPECT_THROW(bare_spectrum(std::vector<double>{1.0}, 6000, 0), std::invalid_argument);
}

TEST(SplittingParams, LosslessLimitIsTwiceLambda) {
  const auto sp = splitting_params(NoMotion{}, make_couplings(6000, 6000, 1000, 500, 0), DampingParams{});
  EXPECT_DOUBLE_EQ(sp.Delta, 1000.0);
  EXPECT_EQ(sp.theta, 0.0);
  EXPECT_EQ(sp.rho, 0.0);
}

TEST(SplittingParams, StarkScalesPerCase) {
  const auto dc = strong();
  const auto dp = default_damping();
  EXPECT_NEAR(splitting_params(Classical{1000}, dc, dp).rho, 20.0, 1e-12);
  const auto q = splitting_params(Quantum{1000, 1}, dc, dp);
  EXPECT_NEAR(q.rho, 30.0, 1e-12);
  EXPECT_NEAR(q.delta_omega, 5.0, 1e-12);
  EXPECT_EQ(splitting_params(Classical{1000}, dc, dp).delta_omega, 0.0);
}

TEST(SplittingParams, MatchesComplexSquareRoot) {
  const auto dc = strong();
  const auto dp = default_damping();
  for (const MotionCase& mc : {MotionCase{Classical{1000}}, MotionCase{Quantum{1000, 1}}, MotionCase{Quantum{1000, 4}}}) {
    const auto sp = splitting_params(mc, dc, dp);
    const auto root = complex_root(sp.rho, dc.lambda, dp);
    EXPECT_NEAR(sp.chi, root.real(), 1e-9);
    EXPECT_NEAR(sp.xi, root.imag(), 1e-12);
    EXPECT_NEAR(sp.Delta, std::abs(root), 1e-9);
    EXPECT_NEAR(sp.xi, sp.Delta * std::sin(sp.theta / 2), 1e-15);
    EXPECT_NEAR(sp.chi, sp.Delta * std::cos(sp.theta / 2), 1e-12);
  }
}

// Frozen from an independent evaluation at the fig3 preset point.
TEST(SplittingParams, FrozenFigureThreeValues) {
  const auto dc = strong();
  const auto dp = default_damping();
  EXPECT_NEAR(splitting_params(NoMotion{}, dc, dp).Delta, 999.9999928, 1e-9);
  const auto c = splitting_params(Classical{1000}, dc, dp);
  EXPECT_NEAR(c.Delta, 1000.199972811195, 1e-9);
  EXPECT_NEAR(c.theta, 4.798080836720841e-06, 1e-18);
  const auto q = splitting_params(Quantum{1000, 1}, dc, dp);
  EXPECT_NEAR(q.Delta, 1000.4498916117172, 1e-9);
  EXPECT_NEAR(q.xi, 0.0035983811185422918, 1e-15);
}

TEST(SplittingParams, EqualRatesGiveZeroPhase) {
  const DampingParams dp{0.5, 0.5, 1e4, 0, false};
  for (const MotionCase& mc : {MotionCase{NoMotion{}}, MotionCase{Classical{1000}}, MotionCase{Quantum{1000, 2}}})
    EXPECT_EQ(splitting_params(mc, strong(), dp).theta, 0.0);
}

TEST(SplittingParams, OverdampedIsRegimeError) {
  const auto dc = make_couplings(6000, 6000, 1000, 0.1, 0);
  EXPECT_THROW(splitting_params(NoMotion{}, dc, DampingParams{5, 0.1, 0, 0, false}), RegimeError);
  EXPECT_THROW(spectrum_N(uniform_grid(2990, 3010, 11), dc, DampingParams{5, 0.1, 0, 0, false}), RegimeError);
}

TEST(SpectrumN, PeaksAtHalfNuMinusLambda) {
  const auto dc = strong();
  const auto dp = default_damping();
  const auto sp = splitting_params(NoMotion{}, dc, dp);
  const auto g = uniform_grid(2490, 2510, 20001);
  const auto c = spectrum_N(g, dc, dp);
  EXPECT_NEAR(argmax(c, 2490, 2510), 2500.0, 2e-3);
  EXPECT_NEAR(argmax(c, 2490, 2510), (6000 - sp.Delta) / 2, 2e-3);
}

TEST(SpectrumN, HalfHeightWidth) {
  // The left peak is a Lorentzian of HWHM (gc+gd)/4 up to the tail of its partner.
  const auto dc = strong();
  const auto dp = default_damping();
  const double centre = (6000 - splitting_params(NoMotion{}, dc, dp).Delta) / 2;
  const std::vector<double> pts{centre - 0.24, centre, centre + 0.24};
  const auto c = spectrum_N(pts, dc, dp, Normalization::Raw);
  EXPECT_NEAR(c.values[0] / c.values[1], 0.5, 1e-3);
  EXPECT_NEAR(c.values[2] / c.values[1], 0.5, 1e-3);
}

TEST(SpectrumN, VanishesWithLambda) {
  // equal rates keep the radicand at 4 lambda^2, so small lambda stays in regime
  const DampingParams dp{0.48, 0.48, 1e4, 0, false};
  const std::vector<double> pts{2999.0, 3000.0, 3001.0};
  double last = 1e300, first = 0;
  for (double lam : {1.0, 1e-2, 1e-4}) {
    const auto c = spectrum_N(pts, make_couplings(6000, 6000, 1000, lam, 0), dp, Normalization::Raw);
    EXPECT_LT(c.max_value(), last);
    last = c.max_value();
    if (first == 0) first = last;
  }
  EXPECT_LT(last / first, 1e-6);
}

TEST(SpectrumC, LeftPeakMovesLeftAtStrongCoupling) {
  const auto dp = default_damping();
  const auto g = uniform_grid(2499, 2501, 200001);
  const double n = argmax(spectrum_N(g, strong(), dp), 2499, 2501);
  const double c = argmax(spectrum_C(g, strong(), dp), 2499, 2501);
  EXPECT_NEAR(c - n, -0.1, 0.01);
}

TEST(SpectrumQ, LeftPeakNear2504p8) {
  const auto dp = default_damping();
  const auto g = uniform_grid(2500, 2510, 100001);
  EXPECT_NEAR(argmax(spectrum_Q(g, strong(), dp, 1), 2500, 2510), 2504.8, 0.1);
}

TEST(SpectrumQ, WeakCouplingShiftsRightByTenthMHz) {
  const auto dp = default_damping();
  const auto g = uniform_grid(2499.5, 2500.5, 100001);
  const double n = argmax(spectrum_N(g, weak(), dp), 2499.5, 2500.5);
  const double q = argmax(spectrum_Q(g, weak(), dp, 1), 2499.5, 2500.5);
  EXPECT_NEAR(q - n, 0.1, 0.01);
}

TEST(SpectrumQ, SplittingGrowsWithOccupation) {
  const auto dp = default_damping();
  double last = 0;
  for (unsigned n = 0; n < 8; ++n) {
    const double d = splitting_params(Quantum{1000, n}, strong(), dp).Delta;
    EXPECT_GT(d, last);
    last = d;
  }
}

TEST(Identities, ZeroZetaCollapse) {
  const auto dc = make_couplings(6000, 6000, 1000, 500, 0);
  const auto dp = default_damping();
  const auto g = window_grid(std::vector<double>{2500, 3500}, 38.4, 4001);
  const auto n = spectrum_N(g, dc, dp, Normalization::Raw);
  const auto c = spectrum_C(g, dc, dp, Normalization::Raw);
  const auto q = spectrum_Q(g, dc, dp, 3, Normalization::Raw);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(c.values[i], n.values[i]);
    EXPECT_EQ(q.values[i], n.values[i]);
  }
}

TEST(Identities, HalfOccupationIsTranslatedClassical) {
  const auto dp = default_damping();
  for (double stark : {0.2, 10.0}) {
    const auto dc = make_couplings_from_stark(6000, 6000, 1000, 500, stark);
    const double shift = stark / 2;
    const auto g = window_grid(std::vector<double>{2500, 3500}, 38.4, 4001);
    std::vector<double> moved(g);
    for (double& w : moved) w -= shift;
    const auto q = detail::spectrum_Q_formal(g, dc, dp, 0.5, Normalization::Raw);
    const auto c = spectrum_C(moved, dc, dp, Normalization::Raw);
    for (std::size_t i = 0; i < g.size(); ++i)
      EXPECT_LT(std::abs(q.values[i] - c.values[i]), 1e-10 * c.values[i]) << g[i];
  }
}

TEST(Identities, MirrorSymmetryForEqualRates) {
  const DampingParams dp{0.48, 0.48, 1e4, 0, false};
  const auto dc = strong();
  const std::vector<double> offsets{0.0, 0.1, 1.0, 250.0, 499.9, 500.0, 500.2, 503.0};
  auto check = [&](auto&& eval, double axis) {
    std::vector<double> left, right;
    for (double x : offsets) left.push_back(axis - x);
    std::sort(left.begin(), left.end());
    for (double x : left) right.push_back(2 * axis - x);
    std::reverse(right.begin(), right.end());
    const auto a = eval(left), b = eval(right);
    for (std::size_t i = 0; i < left.size(); ++i)
      EXPECT_NEAR(a.values[i], b.values[left.size() - 1 - i], 1e-12 * a.values[i]);
  };
  check([&](const std::vector<double>& g) { return spectrum_N(g, dc, dp, Normalization::Raw); }, 3000);
  check([&](const std::vector<double>& g) { return spectrum_C(g, dc, dp, Normalization::Raw); }, 3000);
  check([&](const std::vector<double>& g) { return spectrum_Q(g, dc, dp, 1, Normalization::Raw); }, 3005);
}

TEST(PredictedPeaks, ClassicalStrong) {
  const auto p = predicted_peaks(Classical{1000}, strong(), default_damping());
  EXPECT_NEAR(p.splitting_increment, 0.2, 1e-12);
  EXPECT_NEAR(p.left_shift, -0.1, 1e-12);
  EXPECT_NEAR(p.increment_as_written, p.splitting_increment, 1e-12);
}

TEST(PredictedPeaks, QuantumStrong) {
  const auto p = predicted_peaks(Quantum{1000, 1}, strong(), default_damping());
  EXPECT_NEAR(p.left_shift, 4.8, 0.05);
  EXPECT_NEAR(p.left, 2504.8, 0.05);
  EXPECT_NEAR(p.increment_as_written, 0.45, 1e-12);
  EXPECT_NEAR(p.splitting_increment, p.increment_as_written, 1e-12);
}

TEST(PredictedPeaks, ClassicalWeakEightyHertz) {
  const auto p = predicted_peaks(Classical{1000}, weak(), default_damping());
  EXPECT_NEAR(p.splitting_increment * 1e6, 80.0, 1e-6);  // Hz
}

TEST(PredictedPeaks, ZeroZetaHasNoShift) {
  const auto dc = make_couplings(6000, 6000, 1000, 500, 0);
  for (const MotionCase& mc : {MotionCase{Classical{1000}}, MotionCase{Quantum{1000, 2}}}) {
    const auto p = predicted_peaks(mc, dc, default_damping());
    EXPECT_EQ(p.splitting_increment, 0.0);
    EXPECT_EQ(p.left_shift, 0.0);
    EXPECT_EQ(p.right_shift, 0.0);
    EXPECT_EQ(p.delta_omega, 0.0);
  }
}

TEST(PredictedPeaks, AgreeWithArgmaxWithinLinewidth) {
  const auto dp = default_damping();
  for (const auto& dc : {weak(), strong()}) {
    for (const MotionCase& mc : {MotionCase{NoMotion{}}, MotionCase{Classical{1000}}, MotionCase{Quantum{1000, 1}}}) {
      const auto p = predicted_peaks(mc, dc, dp);
      const auto g = window_grid(std::vector<double>{p.left, p.right}, 38.4, 10000);
      const auto c = spectrum(mc, g, dc, dp);
      EXPECT_NEAR(argmax(c, p.left - 19, p.left + 19), p.left, 0.96);
      EXPECT_NEAR(argmax(c, p.right - 19, p.right + 19), p.right, 0.96);
    }
  }
}

TEST(Spectrum, RejectsInconsistentMotion) {
  EXPECT_THROW(spectrum(Classical{900}, std::vector<double>{2500.0}, strong(), default_damping()),
               std::invalid_argument);
}
