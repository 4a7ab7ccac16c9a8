#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cqed/analytic.hpp"
#include "cqed/dispersive.hpp"

using namespace cqed;
using namespace cqed::dispersive;

namespace {

DerivedCouplings strong() { return make_couplings_from_stark(6000, 6000, 1000, 500, 10); }
DerivedCouplings weak_point() { return make_couplings(6000, 6000, 1000, 500, 30); }

}  // namespace

TEST(EffectiveShifts, ClassicalIsSymmetric) {
  const auto s = effective_shifts(Classical{1000}, strong());
  EXPECT_NEAR(s.transition_shift, 20.0, 1e-12);
  EXPECT_EQ(s.asymmetry, 0.0);
}

TEST(EffectiveShifts, QuantumGroundOccupation) {
  const auto s = effective_shifts(Quantum{1000, 0}, strong());
  EXPECT_EQ(s.shift_g, 0.0);
  EXPECT_NEAR(s.shift_e, 10.0, 1e-12);
  EXPECT_NEAR(s.asymmetry, 10.0, 1e-12);
}

TEST(EffectiveShifts, NoMotionIsZero) {
  const auto s = effective_shifts(NoMotion{}, strong());
  EXPECT_EQ(s.shift_e, 0.0);
  EXPECT_EQ(s.shift_g, 0.0);
}

TEST(EffectiveShifts, TransitionShiftIsStarkScaleRho) {
  const DampingParams dp{0.6, 0.36, 1e4, 0, false};
  for (double stark : {0.2, 1.0, 10.0}) {
    const auto dc = make_couplings_from_stark(6000, 6000, 1000, 500, stark);
    EXPECT_EQ(effective_shifts(Classical{1000}, dc).transition_shift,
              analytic::splitting_params(Classical{1000}, dc, dp).rho);
    for (unsigned n : {0u, 1u, 2u, 7u}) {
      const auto s = effective_shifts(Quantum{1000, n}, dc);
      EXPECT_DOUBLE_EQ(s.transition_shift, analytic::splitting_params(Quantum{1000, n}, dc, dp).rho);
      EXPECT_DOUBLE_EQ(s.asymmetry, dc.stark());
    }
  }
}

TEST(EffectiveShifts, ClassicalAsymmetryVanishesAcrossRegime) {
  for (double z : {1.0, 10.0, 100.0, 290.0})
    for (double wR : {100.0, 1000.0, 3000.0})
      EXPECT_EQ(effective_shifts(Classical{wR}, make_couplings(6000, 6000, wR, 500, z)).asymmetry, 0.0);
}

TEST(EffectiveShifts, RegimeGuard) {
  EXPECT_THROW(effective_shifts(Quantum{1000, 1}, make_couplings(6000, 6000, 1000, 500, 800)), RegimeError);
  EXPECT_THROW(effective_shifts(Classical{7000}, make_couplings(6000, 6000, 7000, 500, 30)), RegimeError);
}

TEST(ExactLevels, UncoupledLadderIsBare) {
  const auto dc = make_couplings(6000, 6000, 1000, 500, 0);
  for (const auto& l : exact_jc_levels(dc, 6)) {
    EXPECT_EQ(l.energy, l.bare_energy);
    EXPECT_DOUBLE_EQ(l.bare_energy, (l.qubit_excited ? 3000.0 : -3000.0) + 1000.0 * l.phonons);
    EXPECT_EQ(l.excitations, l.phonons + (l.qubit_excited ? 1u : 0u));
  }
}

TEST(ExactLevels, ResonantBlocksSplitByRootN) {
  auto dc = make_couplings(6000, 6000, 1000, 500, 30);
  dc.delta = 0;  // forced resonance: omega_R = omega0
  const auto levels = exact_jc_levels(dc, 4);
  ASSERT_EQ(levels.size(), 9u);
  for (unsigned N = 1; N <= 4; ++N) {
    const double split = levels[2 * N].energy - levels[2 * N - 1].energy;
    EXPECT_NEAR(split, 2 * 30 * std::sqrt(double(N)), 1e-10);
  }
}

// Frozen from the closed-form 2x2 roots at zeta = 30 MHz, delta = 5000 MHz.
TEST(ExactShifts, WeakPointWithinOneKilohertz) {
  const auto dc = weak_point();
  const auto ex = exact_shifts(Quantum{1000, 1}, dc);
  EXPECT_NEAR(ex.shift_e, 0.3599740837316858, 1e-12);
  EXPECT_NEAR(ex.shift_g, -0.17999352046672357, 1e-12);
  const double err = std::abs(ex.transition_shift - effective_shifts(Quantum{1000, 1}, dc).transition_shift);
  EXPECT_NEAR(err, 3.239580159064559e-05, 1e-12);
  EXPECT_LT(err, 1e-3);
  EXPECT_LT(err / 0.54, 10 * dc.eta * dc.eta);
}

TEST(ExactShifts, ClassicalDriveFrame) {
  const auto dc = strong();
  const auto ex = exact_shifts(Classical{1000}, dc);
  EXPECT_NEAR(ex.shift_e, std::sqrt(2500.0 * 2500.0 + dc.zeta * dc.zeta) - 2500.0, 1e-9);
  EXPECT_EQ(ex.asymmetry, 0.0);
}

TEST(ErrorScaling, FourthOrderInZeta) {
  const std::vector<double> ladder{40, 80, 160, 320};
  for (const MotionCase& mc : {MotionCase{Quantum{1000, 1}}, MotionCase{Classical{1000}}}) {
    const auto s = dispersive_error_scaling(mc, weak_point(), ladder);
    ASSERT_EQ(s.rows.size(), 4u);
    EXPECT_GE(s.exponent, 3.5);
    EXPECT_LE(s.exponent, 4.5);
    EXPECT_NEAR(s.rows[2].error_max / s.rows[1].error_max, 16.0, 1.0);
  }
}

TEST(ErrorScaling, ZeroZetaHasZeroError) {
  const std::vector<double> ladder{0.0};
  const auto s = dispersive_error_scaling(Quantum{1000, 2}, weak_point(), ladder);
  EXPECT_EQ(s.rows[0].error_max, 0.0);
}

TEST(ErrorScaling, GuardAppliesToEveryRung) {
  const std::vector<double> ladder{30, 600};
  EXPECT_THROW(dispersive_error_scaling(Quantum{1000, 1}, weak_point(), ladder), RegimeError);
}

TEST(ErrorScaling, CsvRows) {
  const std::vector<double> ladder{10, 20};
  std::ostringstream os;
  write_error_csv(dispersive_error_scaling(Quantum{1000, 1}, weak_point(), ladder), os);
  const auto text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_EQ(text.rfind("zeta_MHz,eta,", 0), 0u);
}
