#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace rwtest;

TEST(BoundaryCurve, OuterCurvesAreStraightLines) {
  LagrangianSolution s(model_bi(1.0), two_ramp_profile());
  const auto& sys = s.system();
  const double lam_left = sys.speed(0, s.left_state());
  const double lam_right = sys.speed(1, s.right_state());
  for (double t : {0.5, 3.0, 10.0}) {
    EXPECT_NEAR(boundary_curve(s, 0, Side::minus, t), lam_left * t - 1.0, 1e-12);
    EXPECT_NEAR(boundary_curve(s, 1, Side::plus, t), lam_right * t + 1.0, 1e-12);
  }
}

TEST(BoundaryCurve, ConstantSymmetricData) {
  LagrangianSolution s(model_bi(1.0), constant_profile());
  EXPECT_NEAR(boundary_curve(s, 0, Side::minus, 2.0), -2.0 - 1.0, 1e-13);
}

TEST(IntersectionTimes, UnitDensityBornInfeld) {
  LagrangianSolution s(model_bi(1.0), constant_profile());
  const auto tab = intersection_times(s, 1.0);
  ASSERT_EQ(tab.pairs.size(), 1u);
  EXPECT_NEAR(tab.pairs[0].t, 1.0, 1e-14);
  EXPECT_NEAR(tab.t_L, 1.0, 1e-14);
  EXPECT_NEAR(tab.t_L, rk4_crossing(s, 0, 1, 1.0), 1e-6);
}

TEST(IntersectionTimes, UnitDensityAugmented) {
  LagrangianSolution s(model_abi(1.0), PiecewiseProfile::constant(State{1.0, 0.0, -1.0}));
  const auto tab = intersection_times(s, 1.0);
  ASSERT_EQ(tab.pairs.size(), 3u);
  EXPECT_NEAR(tab.pairs[0].t, 2.0, 1e-14);
  EXPECT_NEAR(tab.pairs[1].t, 1.0, 1e-14);
  EXPECT_NEAR(tab.pairs[2].t, 2.0, 1e-14);
  EXPECT_NEAR(tab.t_L, 2.0, 1e-14);
  for (const auto& p : tab.pairs) EXPECT_NEAR(rk4_crossing(s, p.p, p.q, 1.0), p.t, 1e-6 * p.t);
}

TEST(IntersectionTimes, ScaleWithL) {
  LagrangianSolution s(model_bi(1.0), PiecewiseProfile::constant(State{1.0, 0.0}));
  EXPECT_NEAR(intersection_times(s, 2.0).t_L, 2.0 * intersection_times(s, 1.0).t_L, 1e-13);
}

TEST(IntersectionTimes, SingleFamilySentinel) {
  RichSystem one("transport", {{1.0, 0, 1}}, [](const State&) { return 1.0; }, [](const State&) { return 0.0; },
                 {"true", [](const State&) { return true; }});
  LagrangianSolution s(one, PiecewiseProfile({-1.0, 1.0}, {State{0.0}, State{0.0}}));
  const auto tab = intersection_times(s);
  EXPECT_FALSE(tab.has_intersections());
  EXPECT_EQ(tab.t_L, kNoIntersection);
}

TEST(IntersectionTimes, MatchRk4OracleOnCatalog) {
  for (const auto& sc : catalog()) {
    LagrangianSolution s(sc.sys, sc.w0);
    const auto tab = intersection_times(s);
    for (const auto& p : tab.pairs)
      EXPECT_NEAR(rk4_crossing(s, p.p, p.q, core_half_width(s)), p.t, 1e-6 * p.t) << sc.name;
  }
}

TEST(Classify, LabelsAndTieBreak) {
  LagrangianSolution s(model_bi(1.0), two_ramp_profile());
  WavePattern pat(s);
  const double t = 2.0 * pat.t_L();
  const TimeSlice sl = s.slice(t);
  const auto b = pat.boundaries(sl);
  EXPECT_EQ(pat.classify(sl, b[0] - 5.0).index, 0u);
  EXPECT_EQ(pat.classify(sl, 0.5 * (b[1] + b[2])).index, 3u);
  EXPECT_EQ(pat.classify(sl, 0.5 * (b[1] + b[2])).kind, DomainLabel::Kind::plateau);
  // right-closed: the boundary X_p^+ belongs to the profile D_p
  EXPECT_EQ(pat.classify(sl, b[1]).index, 1u);
  EXPECT_EQ(pat.classify(sl, b[3]).index, 2u);
  EXPECT_EQ(pat.classify(sl, b[3] + 1.0).index, 4u);
  EXPECT_EQ(pat.classify(t, b[0]).index, 0u);
}

TEST(Classify, RejectsEarlyTimes) {
  LagrangianSolution s(model_bi(1.0), two_ramp_profile());
  WavePattern pat(s);
  EXPECT_THROW(pat.classify(0.5 * pat.t_L(), 0.0), NotDecomposedError);
  EXPECT_THROW(verify_decomposition(s, pat, pat.t_L()), NotDecomposedError);
}

TEST(Plateau, StatesFollowDefinition) {
  LagrangianSolution s(model_abi(1.0),
                       PiecewiseProfile({-1.0, 0.0, 1.0}, {State{1.0, 0.0, -1.0}, State{1.4, 0.7, -0.6}, State{2.0, 3.0, 0.5}}));
  WavePattern pat(s);
  ASSERT_EQ(pat.plateaus().size(), 4u);
  EXPECT_EQ(pat.plateau(0), (State{1.0, 0.0, -1.0}));
  EXPECT_EQ(pat.plateau(1), (State{2.0, 0.0, -1.0}));
  EXPECT_EQ(pat.plateau(2), (State{2.0, 3.0, -1.0}));
  EXPECT_EQ(pat.plateau(3), (State{2.0, 3.0, 0.5}));
}

TEST(Decomposition, ConstantDataPasses) {
  LagrangianSolution s(model_bi(1.0), constant_profile());
  WavePattern pat(s);
  const auto rep = verify_decomposition(s, pat, 1.5);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.max_plateau_error, 0.0);
}

TEST(Decomposition, SimpleWaveShiftsAtLambdaBar) {
  LagrangianSolution s(model_bi(1.0), simple_wave_profile());
  WavePattern pat(s);
  EXPECT_DOUBLE_EQ(pat.wave_speed(0), -1.0);
  for (double f : {1.01, 2.0}) EXPECT_TRUE(verify_decomposition(s, pat, f * pat.t_L()).passed());
}

TEST(Decomposition, TwoRampPlateauIsMixedState) {
  LagrangianSolution s(model_bi(1.0), two_ramp_profile());
  WavePattern pat(s);
  EXPECT_GT(pat.t_L(), 5.0);
  // single middle region: mu from the right tail, lambda from the left
  EXPECT_EQ(pat.plateau(1), (State{1.0, -1.0}));
  for (double f : {1.01, 1.1, 2.0}) {
    const auto rep = verify_decomposition(s, pat, f * pat.t_L(), 24);
    EXPECT_TRUE(rep.ordered);
    EXPECT_LE(rep.max_plateau_error, 1e-9);
    EXPECT_LE(rep.max_shift_error, 1e-8);
  }
}

TEST(Decomposition, AugmentedHasThreeProfiles) {
  LagrangianSolution s(model_abi(1.0), abi_middle_profile());
  WavePattern pat(s);
  const auto rep = verify_decomposition(s, pat, 1.01 * pat.t_L(), 16, 3.0 * pat.t_L());
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.checks.size(), 2u + 2u + 3u);
  EXPECT_EQ(rep.boundaries.size(), 6u);
}
