#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "richwave/monotone_map.hpp"
#include "richwave/profile.hpp"
#include "richwave/quadrature.hpp"

using namespace richwave;

namespace {

// midpoint rule, used as a brute-force oracle
template <class F>
double riemann(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += f(a + (k + 0.5) * h);
  return s * h;
}

PiecewiseProfile bi_ramp(double bump = 0.0) {
  return PiecewiseProfile({-1.0, 0.0, 1.0}, {State{1.0, -1.0}, State{2.0 + bump, -1.0}, State{1.0, -1.0}});
}

}  // namespace

TEST(Integrate, Constant) {
  EXPECT_DOUBLE_EQ(integrate([](double) { return 3.5; }, 0.0, 1.0), 3.5);
}

TEST(Integrate, LogAntiderivative) {
  const double v = integrate([](double x) { return 2.0 / (x + 3.0); }, -1.0, 0.0);
  EXPECT_NEAR(v, 2.0 * std::log(1.5), 1e-10);
  EXPECT_NEAR(v, 0.810930216, 1e-9);
}

TEST(Integrate, AbsWithKinkIsExact) {
  EXPECT_NEAR(integrate([](double x) { return std::abs(x); }, -1.0, 1.0, {0.0}), 1.0, 1e-15);
}

TEST(Integrate, ReversedLimitsNegate) {
  auto f = [](double x) { return std::exp(x); };
  EXPECT_NEAR(integrate(f, 1.0, 0.0), -(std::exp(1.0) - 1.0), 1e-10);
}

TEST(Integrate, VectorIntegrand) {
  auto f = [](double x) { return std::array<double, 2>{x, x * x}; };
  const auto v = integrate(f, 0.0, 3.0);
  EXPECT_NEAR(v[0], 4.5, 1e-12);
  EXPECT_NEAR(v[1], 9.0, 1e-12);
}

TEST(Integrate, PiecewiseLinearExactOnceSplit) {
  const auto p = bi_ramp();
  auto f = [&](double x) { return p.component(0, x); };
  EXPECT_NEAR(integrate(f, -3.0, 2.0, p.breakpoints()), 5.0 + 1.0, 1e-14);
}

TEST(Integrate, UnresolvedJumpReportsWorstInterval) {
  auto step = [](double x) { return x < 1.0 / 3.0 ? 0.0 : 1.0; };
  try {
    integrate(step, 0.0, 1.0, {}, 1e-13);
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError& e) {
    EXPECT_LE(e.lo(), 1.0 / 3.0);
    EXPECT_GE(e.hi(), 1.0 / 3.0);
    EXPECT_GT(e.estimate(), 0.0);
  }
}

TEST(MonotoneMap, AffineInverse) {
  EXPECT_DOUBLE_EQ(MonotoneMap::affine(2.0, 0.0).invert(5.0), 2.5);
}

TEST(MonotoneMap, ExactAffineTail) {
  // F(x) = x + 7 for x > 10
  auto m = MonotoneMap::piecewise_affine({0.0, 9.0, 10.0}, {0.0, 16.0, 17.0});
  EXPECT_DOUBLE_EQ(m(20.0), 27.0);
  EXPECT_DOUBLE_EQ(m.invert(100.0), 93.0);
}

TEST(MonotoneMap, NewtonWithExactEvaluator) {
  auto F = [](double x) { return x + 0.5 * std::sin(x); };
  auto dF = [](double x) { return 1.0 + 0.5 * std::cos(x); };
  std::vector<double> xs, ys;
  for (int k = -8; k <= 8; ++k) {
    xs.push_back(k);
    ys.push_back(F(k));
  }
  MonotoneMap m(xs, ys, dF(-8.0), dF(8.0), F, dF);
  for (double y : {-6.3, -0.1, 0.0, 2.2, 7.9}) EXPECT_NEAR(F(m.invert(y)), y, 1e-12 * std::max(1.0, std::abs(y)));
  // without the derivative the secant fallback still converges
  MonotoneMap s(xs, ys, dF(-8.0), dF(8.0), F);
  for (double y : {-6.3, 2.2}) EXPECT_NEAR(F(s.invert(y)), y, 1e-12 * std::max(1.0, std::abs(y)));
}

TEST(MonotoneMap, InconsistentEvaluatorFailsLoudly) {
  // the evaluator never reaches y inside the bracket: knots lie about it
  auto F = [](double x) { return x < 0.5 ? 0.0 : 1.0; };
  MonotoneMap m({0.0, 1.0}, {0.0, 1.0}, 1.0, 1.0, F);
  EXPECT_NO_THROW(m.invert(0.5));  // bracket collapses onto the jump
  MonotoneMap bad({0.0, 1.0}, {0.0, 1.0}, 1.0, 1.0, [](double) { return std::nan(""); });
  EXPECT_THROW(bad.invert(0.5), InversionError);
}

TEST(MonotoneMap, RejectsNonMonotoneKnots) {
  EXPECT_THROW(MonotoneMap::piecewise_affine({0.0, 1.0, 2.0}, {0.0, 2.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(MonotoneMap::affine(-1.0, 0.0), std::invalid_argument);
}

TEST(MonotoneMap, RandomPiecewiseAffineRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> step(0.01, 2.0);
  std::uniform_real_distribution<double> where(-50.0, 50.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> xs{-10.0}, ys{-3.0};
    for (int k = 0; k < 30; ++k) {
      xs.push_back(xs.back() + step(rng));
      ys.push_back(ys.back() + step(rng));
    }
    const auto m = MonotoneMap::piecewise_affine(xs, ys);
    for (int k = 0; k < 100; ++k) {
      const double x = where(rng);
      EXPECT_NEAR(m.invert(m(x)), x, 1e-10 * std::max(1.0, std::abs(x)));
    }
  }
}

TEST(Profile, InterpolationAndTails) {
  const auto p = bi_ramp();
  EXPECT_DOUBLE_EQ(p.component(0, -0.5), 1.5);
  EXPECT_DOUBLE_EQ(p.component(0, 7.0), 1.0);
  EXPECT_DOUBLE_EQ(p.component(0, -7.0), 1.0);
  EXPECT_DOUBLE_EQ(p.half_width(), 1.0);
  EXPECT_TRUE(p.equal_tails());
  EXPECT_DOUBLE_EQ(p.total_variation(0), 2.0);
  EXPECT_DOUBLE_EQ(p.slope(0, 0.5), -1.0);
}

TEST(Profile, RejectsBadInput) {
  EXPECT_THROW(PiecewiseProfile({0.0, 0.0}, {State{1.0}, State{1.0}}), std::invalid_argument);
  EXPECT_THROW(PiecewiseProfile({0.0, 1.0}, {State{1.0}}), std::invalid_argument);
  EXPECT_THROW(PiecewiseProfile({0.0, 1.0}, {State{1.0}, State{1.0, 2.0}}), std::invalid_argument);
}

TEST(Profile, AdmissibilityIsChecked) {
  const auto bad = PiecewiseProfile({-1.0, 1.0}, {State{1.0, -1.0}, State{-2.0, 0.0}});
  EXPECT_THROW(require_admissible(model_bi(1.0), bad), DomainError);
  EXPECT_NO_THROW(require_admissible(model_bi(1.0), bi_ramp()));
}

TEST(Profile, TextRoundTrip) {
  const auto p = PiecewiseProfile({-1.0, 0.1, 1.0 / 3.0}, {State{1.0, -1.0}, State{2.5, -0.7}, State{1.0, -1.0}});
  std::stringstream ss;
  write_profile(ss, p);
  EXPECT_EQ(ss.str().substr(0, 27), "# richwave-profile v1, n=2\n");
  const auto q = read_profile(ss);
  EXPECT_EQ(q.breakpoints(), p.breakpoints());
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(q.values()[k], p.values()[k]);
}

TEST(Profile, ReaderRejectsMalformedFiles) {
  for (const char* text : {"", "# something else\n0 1\n", "# richwave-profile v1, n=2\n0 1\n",
                           "# richwave-profile v1, n=1\n1 1\n0 1\n", "# richwave-profile v1, n=1\n0 1 2\n"}) {
    std::stringstream ss(text);
    EXPECT_THROW(read_profile(ss), ScenarioError) << text;
  }
}

TEST(L1Distance, IdenticalProfiles) {
  EXPECT_EQ(l1_distance(bi_ramp(), bi_ramp(), 0), 0.0);
}

TEST(L1Distance, TriangleOverFlat) {
  const double h = 0.7, ell = 1.3;
  const auto tri = PiecewiseProfile({-ell, 0.0, ell}, {State{0.0}, State{h}, State{0.0}});
  const auto flat = PiecewiseProfile({-5.0, 5.0}, {State{0.0}, State{0.0}});
  EXPECT_NEAR(l1_distance(tri, flat, 0), h * ell, 1e-15);
}

TEST(L1Distance, DifferentTailsAreInfinitelyFar) {
  const auto other = PiecewiseProfile({-1.0, 1.0}, {State{1.0, -1.0}, State{1.5, -1.0}});
  EXPECT_TRUE(std::isinf(l1_distance(bi_ramp(), other, 0)));
  EXPECT_EQ(l1_distance(bi_ramp(), other, 1), 0.0);
}

TEST(L1Distance, OffsetRampsAgainstRiemannSum) {
  const auto p = bi_ramp();
  const auto q = PiecewiseProfile({-1.0, -0.2, 0.3, 1.0},
                                  {State{1.0, -1.0}, State{2.1, -1.0}, State{1.4, -1.0}, State{1.0, -1.0}});
  auto diff = [&](double x) { return std::abs(p.component(0, x) - q.component(0, x)); };
  EXPECT_NEAR(l1_distance(p, q, 0), riemann(diff, -1.0, 1.0, 1000000), 1e-8);
}

TEST(L1Distance, CrossingProfilesSplitAtZero) {
  const auto p = PiecewiseProfile({0.0, 1.0, 2.0, 3.0}, {State{0.0}, State{-1.0}, State{1.0}, State{0.0}});
  const auto q = PiecewiseProfile({0.0, 3.0}, {State{0.0}, State{0.0}});
  // three triangles of area 1/2, the middle one split by the zero crossing
  EXPECT_NEAR(l1_distance(p, q, 0), 1.5, 1e-15);
}

TEST(L1Distance, MetricOnRandomTriples) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  auto random_profile = [&] {
    std::vector<double> xs{-2.0};
    std::vector<State> vs{State{0.0}};
    for (int k = 0; k < 6; ++k) {
      xs.push_back(xs.back() + 0.2 + 0.5 * (v(rng) + 1.0));
      vs.push_back(State{v(rng)});
    }
    xs.push_back(xs.back() + 0.5);
    vs.push_back(State{0.0});
    return PiecewiseProfile(xs, vs);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_profile(), b = random_profile(), c = random_profile();
    const double ab = l1_distance(a, b, 0), bc = l1_distance(b, c, 0), ac = l1_distance(a, c, 0);
    EXPECT_DOUBLE_EQ(ab, l1_distance(b, a, 0));
    EXPECT_LE(ac, ab + bc + 1e-14);
  }
}

TEST(ProfileAdd, LinearInAmplitude) {
  const auto base = bi_ramp();
  const auto bump = PiecewiseProfile({-0.5, 0.0, 0.5}, {State{0.0, 0.0}, State{1.0, 0.0}, State{0.0, 0.0}});
  const auto p1 = add(base, bump, 0.1);
  const auto p2 = add(base, bump, 0.05);
  EXPECT_NEAR(l1_distance(p1, base), 2.0 * l1_distance(p2, base), 1e-15);
  EXPECT_NEAR(l1_distance(p1, base), 0.1 * 0.5, 1e-15);
}
