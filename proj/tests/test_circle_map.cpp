#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "hhp/circle_map.hpp"

using hhp::CircleFunction;
using hhp::cplx;
using hhp::MapDescriptor;
using hhp::SampleGrid;

namespace {

constexpr double pi = std::numbers::pi;
const SampleGrid grid = SampleGrid::uniform(1024);

double sup_deviation(const hhp::CircleMap& a, const hhp::CircleMap& b) {
  double worst = 0.0;
  for (int j = 0; j < 257; ++j) {
    const double t = -pi + 2 * pi * j / 256.0 + 0.001;
    worst = std::max(worst, std::abs(a.lift(t) - b.lift(t)));
  }
  return worst;
}

/// Distance on the circle between lift values (ignores 2 pi k offsets).
double circle_deviation(const hhp::CircleMap& a, const hhp::CircleMap& b) {
  double worst = 0.0;
  for (int j = 0; j < 257; ++j) {
    const double t = 2 * pi * j / 256.0 + 0.013;
    worst = std::max(worst, std::abs(std::remainder(a.lift(t) - b.lift(t), 2 * pi)));
  }
  return worst;
}

/// Moebius map as the matrix [[e^{i b}, -a e^{i b}], [-conj(a), 1]] acting on z.
struct Mob {
  cplx p, q, r, s;
};

Mob matrix_of(cplx a, double beta) {
  const cplx e = std::polar(1.0, beta);
  return {e, -a * e, -std::conj(a), 1.0};
}

Mob operator*(const Mob& x, const Mob& y) {
  return {x.p * y.p + x.q * y.r, x.p * y.q + x.q * y.s, x.r * y.p + x.s * y.r, x.r * y.q + x.s * y.s};
}

MapDescriptor descriptor_of(const Mob& m) {
  const cplx e = m.p / m.s;  // unimodular
  return MapDescriptor::moebius(-m.q / m.p, std::arg(e));
}

}  // namespace

TEST(MakeMap, BasicFamilies) {
  const auto id = hhp::make_map(MapDescriptor::identity(), grid);
  EXPECT_EQ(id.lift(pi), pi);
  EXPECT_EQ(id.degree(), 1);

  const auto sq = hhp::make_map(MapDescriptor::power(2), grid);
  EXPECT_EQ(sq.degree(), 2);
  EXPECT_DOUBLE_EQ(sq.lift(1.25), 2.5);

  const auto rauch = hhp::make_map(MapDescriptor::rauch_flow(0, 0.001), grid);
  EXPECT_NEAR(rauch.lift(0.7), 0.7 - 0.002 * std::sin(1.4), 1e-16);
  EXPECT_GT(rauch.min_forward_difference(), 0.0);
  const auto rauch2 = hhp::make_map(MapDescriptor::rauch_flow(2, 0.01), grid);
  EXPECT_NEAR(rauch2.lift(0.7), 0.7 - 2 * 0.01 * std::sin(4 * 0.7) / 3, 1e-16);
}

TEST(MakeMap, LiftAdvancesByDegreeTimesTwoPi) {
  for (const auto& d : {MapDescriptor::moebius(cplx(0.4, -0.3), 2.0), MapDescriptor::power(3),
                        MapDescriptor::flow(CircleFunction::sine(2, 2), 0.2)}) {
    const auto map = hhp::make_map(d, grid);
    for (double t : {0.0, 1.0, 4.0})
      EXPECT_NEAR(map.lift(t + 2 * pi) - map.lift(t), 2 * pi * map.degree(), 1e-12);
  }
}

TEST(MakeMap, MoebiusMatchesDefinition) {
  const cplx a(0.35, 0.2);
  const double beta = 0.8;
  const auto map = hhp::make_map(MapDescriptor::moebius(a, beta), grid);
  for (double t : {0.1, 1.7, 3.0, 5.5}) {
    const cplx z = std::polar(1.0, t);
    const cplx w = std::polar(1.0, beta) * (z - a) / (1.0 - std::conj(a) * z);
    EXPECT_NEAR(std::abs(std::polar(1.0, map.lift(t)) - w), 0.0, 1e-15);
  }
}

TEST(MakeMap, RejectsBadDescriptors) {
  EXPECT_THROW(hhp::make_map(MapDescriptor::moebius(1.0, 0.0), grid), hhp::ValidationError);
  EXPECT_THROW(hhp::make_map(MapDescriptor::flow(CircleFunction::sine(1, 1), 1.5), grid), hhp::ValidationError);
  EXPECT_THROW(hhp::make_map(MapDescriptor::rauch_flow(0, 0.3), grid), hhp::ValidationError);
  EXPECT_THROW(hhp::make_map(MapDescriptor::power(0), grid), hhp::ValidationError);
  EXPECT_THROW(hhp::make_map(MapDescriptor::rauch_flow(-1, 0.01), grid), hhp::ValidationError);
  EXPECT_THROW(hhp::make_map(MapDescriptor::compose({}), grid), hhp::ValidationError);
}

TEST(EvaluateLift, Pinned) {
  EXPECT_EQ(hhp::evaluate_lift(hhp::make_map(MapDescriptor::identity(), grid), pi), pi);
  EXPECT_DOUBLE_EQ(hhp::evaluate_lift(hhp::make_map(MapDescriptor::rotation(pi / 2), grid), 0.0), pi / 2);
  const auto m0 = hhp::make_map(MapDescriptor::moebius(0.0, 0.9), grid);
  EXPECT_NEAR(hhp::evaluate_lift(m0, 1.1), 2.0, 1e-15);
}

TEST(Compose, IdentityAndRotations) {
  const auto phi = hhp::make_map(MapDescriptor::flow(CircleFunction::sine(1, 1), 0.1), grid);
  const auto id = hhp::make_map(MapDescriptor::identity(), grid);
  EXPECT_EQ(sup_deviation(hhp::compose(phi, id), phi), 0.0);
  const auto r = hhp::compose(hhp::make_map(MapDescriptor::rotation(0.3), grid),
                              hhp::make_map(MapDescriptor::rotation(0.5), grid));
  EXPECT_NEAR(sup_deviation(r, hhp::make_map(MapDescriptor::rotation(0.8), grid)), 0.0, 1e-15);
}

TEST(Compose, DegreesMultiply) {
  const auto m = hhp::compose(hhp::make_map(MapDescriptor::power(2), grid),
                              hhp::make_map(MapDescriptor::power(3), grid));
  EXPECT_EQ(m.degree(), 6);
  EXPECT_DOUBLE_EQ(m.lift(0.5), 3.0);
}

TEST(Compose, OrderIsOuterAfterInner) {
  const auto outer = hhp::make_map(MapDescriptor::flow(CircleFunction::sine(1, 1), 0.2), grid);
  const auto inner = hhp::make_map(MapDescriptor::rotation(0.6), grid);
  const auto both = hhp::compose(outer, inner);
  EXPECT_NEAR(both.lift(0.4), 1.0 + 0.2 * std::sin(1.0), 1e-15);
}

TEST(Compose, Associative) {
  const auto a = hhp::make_map(MapDescriptor::flow(CircleFunction::sine(2, 2), 0.1), grid);
  const auto b = hhp::make_map(MapDescriptor::moebius(0.3, 0.2), grid);
  const auto c = hhp::make_map(MapDescriptor::rauch_flow(1, 0.02), grid);
  EXPECT_LE(sup_deviation(hhp::compose(hhp::compose(a, b), c), hhp::compose(a, hhp::compose(b, c))), 1e-9);
}

TEST(Invert, RoundTripOnFlow) {
  const auto phi = hhp::make_map(MapDescriptor::flow(CircleFunction::sine(1, 1), 0.1), grid);
  const auto inv = hhp::invert(phi);
  const auto id = hhp::make_map(MapDescriptor::identity(), grid);
  EXPECT_LE(sup_deviation(hhp::compose(phi, inv), id), 1e-8);
  EXPECT_LE(sup_deviation(hhp::compose(inv, phi), id), 1e-8);
  EXPECT_EQ(sup_deviation(hhp::invert(inv), phi), 0.0);
}

TEST(Invert, IdentityAndRotation) {
  const auto id = hhp::make_map(MapDescriptor::identity(), grid);
  EXPECT_EQ(sup_deviation(hhp::invert(id), id), 0.0);
  const auto r = hhp::invert(hhp::make_map(MapDescriptor::rotation(0.7), grid));
  EXPECT_LE(sup_deviation(r, hhp::make_map(MapDescriptor::rotation(-0.7), grid)), 1e-12);
}

TEST(Invert, MoebiusClosedForm) {
  for (const auto& [a, beta] : std::vector<std::pair<cplx, double>>{{0.4, 0.0}, {cplx(0.2, 0.5), 1.3}}) {
    const auto inv = hhp::invert(hhp::make_map(MapDescriptor::moebius(a, beta), grid));
    // (e^{ib}(z - a)/(1 - conj(a) z))^{-1} = moebius(-a e^{ib}, -b).
    const auto closed = hhp::make_map(MapDescriptor::moebius(-a * std::polar(1.0, beta), -beta), grid);
    EXPECT_LE(circle_deviation(inv, closed), 1e-9);
  }
}

TEST(Invert, RejectsHigherDegree) {
  EXPECT_THROW(hhp::invert(hhp::make_map(MapDescriptor::power(2), grid)), hhp::ValidationError);
}

TEST(Moebius, ClosedUnderComposition) {
  const cplx a1(0.3, -0.1), a2(-0.2, 0.4);
  const double b1 = 0.7, b2 = -1.1;
  const auto composed = hhp::compose(hhp::make_map(MapDescriptor::moebius(a1, b1), grid),
                                     hhp::make_map(MapDescriptor::moebius(a2, b2), grid));
  const auto single = hhp::make_map(descriptor_of(matrix_of(a1, b1) * matrix_of(a2, b2)), grid);
  EXPECT_LE(circle_deviation(composed, single), 1e-9);
}

TEST(QsRatio, TrivialMaps) {
  const std::vector<double> scales{0.05, 0.3, 1.0};
  EXPECT_NEAR(hhp::qs_ratio(hhp::make_map(MapDescriptor::identity(), grid), scales), 1.0, 1e-14);
  EXPECT_NEAR(hhp::qs_ratio(hhp::make_map(MapDescriptor::rotation(0.4), grid), scales), 1.0, 1e-12);
}

TEST(QsRatio, FlowPinned) {
  const std::vector<double> scales{0.05, 0.2, 0.5, 1.0};
  const double q = hhp::qs_ratio(hhp::make_map(MapDescriptor::flow(CircleFunction::sine(1, 1), 0.5), grid), scales);
  EXPECT_GT(q, 1.0);
  EXPECT_NEAR(q, 1.678685285541147, 1e-9);
}

TEST(QsRatio, MoebiusGrowsWithModulus) {
  const std::vector<double> scales{0.1, 0.5, 1.0};
  double prev = 1.0;
  for (double a : {0.1, 0.3, 0.5, 0.7}) {
    const double q = hhp::qs_ratio(hhp::make_map(MapDescriptor::moebius(a, 0.0), grid), scales);
    EXPECT_GT(q, prev);
    EXPECT_TRUE(std::isfinite(q));
    prev = q;
  }
}

TEST(QsRatio, InvariantUnderRotations) {
  const std::vector<double> scales{0.1, 0.5, 1.0};
  const auto phi = hhp::make_map(MapDescriptor::moebius(cplx(0.4, 0.1), 0.3), grid);
  const double base = hhp::qs_ratio(phi, scales);
  const auto post = hhp::compose(hhp::make_map(MapDescriptor::rotation(1.234), grid), phi);
  EXPECT_NEAR(hhp::qs_ratio(post, scales), base, 1e-12 * base);
  // Pre-rotation by a whole number of grid cells permutes the sample points.
  const auto pre = hhp::compose(phi, hhp::make_map(MapDescriptor::rotation(37 * grid.spacing()), grid));
  EXPECT_NEAR(hhp::qs_ratio(pre, scales), base, 1e-10 * base);
}

TEST(RadialDilatation, Pinned) {
  const auto big = SampleGrid::uniform(4096);
  EXPECT_EQ(hhp::radial_dilatation(hhp::make_map(MapDescriptor::identity(), big)), 1.0);
  EXPECT_NEAR(hhp::radial_dilatation(hhp::make_map(MapDescriptor::rotation(2.0), big)), 1.0, 1e-13);
  for (double eps : {0.01, 0.1, 0.3}) {
    // L' = 1 + eps cos, so the supremum of max(L', 1/L') is 1/(1 - eps) at theta = pi.
    const double k =
        hhp::radial_dilatation(hhp::make_map(MapDescriptor::flow(CircleFunction::sine(1, 1), eps), big));
    EXPECT_NEAR(k, 1.0 / (1.0 - eps), 1e-12);
    EXPECT_NEAR(k, 1.0 + eps, 2 * eps * eps);
  }
}

TEST(SampledMaps, InterpolateAndAreNotSmooth) {
  const auto flow = MapDescriptor::flow(CircleFunction::sine(2, 2), 0.1);
  const auto g = SampleGrid::uniform(64);
  std::vector<double> lift(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) lift[j] = hhp::detail::lift_value(flow, g.theta(j));
  const auto sampled = hhp::make_map(hhp::desc::Sampled::from_lift(lift, g, 1), g);
  EXPECT_FALSE(sampled.smooth());
  EXPECT_NEAR(sampled.lift(0.123), 0.123 + 0.1 * std::sin(0.246), 1e-14);
  EXPECT_THROW(hhp::radial_dilatation(sampled), hhp::ValidationError);
}

TEST(Derivatives, SpectralMatchesClosedForm) {
  const auto big = SampleGrid::uniform(4096);
  const auto map = hhp::make_map(MapDescriptor::flow(CircleFunction::sine(1, 1), 0.1), big);
  EXPECT_NEAR(map.derivative(0.4, 1), 1.0 + 0.1 * std::cos(0.4), 1e-14);
  EXPECT_NEAR(map.derivative(0.4, 2), -0.1 * std::sin(0.4), 1e-14);
  EXPECT_NEAR(map.derivative(0.4, 3), -0.1 * std::cos(0.4), 1e-14);
  EXPECT_LE(map.bandwidth(), 1);
}
