#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hhp/fourier.hpp"
#include "hhp/suite.hpp"

using hhp::CircleFunction;
using hhp::cplx;
using hhp::SampleGrid;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> sample(const SampleGrid& grid, double (*fn)(double)) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) v[j] = fn(grid.theta(j));
  return v;
}

}  // namespace

TEST(Analyze, CosineGivesTwoHalfCoefficients) {
  const auto grid = SampleGrid::uniform(64);
  const auto f = hhp::analyze(sample(grid, [](double t) { return std::cos(t); }), grid, 4);
  EXPECT_NEAR(f.coeff(1).real(), 0.5, 1e-15);
  EXPECT_NEAR(f.coeff(-1).real(), 0.5, 1e-15);
  for (int n : {-4, -3, -2, 2, 3, 4}) EXPECT_LT(std::abs(f.coeff(n)), 1e-15);
  EXPECT_TRUE(f.is_real());
}

TEST(Analyze, ConstantsAreQuotientedOut) {
  const auto grid = SampleGrid::uniform(32);
  const auto f = hhp::analyze(std::vector<double>(32, 5.0), grid, 4);
  EXPECT_LT(f.max_abs_coeff(), 1e-14);
}

TEST(Analyze, SineThree) {
  const auto grid = SampleGrid::uniform(64);
  const auto f = hhp::analyze(sample(grid, [](double t) { return std::sin(3 * t); }), grid, 4);
  EXPECT_NEAR(std::abs(f.coeff(3) - cplx(0.0, -0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f.coeff(-3) - cplx(0.0, 0.5)), 0.0, 1e-15);
}

TEST(Analyze, OffsetGridIsHandled) {
  const auto grid = SampleGrid::half_offset(64);
  const auto f = hhp::analyze(sample(grid, [](double t) { return std::sin(3 * t); }), grid, 4);
  EXPECT_NEAR(std::abs(f.coeff(3) - cplx(0.0, -0.5)), 0.0, 1e-15);
}

TEST(Analyze, RejectsGridTooSmall) {
  const auto grid = SampleGrid::uniform(8);
  EXPECT_THROW(hhp::analyze(std::vector<double>(8, 0.0), grid, 4), hhp::ValidationError);
}

TEST(Synthesize, ZeroAndCosine) {
  const auto grid = SampleGrid::uniform(16);
  for (cplx v : hhp::synthesize(CircleFunction::zero(3), grid)) EXPECT_EQ(v, cplx{});
  EXPECT_NEAR(hhp::synthesize(CircleFunction::cosine(1, 1), grid)[0].real(), 1.0, 1e-15);
}

TEST(Synthesize, RoundTripRandom) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = hhp::suite::random_real_function(12, rng);
    const auto grid = SampleGrid::half_offset(64);
    const auto back = hhp::analyze(hhp::synthesize_real(f, grid), grid, 12);
    EXPECT_LT((back - f).max_abs_coeff(), 1e-14);
  }
  const auto g = CircleFunction::mode(-2, 3, cplx(0.3, 0.7)) + CircleFunction::mode(3, 3, 2.0);
  const auto grid = SampleGrid::uniform(16);
  const auto vals = hhp::synthesize(g, grid);
  EXPECT_LT((hhp::analyze(vals, grid, 3) - g).max_abs_coeff(), 1e-15);
}

TEST(Norm, PinnedValues) {
  EXPECT_DOUBLE_EQ(hhp::h_half_norm_squared(CircleFunction::cosine(1, 1)), 0.5);
  EXPECT_DOUBLE_EQ(hhp::h_half_norm(CircleFunction::zero(4)), 0.0);
  EXPECT_DOUBLE_EQ(hhp::h_half_norm_squared(CircleFunction::cosine(1, 2) + CircleFunction::cosine(2, 2)), 1.5);
  // Real and complex forms agree: 2 sum n |c_n|^2 = sum |n| |c_n|^2.
  std::mt19937_64 rng(3);
  const auto f = hhp::suite::random_real_function(9, rng);
  double twice_positive = 0.0;
  for (int n = 1; n <= 9; ++n) twice_positive += 2.0 * n * std::norm(f.coeff(n));
  EXPECT_NEAR(hhp::h_half_norm_squared(f), twice_positive, 1e-14 * twice_positive);
}

TEST(InnerProduct, PinnedValues) {
  const auto c = CircleFunction::cosine(1, 1);
  const auto s = CircleFunction::sine(1, 1);
  EXPECT_EQ(hhp::inner_product(c, s), cplx(0.0, 0.0));
  EXPECT_EQ(hhp::inner_product(CircleFunction::mode(1, 1), CircleFunction::mode(1, 1)), cplx(1.0, 0.0));
}

TEST(InnerProduct, ParsevalCoherence) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = hhp::suite::random_real_function(32, rng);
    const double n2 = hhp::h_half_norm_squared(f);
    const cplx ip = hhp::inner_product(f, f);
    EXPECT_LE(std::abs(ip.real() - n2), 4 * std::numeric_limits<double>::epsilon() * n2);
    EXPECT_EQ(ip.imag(), 0.0);
  }
}

TEST(Hilbert, CosineToSine) {
  EXPECT_EQ(hhp::hilbert_transform(CircleFunction::cosine(1, 3)), CircleFunction::sine(1, 3));
  EXPECT_EQ(hhp::hilbert_transform(CircleFunction::sine(2, 3)), -CircleFunction::cosine(2, 3));
}

TEST(Hilbert, IsometryAndInvolutionExact) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = hhp::suite::random_real_function(32, rng);
    const auto jf = hhp::hilbert_transform(f);
    EXPECT_EQ(hhp::h_half_norm_squared(jf), hhp::h_half_norm_squared(f));
    EXPECT_EQ(hhp::hilbert_transform(jf), -f);
    EXPECT_TRUE(jf.is_real());
  }
  const auto z = CircleFunction::mode(2, 3, cplx(1, 2)) + CircleFunction::mode(-1, 3, cplx(-3, 1));
  EXPECT_EQ(hhp::hilbert_transform(hhp::hilbert_transform(z)), -z);
  EXPECT_FALSE(hhp::hilbert_transform(z).is_real());
}

TEST(Polarize, CosineSplitsIntoHalves) {
  const auto p = hhp::polarize(CircleFunction::cosine(1, 1));
  EXPECT_EQ(p.plus.coeff(1), cplx(0.5, 0.0));
  EXPECT_EQ(p.plus.coeff(-1), cplx{});
  EXPECT_EQ(p.minus.coeff(-1), cplx(0.5, 0.0));
  EXPECT_TRUE(hhp::in_w_plus(p.plus));
}

TEST(Polarize, Properties) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = hhp::suite::random_real_function(16, rng);
    const auto p = hhp::polarize(f);
    EXPECT_EQ(p.plus + p.minus, f);
    EXPECT_EQ(hhp::inner_product(p.plus, p.minus), cplx{});
    EXPECT_NEAR(hhp::h_half_norm_squared(f),
                hhp::h_half_norm_squared(p.plus) + hhp::h_half_norm_squared(p.minus),
                1e-14 * hhp::h_half_norm_squared(f));
    EXPECT_EQ(p.minus, hhp::conjugate(p.plus));
    EXPECT_EQ(hhp::hilbert_transform(p.plus), cplx(0.0, -1.0) * p.plus);
    EXPECT_EQ(hhp::polarize(p.plus).plus, p.plus);
  }
}

TEST(Douglas, CosineIsOneHalf) {
  EXPECT_NEAR(hhp::douglas_energy(CircleFunction::cosine(1, 1), SampleGrid::half_offset(256)), 0.5, 1e-10);
  EXPECT_EQ(hhp::douglas_energy(CircleFunction::zero(3), SampleGrid::half_offset(64)), 0.0);
}

TEST(Douglas, MatchesNormOnRandomPolynomials) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = hhp::suite::random_real_function(1 + trial % 16, rng);
    const double exact = hhp::h_half_norm_squared(f);
    EXPECT_NEAR(hhp::douglas_energy(f, SampleGrid::half_offset(512)), exact, 1e-8 * exact);
  }
}

TEST(Douglas, RejectsZeroOffset) {
  EXPECT_THROW(hhp::douglas_energy(CircleFunction::cosine(1, 1), SampleGrid::uniform(64)), hhp::ValidationError);
}

TEST(Poisson, PinnedValues) {
  EXPECT_NEAR(hhp::poisson_evaluate(CircleFunction::cosine(1, 1), 0.5, 0.0).real(), 0.5, 1e-16);
  std::mt19937_64 rng(19);
  EXPECT_EQ(hhp::poisson_evaluate(hhp::suite::random_real_function(5, rng), 0.0, 1.3), cplx{});
  const cplx w = hhp::poisson_evaluate(CircleFunction::mode(1, 1), 0.3, 0.8);
  EXPECT_NEAR(std::abs(w - std::polar(0.3, 0.8)), 0.0, 1e-16);
  EXPECT_THROW(hhp::poisson_evaluate(CircleFunction::mode(1, 1), 1.0, 0.0), hhp::ValidationError);
}

TEST(CircleFunction, RealInputMustBeSymmetric) {
  std::vector<cplx> coeffs{cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(1, 0)};
  EXPECT_NO_THROW(CircleFunction(2, coeffs, true));
  coeffs[0] = cplx(2, 0);
  EXPECT_THROW(CircleFunction(2, coeffs, true), hhp::ValidationError);
  EXPECT_THROW(CircleFunction(0, false), hhp::ValidationError);
}

TEST(CircleFunction, PointEvaluationAndDerivative) {
  const auto f = CircleFunction::cosine(2, 2, 3.0);
  EXPECT_NEAR(f(0.3).real(), 3.0 * std::cos(0.6), 1e-15);
  EXPECT_NEAR(f.derivative()(0.3).real(), -6.0 * std::sin(0.6), 1e-14);
  EXPECT_NEAR(f(pi / 2).real(), -3.0, 1e-15);
}
