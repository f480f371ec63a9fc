#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "hhp/suite.hpp"
#include "hhp/symplectic.hpp"

using hhp::CircleFunction;
using hhp::cplx;
using hhp::FormMode;
using hhp::SampleGrid;

namespace {
constexpr double ulp = std::numeric_limits<double>::epsilon();
}

TEST(SymplecticForm, CosineSine) {
  const auto c = CircleFunction::cosine(1, 1);
  const auto s = CircleFunction::sine(1, 1);
  EXPECT_EQ(hhp::symplectic_form(c, s), cplx(0.5, 0.0));
  EXPECT_NEAR(hhp::symplectic_form(c, s, FormMode::quadrature_on(SampleGrid::uniform(16))).real(), 0.5, 1e-15);
}

TEST(SymplecticForm, AntisymmetryExact) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = hhp::suite::random_real_function(20, rng);
    const auto g = hhp::suite::random_real_function(20, rng);
    EXPECT_EQ(hhp::symplectic_form(f, g), -hhp::symplectic_form(g, f));
    EXPECT_EQ(hhp::symplectic_form(f, f), cplx{});
  }
}

TEST(SymplecticForm, PositiveModesAreIsotropic) {
  const auto f = CircleFunction::mode(1, 4, cplx(1, 2)) + CircleFunction::mode(3, 4, cplx(-0.5, 0.1));
  const auto g = CircleFunction::mode(2, 4, 1.0) + CircleFunction::mode(3, 4, cplx(0, 1));
  EXPECT_EQ(hhp::symplectic_form(f, g), cplx{});
  EXPECT_EQ(hhp::symplectic_form(hhp::conjugate(f), hhp::conjugate(g)), cplx{});
}

TEST(SymplecticForm, CauchySchwarzBound) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = hhp::suite::random_real_function(10, rng);
    const auto g = hhp::suite::random_real_function(10, rng);
    EXPECT_LE(std::abs(hhp::symplectic_form(f, g)), hhp::h_half_norm(f) * hhp::h_half_norm(g));
  }
}

TEST(SymplecticForm, FourierAndQuadratureAgree) {
  std::mt19937_64 rng(31);
  const auto mode = FormMode::quadrature_on(SampleGrid::half_offset(128));
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = hhp::suite::random_real_function(16, rng);
    const auto g = hhp::suite::random_real_function(16, rng);
    EXPECT_NEAR(hhp::symplectic_form(f, g, mode).real(), hhp::symplectic_form(f, g).real(), 1e-10);
  }
  const auto z = CircleFunction::mode(2, 3, cplx(1, 1));
  const auto w = CircleFunction::mode(-2, 3, cplx(0.5, -2));
  EXPECT_NEAR(std::abs(hhp::symplectic_form(z, w, mode) - hhp::symplectic_form(z, w)), 0.0, 1e-13);
}

TEST(SymplecticForm, QuadratureNeedsAdequateGrid) {
  EXPECT_THROW(hhp::symplectic_form(CircleFunction::cosine(8, 8), CircleFunction::sine(8, 8),
                                    FormMode::quadrature_on(SampleGrid::uniform(10))),
               hhp::ValidationError);
}

TEST(Compatibility, PinnedAndRandom) {
  const auto c = CircleFunction::cosine(1, 1);
  EXPECT_EQ(hhp::compatibility_defect(c, c), 0.0);
  EXPECT_EQ(hhp::symplectic_form(c, hhp::hilbert_transform(c)).real(), 0.5);
  EXPECT_EQ(hhp::compatibility_defect(c, CircleFunction::zero(1)), 0.0);
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = hhp::suite::random_real_function(32, rng);
    const auto g = hhp::suite::random_real_function(32, rng);
    const double scale = hhp::h_half_norm(f) * hhp::h_half_norm(g);
    EXPECT_LE(hhp::compatibility_defect(f, g), 8 * ulp * scale);
  }
}

TEST(Positivity, PinnedAndRandom) {
  EXPECT_EQ(hhp::polarization_positivity(CircleFunction::mode(1, 1)), 1.0);
  EXPECT_EQ(hhp::polarization_positivity(CircleFunction::zero(2, false)), 0.0);
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const auto plus = hhp::polarize(hhp::suite::random_real_function(12, rng)).plus;
    const double n2 = hhp::h_half_norm_squared(plus);
    EXPECT_NEAR(hhp::polarization_positivity(plus), n2, 4 * ulp * n2);
  }
  EXPECT_THROW(hhp::polarization_positivity(CircleFunction::cosine(1, 1)), hhp::ValidationError);
}

TEST(Positivity, InnerProductDecomposition) {
  std::mt19937_64 rng(43);
  const cplx i(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = hhp::suite::random_real_function(12, rng);
    const auto g = hhp::suite::random_real_function(12, rng);
    const auto pf = hhp::polarize(f);
    const auto pg = hhp::polarize(g);
    const cplx rhs = i * hhp::symplectic_form(pf.plus, hhp::conjugate(pg.plus)) -
                     i * hhp::symplectic_form(pf.minus, hhp::conjugate(pg.minus));
    const cplx lhs = hhp::inner_product(f, g);
    EXPECT_LE(std::abs(lhs - rhs), 8 * ulp * hhp::h_half_norm(f) * hhp::h_half_norm(g));
  }
}
