#pragma once

// The property catalog: one function per acceptance criterion, each returning
// a pass/fail record with the worst observed value and its threshold.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hhp/circle_map.hpp"
#include "hhp/fourier.hpp"
#include "hhp/period.hpp"
#include "hhp/pullback.hpp"
#include "hhp/quantum.hpp"
#include "hhp/symplectic.hpp"

namespace hhp::suite {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double value = 0.0;      ///< worst observed figure of merit
  double threshold = 0.0;  ///< pass iff value <= threshold (plus any side conditions)
  std::string detail;
};

struct Options {
  std::uint64_t seed = 20240917;
};

inline constexpr double pi = std::numbers::pi;

/// Real function with c_n = (x + i y) / n, x, y standard normal, n = 1..bandlimit.
template <class Rng>
CircleFunction random_real_function(int bandlimit, Rng& rng) {
  std::normal_distribution<double> normal;
  std::vector<cplx> positive(static_cast<std::size_t>(bandlimit));
  for (int n = 1; n <= bandlimit; ++n) {
    const double x = normal(rng);
    const double y = normal(rng);
    positive[static_cast<std::size_t>(n - 1)] = cplx(x, y) / static_cast<double>(n);
  }
  return CircleFunction::real_from_positive(positive, bandlimit);
}

// ---------------------------------------------------------------------------
// Map catalogs.

/// Twelve smooth degree-1 maps, all well conditioned at N = 16.
inline std::vector<MapDescriptor> smooth_catalog() {
  using D = MapDescriptor;
  const auto s1 = CircleFunction::sine(1, 1);
  const auto s2 = CircleFunction::sine(2, 2);
  const auto c2 = CircleFunction::cosine(2, 2);
  const auto mixed = CircleFunction::cosine(3, 3) + CircleFunction::sine(1, 3, 0.5);
  return {
      D::identity(),
      D::rotation(0.7),
      D::moebius(0.3, 1.0),
      D::moebius(cplx(0.2, -0.35), 0.4),
      D::flow(s1, 0.3),
      D::flow(s2, 0.05),
      D::flow(mixed, 0.05),
      D::rauch_flow(0, 0.01),
      D::rauch_flow(2, 0.02),
      D::compose({D::flow(c2, 0.08), D::moebius(0.25, -0.5)}),
      D::inverse(D::flow(s2, 0.1)),
      D::compose({D::rotation(-1.2), D::flow(CircleFunction::cosine(4, 4), 0.04), D::rauch_flow(1, 0.02)}),
  };
}

struct MapPair {
  MapDescriptor phi;
  MapDescriptor psi;
};

/// Pairs for the equivariance check; Z(phi o psi) against T_psi acting on Z(phi).
inline std::vector<MapPair> equivariance_catalog() {
  using D = MapDescriptor;
  return {
      {D::flow(CircleFunction::sine(2, 2), 0.05), D::moebius(0.2, 0.0)},
      {D::moebius(0.2, 0.5), D::flow(CircleFunction::cosine(3, 3), 0.04)},
      {D::rotation(0.9), D::flow(CircleFunction::sine(1, 1), 0.3)},
      {D::flow(CircleFunction::cosine(2, 2), 0.06), D::flow(CircleFunction::sine(3, 3), 0.03)},
      {D::rauch_flow(1, 0.02), D::moebius(cplx(0.0, 0.15), 1.0)},
      {D::inverse(D::flow(CircleFunction::sine(2, 2), 0.08)), D::rauch_flow(0, 0.03)},
  };
}

/// Maps whose A block stays well conditioned at N = 32.
inline std::vector<MapDescriptor> integrability_catalog() {
  using D = MapDescriptor;
  return {
      D::identity(),
      D::rotation(0.4),
      D::moebius(0.3, 1.0),
      D::moebius(cplx(-0.1, 0.2), -0.7),
      D::flow(CircleFunction::sine(2, 2), 0.05),
      D::flow(CircleFunction::cosine(3, 3) + CircleFunction::sine(1, 3, 0.5), 0.05),
      D::rauch_flow(1, 0.02),
      D::compose({D::flow(CircleFunction::cosine(2, 2), 0.08), D::moebius(0.25, -0.5)}),
  };
}

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

inline CriterionResult make(int id, std::string name, double value, double threshold, bool extra_ok,
                            std::string detail) {
  return {id, std::move(name), extra_ok && value <= threshold, value, threshold, std::move(detail)};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Criteria.

inline CriterionResult hilbert_suite(const Options& opt = {}) {
  std::mt19937_64 rng(opt.seed);
  bool exact = true;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const CircleFunction f = random_real_function(32, rng);
    const CircleFunction g = random_real_function(32, rng);
    const CircleFunction jf = hilbert_transform(f);
    exact = exact && h_half_norm_squared(jf) == h_half_norm_squared(f) && hilbert_transform(jf) == -f;
    worst = std::max(worst, compatibility_defect(f, g) / (h_half_norm(f) * h_half_norm(g)));
  }
  return detail::make(1, "Hilbert transform: isometry, involution, compatibility", worst, 1e-12, exact,
                      std::string("isometry and involution exact: ") + (exact ? "yes" : "no") +
                          "; max relative |S(f,Jg) - <f,g>| = " + detail::fmt(worst));
}

inline CriterionResult douglas_oracle(const Options& opt = {}) {
  std::mt19937_64 rng(opt.seed + 1);
  std::uniform_int_distribution<int> band(1, 16);
  const SampleGrid grid = SampleGrid::half_offset(512);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const CircleFunction f = random_real_function(band(rng), rng);
    const double exact = h_half_norm_squared(f);
    worst = std::max(worst, std::abs(douglas_energy(f, grid) - exact) / exact);
  }
  return detail::make(2, "Douglas energy against the H^1/2 norm", worst, 1e-8, true,
                      "max relative error over 20 polynomials = " + detail::fmt(worst));
}

inline CriterionResult symplectic_invariance(const Options& opt = {}) {
  std::mt19937_64 rng(opt.seed + 2);
  const SampleGrid grid = SampleGrid::uniform(4096);
  const auto catalog = smooth_catalog();
  double worst = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    const CircleMap map = make_map(catalog[i + 2], grid);
    for (int trial = 0; trial < 10; ++trial) {
      const CircleFunction f = random_real_function(6, rng);
      const CircleFunction g = random_real_function(6, rng);
      worst = std::max(worst, invariance_defect(map, f, g, grid));
    }
  }
  double worst_degree = 0.0;
  for (int k : {2, 3}) {
    const CircleMap map = make_map(MapDescriptor::power(k), grid);
    for (int n = 1; n <= 4; ++n) {
      worst_degree = std::max(worst_degree, invariance_defect(map, CircleFunction::cosine(n, 4),
                                                              CircleFunction::sine(n, 4), grid));
      worst_degree = std::max(worst_degree, invariance_defect(map, CircleFunction::cosine(n, 4) +
                                                                       CircleFunction::sine(1, 4, 0.3),
                                                              CircleFunction::cosine(1, 4) -
                                                                  CircleFunction::sine(n, 4, 2.0),
                                                              grid));
    }
  }
  return detail::make(3, "Symplectic invariance under pullback", worst, 1e-8, worst_degree <= 1e-10,
                      "max diffeo defect = " + detail::fmt(worst) + "; max degree-k defect = " +
                          detail::fmt(worst_degree) + " (threshold 1e-10)");
}

inline CriterionResult moebius_basepoint(const Options& = {}) {
  const SampleGrid grid = SampleGrid::uniform(4096);
  double worst_z = 0.0;
  double worst_b = 0.0;
  double worst_u = 0.0;
  for (double a : {0.1, 0.3, 0.5}) {
    for (double beta : {0.0, 1.0}) {
      const CircleMap map = make_map(MapDescriptor::moebius(a, beta), grid);
      worst_z = std::max(worst_z, max_abs(period_matrix(map, 16, grid).Z));
      // A tall block keeps every image column inside the row range, so
      // A*A = I is a statement about the operator, not its truncation.
      const BlockOperator tall = pullback_blocks(map, 512, 16, grid);
      worst_b = std::max(worst_b, max_abs(tall.B));
      worst_u = std::max(worst_u, max_abs(tall.A.adjoint() * tall.A - Matrix::Identity(16, 16)));
    }
  }
  const double worst = std::max({worst_z, worst_b, worst_u});
  return detail::make(4, "Moebius maps sit at the basepoint", worst, 1e-6, true,
                      "max |Z| = " + detail::fmt(worst_z) + ", max |B| = " + detail::fmt(worst_b) +
                          ", max |A*A - I| = " + detail::fmt(worst_u));
}

inline CriterionResult siegel_catalog(const Options& = {}) {
  const SampleGrid grid = SampleGrid::uniform(4096);
  double worst_ratio = 0.0;
  double worst_sigma = 0.0;
  double worst_gap = 1.0;
  bool all = true;
  for (const auto& d : smooth_catalog()) {
    const PeriodMatrix pm = period_matrix(make_map(d, grid), 16, grid);
    const SiegelReport r = siegel_membership(pm, 1e-6 * (1.0 + max_abs(pm.Z)));
    all = all && r.member;
    worst_ratio = std::max(worst_ratio, r.symmetry_defect / (1e-6 * (1.0 + max_abs(pm.Z))));
    worst_sigma = std::max(worst_sigma, r.sigma_max);
    worst_gap = std::min(worst_gap, r.min_eig_I_minus_ZZbar);
  }
  return detail::make(5, "Siegel membership on 12 catalog maps", worst_ratio, 1.0, all,
                      "max symmetry defect / tolerance = " + detail::fmt(worst_ratio) +
                          ", max sigma = " + detail::fmt(worst_sigma) +
                          ", min eig(I - ZZ*) = " + detail::fmt(worst_gap));
}

inline CriterionResult rauch_formula(const Options& = {}) {
  const SampleGrid grid = SampleGrid::uniform(4096);
  double worst = 0.0;
  bool ratios_ok = true;
  std::string detail;
  for (int m = 0; m <= 2; ++m) {
    const double scale = max_abs(rauch_derivative({m}, 16));
    const double d1 = rauch_fd_defect(m, 1e-3, 16, grid);
    const double d2 = rauch_fd_defect(m, 5e-4, 16, grid);
    const double ratio = d2 / d1;
    ratios_ok = ratios_ok && ratio >= 0.3 && ratio <= 0.7;
    worst = std::max(worst, d1 / scale);
    detail += "m=" + std::to_string(m) + ": defect/|D| = " + detail::fmt(d1 / scale) +
              ", halving ratio = " + detail::fmt(ratio) + "; ";
  }
  return detail::make(6, "Rauch variational formula by finite differences", worst, 0.05, ratios_ok, detail);
}

inline CriterionResult norm_bound(const Options& = {}) {
  const SampleGrid grid = SampleGrid::uniform(4096);
  double worst = -1.0;
  for (const auto& d : smooth_catalog()) {
    const CircleMap map = make_map(d, grid);
    const double k = radial_dilatation(map);
    worst = std::max(worst, operator_norm_estimate(pullback_matrix(map, 16, grid)) - std::sqrt(k + 1.0 / k));
  }
  return detail::make(7, "Operator norm below sqrt(K + 1/K)", worst, 1e-6, true,
                      "max of |T| - sqrt(K + 1/K) = " + detail::fmt(worst));
}

inline CriterionResult quantum_hs(const Options& opt = {}) {
  std::mt19937_64 rng(opt.seed + 7);
  double worst_closed = 0.0;
  bool bracket = true;
  for (int trial = 0; trial < 100; ++trial) {
    const int band = 1 + trial % 16;
    const CircleFunction f = random_real_function(band, rng);
    double closed = 0.0;
    for (int k = 1; k <= band; ++k) closed += 4.0 * (2.0 * k - 1.0) * std::norm(f.coeff(k));
    const double hs = hs_norm(quantum_derivative_matrix(f, 2 * band));
    worst_closed = std::max(worst_closed, std::abs(hs * hs - closed) / closed);
    const HsBracket b = hs_bracket_check(f);
    bracket = bracket && b.lower_ok && b.upper_ok;
  }
  const HsBracket cos_case = hs_bracket_check(CircleFunction::cosine(1, 1));
  const bool attained = cos_case.hs_squared == 2.0 * cos_case.norm_squared;
  return detail::make(8, "Quantum derivative Hilbert-Schmidt norm", worst_closed, 1e-10, bracket && attained,
                      "max relative error against closed form = " + detail::fmt(worst_closed) +
                          "; bracket holds: " + (bracket ? "yes" : "no") +
                          "; cos lower bound attained exactly: " + (attained ? "yes" : "no"));
}

inline CriterionResult kernel_limits(const Options& = {}) {
  const SampleGrid grid = SampleGrid::uniform(4096);
  const std::vector<double> deltas{0.02, 0.01, 0.005};
  double worst_flow = 0.0;
  const std::vector<MapDescriptor> flows{
      MapDescriptor::flow(CircleFunction::sine(1, 1), 0.1),
      MapDescriptor::flow(CircleFunction::sine(2, 2), 0.05),
      MapDescriptor::flow(CircleFunction::cosine(3, 3) + CircleFunction::sine(1, 3, 0.5), 0.05),
      MapDescriptor::rauch_flow(1, 0.02),
  };
  for (const auto& d : flows) {
    const CircleMap h = make_map(d, grid);
    for (double x : {0.0, pi / 3, 2.0, 4.5})
      for (int order = 0; order <= 2; ++order)
        worst_flow = std::max(worst_flow, diagonal_limit(h, order, x, deltas).defect);
  }

  // The Moebius kernel is identically zero, so wide deltas only help.
  const std::vector<double> wide{0.1, 0.05, 0.025};
  double worst_moebius = 0.0;
  for (const LineMoebius& h : {LineMoebius{2.0, 1.0, 1.0, 3.0}, LineMoebius{1.0, -0.5, 0.3, 1.0}})
    for (double x : {0.0, 0.5, 1.5})
      worst_moebius = std::max(worst_moebius, std::abs(diagonal_limit(h, 2, x, wide).limit));
  for (const auto& d : {MapDescriptor::moebius(0.3, 1.0), MapDescriptor::moebius(cplx(0.2, -0.35), 0.4),
                        MapDescriptor::moebius(0.5, 0.0)}) {
    const CircleMap h = make_map(d, grid);
    for (double x : {0.0, 0.7, 3.0})
      worst_moebius =
          std::max(worst_moebius, std::abs(diagonal_limit(h, 2, x, wide, KernelForm::chordal).limit));
  }

  const std::vector<double> fine{0.02, 0.01, 0.005, 0.0025};
  const double exp_defect = std::abs(diagonal_limit(ExpMap{}, 2, 0.3, fine).limit + 1.0 / 12.0);

  const bool side = worst_moebius <= 1e-8 && exp_defect <= 1e-9;
  return detail::make(9, "Welding kernel diagonal limits", worst_flow, 1e-5, side,
                      "max flow defect = " + detail::fmt(worst_flow) + "; max Moebius order-2 limit = " +
                          detail::fmt(worst_moebius) + " (threshold 1e-8); |exp limit + 1/12| = " +
                          detail::fmt(exp_defect) + " (threshold 1e-9)");
}

inline CriterionResult integrability(const Options& opt = {}) {
  const SampleGrid grid = SampleGrid::uniform(4096);
  std::mt19937_64 rng(opt.seed + 10);
  std::vector<CircleFunction> trials{CircleFunction::cosine(1, 8), CircleFunction::sine(1, 8),
                                     CircleFunction::cosine(5, 8) + CircleFunction::sine(8, 8)};
  for (int k = 0; k < 3; ++k) trials.push_back(random_real_function(8, rng));
  double worst = 0.0;
  for (const auto& d : integrability_catalog())
    worst = std::max(worst, integrability_residual(make_map(d, grid), trials, 32, grid));

  // J0 on (cos, sin): Jf = sin, Jg = -cos, so fg - JfJg = sin 2 and
  // J sin 2 = -cos 2, while f Jg + g Jf = -cos^2 + sin^2 = -cos 2.
  const auto f = CircleFunction::cosine(1, 8);
  const auto g = CircleFunction::sine(1, 8);
  const auto lhs = hilbert_transform(product_mod_constants(f, g, 8) -
                                     product_mod_constants(hilbert_transform(f), hilbert_transform(g), 8));
  const auto rhs = product_mod_constants(f, hilbert_transform(g), 8) +
                   product_mod_constants(g, hilbert_transform(f), 8);
  const auto expected = -CircleFunction::cosine(2, 8);
  const double hand = std::max(h_half_norm(lhs - expected), h_half_norm(rhs - expected));
  return detail::make(10, "Quantum integrability of map-sourced structures", worst, 1e-6, hand <= 1e-15,
                      "max residual over " + std::to_string(integrability_catalog().size()) +
                          " maps = " + detail::fmt(worst) + "; hand case deviation = " + detail::fmt(hand));
}

/// Right translation: Z(phi o psi) = siegel_action(T_psi, Z(phi)). The
/// reversed order is evaluated too and must lose.
inline CriterionResult equivariance(const Options& = {}) {
  const SampleGrid grid = SampleGrid::uniform(4096);
  double worst = 0.0;
  double worst_action = 0.0;
  double best_reversed = std::numeric_limits<double>::infinity();
  for (const auto& [phi_d, psi_d] : equivariance_catalog()) {
    const CircleMap phi = make_map(phi_d, grid);
    const CircleMap psi = make_map(psi_d, grid);
    worst = std::max(worst, equivariance_defect(phi, psi, 16, grid));
    const Matrix z_both = period_matrix(compose(phi, psi), 16, grid).Z;
    const Matrix by_psi = siegel_action(pullback_matrix(psi, 16, grid), period_matrix(phi, 16, grid)).Z;
    const Matrix by_phi = siegel_action(pullback_matrix(phi, 16, grid), period_matrix(psi, 16, grid)).Z;
    worst_action = std::max(worst_action, max_abs(z_both - by_psi));
    const double reversed = max_abs(z_both - by_phi);
    if (reversed > 0.0) best_reversed = std::min(best_reversed, reversed);
  }
  // Pairs with commuting factors cannot distinguish the orders; only pairs
  // with a nonzero reversed defect enter best_reversed.
  const bool order_ok = worst_action <= 1e-5 && worst_action < best_reversed;
  return detail::make(11, "Equivariance of the period map", worst, 1e-5, order_ok,
                      "max subspace distance = " + detail::fmt(worst) +
                          "; max |Z(phi o psi) - T_psi . Z(phi)| = " + detail::fmt(worst_action) +
                          "; smallest reversed-order defect = " + detail::fmt(best_reversed));
}

using Criterion = std::function<CriterionResult(const Options&)>;

inline std::vector<Criterion> all_criteria() {
  return {hilbert_suite,   douglas_oracle, symplectic_invariance, moebius_basepoint,
          siegel_catalog,  rauch_formula,  norm_bound,            quantum_hs,
          kernel_limits,   integrability,  equivariance};
}

/// Report-only: integrability residual of a random symmetric Z with sigma_max 0.5.
inline double random_period_integrability(const Options& opt = {}) {
  std::mt19937_64 rng(opt.seed + 11);
  const PeriodMatrix pm = random_siegel_point(32, 0.5, rng);
  const std::vector<CircleFunction> trials{CircleFunction::cosine(1, 8), CircleFunction::sine(1, 8),
                                           CircleFunction::cosine(3, 8), CircleFunction::sine(5, 8)};
  return integrability_residual(pm, trials, 32, SampleGrid::uniform(4096));
}

}  // namespace hhp::suite
