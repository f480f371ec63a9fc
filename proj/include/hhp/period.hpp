#pragma once

// The period mapping at finite truncation: a degree-1 circle map phi gives the
// polarizing subspace W+ o phi = V_phi(W+), the graph of Z = conj(B) A^{-1}.
// In the basis eps_k the S-symmetry of Z is plain matrix symmetry and the
// Siegel disc condition is I - Z conj(Z) > 0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hhp/circle_map.hpp"
#include "hhp/error.hpp"
#include "hhp/fourier.hpp"
#include "hhp/pullback.hpp"

namespace hhp {

inline constexpr double max_condition_of_A = 1e12;

struct PeriodMatrix {
  Matrix Z;
  std::optional<MapDescriptor> source;
  std::optional<double> condition_of_A;

  int cutoff() const { return static_cast<int>(Z.rows()); }
};

struct SiegelReport {
  double symmetry_defect = 0.0;
  double sigma_max = 0.0;
  double min_eig_I_minus_ZZbar = 1.0;
  std::optional<double> condition_of_A;
  bool member = false;
};

struct BeltramiMonomial {
  int m = 0;  ///< direction nu(z) = zbar^m on the disc
};

/// max_{ij} |M_ij|.
inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline double condition_number(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

/// Z = conj(B) A^{-1}, solved as A^T Z^T = conj(B)^T; A is never inverted.
inline PeriodMatrix period_matrix_from_blocks(const BlockOperator& t) {
  const int n = t.cutoff();
  const double cond = condition_number(t.A);
  if (!(cond <= max_condition_of_A))
    throw ConditioningError("block A is ill-conditioned (cond = " + std::to_string(cond) +
                            ") at cutoff " + std::to_string(n));
  const Matrix z = t.A.transpose().fullPivLu().solve(t.B.conjugate().transpose()).transpose();
  return {z, std::nullopt, cond};
}

inline PeriodMatrix period_matrix(const CircleMap& map, int cutoff, const SampleGrid& grid) {
  PeriodMatrix pm = period_matrix_from_blocks(pullback_matrix(map, cutoff, grid));
  pm.source = map.descriptor();
  return pm;
}

/// Symmetry defect, sigma_max and lambda_min(I - Z Z*). Membership needs all
/// three: defect <= tol, sigma_max < 1, lambda_min > 0.
inline SiegelReport siegel_membership(const PeriodMatrix& pm, double tol) {
  const Matrix& z = pm.Z;
  SiegelReport r;
  r.condition_of_A = pm.condition_of_A;
  if (z.size() == 0) {
    r.member = true;
    return r;
  }
  r.symmetry_defect = max_abs(z - z.transpose());
  r.sigma_max = spectral_norm(z);
  const Matrix gap = Matrix::Identity(z.rows(), z.cols()) - z * z.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (gap + gap.adjoint()), Eigen::EigenvaluesOnly);
  r.min_eig_I_minus_ZZbar = eig.eigenvalues()(0);
  r.member = r.symmetry_defect <= tol && r.sigma_max < 1.0 && r.min_eig_I_minus_ZZbar > 0.0;
  return r;
}

/// Standard action on the Siegel disc: (conj(B) + conj(A) Z)(A + B Z)^{-1}.
inline PeriodMatrix siegel_action(const BlockOperator& t, const PeriodMatrix& pm) {
  const int n = t.cutoff();
  if (pm.cutoff() != n) throw ValidationError("siegel_action: cutoff mismatch");
  const Matrix den = t.A + t.B * pm.Z;
  const Matrix num = t.B.conjugate() + t.A.conjugate() * pm.Z;
  const double cond = condition_number(den);
  if (!(cond <= max_condition_of_A))
    throw ConditioningError("A + B Z is singular to working precision (cond = " + std::to_string(cond) + ")");
  const Matrix z = den.transpose().fullPivLu().solve(num.transpose()).transpose();
  return {z, std::nullopt, std::nullopt};
}

/// Columns of [I; Z]: a basis of the graph of Z in (W+, W-) coordinates.
inline Matrix graph_basis(const Matrix& z) {
  Matrix g(2 * z.rows(), z.cols());
  g << Matrix::Identity(z.rows(), z.cols()), z;
  return g;
}

/// sin of the largest principal angle between the column spans of x and y.
inline double principal_angle_distance(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw ValidationError("subspace shapes differ");
  auto orthonormal = [](const Matrix& m) -> Matrix {
    Eigen::HouseholderQR<Matrix> qr(m);
    return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
  };
  const Matrix qx = orthonormal(x);
  const Matrix qy = orthonormal(y);
  return spectral_norm(qy - qx * (qx.adjoint() * qy));
}

/// Distance between graph(Z(phi o psi)) and T_psi graph(Z(phi)). Pullback is
/// contravariant, V_{phi o psi} = V_psi V_phi, so W_{phi o psi} = V_psi(W_phi).
inline double equivariance_defect(const CircleMap& phi, const CircleMap& psi, int cutoff,
                                  const SampleGrid& grid) {
  if (phi.degree() != 1 || psi.degree() != 1) throw ValidationError("equivariance needs degree-1 maps");
  const CircleMap both = compose(phi, psi);
  const PeriodMatrix z_both = period_matrix(both, cutoff, grid);
  const PeriodMatrix z_phi = period_matrix(phi, cutoff, grid);
  const BlockOperator t_psi = pullback_matrix(psi, cutoff, grid);
  return principal_angle_distance(graph_basis(z_both.Z), t_psi.full() * graph_basis(z_phi.Z));
}

/// First variation of the period map in the direction zbar^m:
///   (1/pi) sqrt(rs) iint_disc zbar^m z^{r+s-2} dx dy = sqrt(rs)/(m+1) on r+s = m+2.
inline Matrix rauch_derivative(const BeltramiMonomial& nu, int cutoff) {
  if (nu.m < 0) throw ValidationError("Beltrami monomial needs m >= 0");
  if (cutoff < 1) throw ValidationError("cutoff must be positive");
  Matrix d = Matrix::Zero(cutoff, cutoff);
  for (int r = 1; r <= cutoff; ++r) {
    const int s = nu.m + 2 - r;
    if (s >= 1 && s <= cutoff) d(r - 1, s - 1) = std::sqrt(static_cast<double>(r) * s) / (r + s - 1);
  }
  return d;
}

/// Entries with r + s <= min(N, 10) that the finite-difference check compares.
inline int rauch_window(int cutoff) { return std::min(cutoff, 10); }

/// max over r + s <= min(N, 10) of |Z(rauch_flow(m, eps))/eps - dPi(zbar^m)|.
inline double rauch_fd_defect(int m, double eps, int cutoff, const SampleGrid& grid) {
  if (!(eps > 0.0)) throw ValidationError("rauch_fd_defect needs eps > 0");
  const CircleMap map = make_map(MapDescriptor::rauch_flow(m, eps), grid);
  const PeriodMatrix pm = period_matrix(map, cutoff, grid);
  const Matrix d = rauch_derivative({m}, cutoff);
  const int window = rauch_window(cutoff);
  double worst = 0.0;
  for (int r = 1; r <= cutoff; ++r)
    for (int s = 1; s <= cutoff; ++s)
      if (r + s <= window) worst = std::max(worst, std::abs(pm.Z(r - 1, s - 1) / eps - d(r - 1, s - 1)));
  return worst;
}

// ---------------------------------------------------------------------------
// Complex structures and the multiplication-closed (integrability) test.

/// A complex structure on the truncated space, as a 2N x 2N matrix in
/// (W+, W-) coordinates.
struct ComplexStructure {
  Matrix J;
  int cutoff() const { return static_cast<int>(J.rows() / 2); }
};

/// J with -i eigenspace graph(Z) and +i eigenspace its conjugate, graph of
/// conj(Z) read from W- to W+.
inline ComplexStructure structure_from_period(const Matrix& z) {
  const Eigen::Index n = z.rows();
  Matrix g(2 * n, 2 * n);
  g << Matrix::Identity(n, n), z.conjugate(), z, Matrix::Identity(n, n);
  Matrix d = Matrix::Zero(2 * n, 2 * n);
  d.topLeftCorner(n, n).diagonal().setConstant(cplx(0.0, -1.0));
  d.bottomRightCorner(n, n).diagonal().setConstant(cplx(0.0, 1.0));
  const double cond = condition_number(g);
  if (!(cond <= max_condition_of_A))
    throw ConditioningError("graph basis of Z is singular (sigma_max(Z) too close to 1)");
  // J = G D G^{-1}  <=>  G^T J^T = (G D)^T.
  const Matrix gd = g * d;
  return {g.transpose().fullPivLu().solve(gd.transpose()).transpose()};
}

inline ComplexStructure structure_from_map(const CircleMap& map, int cutoff, const SampleGrid& grid) {
  const BlockOperator t = pullback_matrix(map, cutoff, grid);
  const double cond = condition_number(t.A);
  if (!(cond <= max_condition_of_A)) throw ConditioningError("pullback block A is ill-conditioned");
  return {conjugated_structure(t).full()};
}

/// Real function of bandlimit <= N as (w+, w-) coordinates, w+_k = sqrt(k) c_k.
inline Vector to_coordinates(const CircleFunction& f, int cutoff) {
  Vector v(2 * cutoff);
  for (int k = 1; k <= cutoff; ++k) {
    v(k - 1) = std::sqrt(static_cast<double>(k)) * f.coeff(k);
    v(cutoff + k - 1) = std::sqrt(static_cast<double>(k)) * f.coeff(-k);
  }
  return v;
}

inline CircleFunction from_coordinates(const Vector& v, bool real) {
  const int n = static_cast<int>(v.size() / 2);
  CircleFunction f(n, false);
  for (int k = 1; k <= n; ++k) {
    const double s = std::sqrt(static_cast<double>(k));
    f.at(k) = v(k - 1) / s;
    f.at(-k) = v(n + k - 1) / s;
  }
  if (!real) return f;
  CircleFunction r(n, true);
  for (int k = 1; k <= n; ++k) {
    const cplx c = 0.5 * (f.coeff(k) + std::conj(f.coeff(-k)));
    r.at(k) = c;
    r.at(-k) = std::conj(c);
  }
  return r;
}

inline CircleFunction apply_structure(const ComplexStructure& j, const CircleFunction& f) {
  const int n = j.cutoff();
  return from_coordinates(j.J * to_coordinates(f.with_bandlimit(n), n), f.is_real());
}

/// Pointwise product modulo constants, re-truncated to `cutoff`. Formed on a
/// grid of 8N nodes, which is exact for two bandlimit-N trig polynomials.
inline CircleFunction product_mod_constants(const CircleFunction& f, const CircleFunction& g, int cutoff) {
  const int band = std::max({f.bandlimit(), g.bandlimit(), cutoff});
  const SampleGrid grid = SampleGrid::uniform(8 * static_cast<std::size_t>(band));
  const auto fv = synthesize(f, grid);
  const auto gv = synthesize(g, grid);
  std::vector<cplx> prod(grid.size());
  for (std::size_t j = 0; j < prod.size(); ++j) prod[j] = fv[j] * gv[j];
  if (f.is_real() && g.is_real()) {
    std::vector<double> re(prod.size());
    for (std::size_t j = 0; j < prod.size(); ++j) re[j] = prod[j].real();
    return analyze(re, grid, cutoff);
  }
  return analyze(prod, grid, cutoff);
}

/// || J[fg - (Jf)(Jg)] - f(Jg) - g(Jf) || / (||f|| ||g||) for one pair.
inline double integrability_pair_residual(const ComplexStructure& j, const CircleFunction& f,
                                          const CircleFunction& g) {
  const int n = j.cutoff();
  const CircleFunction jf = apply_structure(j, f);
  const CircleFunction jg = apply_structure(j, g);
  const CircleFunction lhs =
      apply_structure(j, product_mod_constants(f, g, n) - product_mod_constants(jf, jg, n));
  const CircleFunction rhs = product_mod_constants(f, jg, n) + product_mod_constants(g, jf, n);
  return h_half_norm(lhs - rhs) / (h_half_norm(f) * h_half_norm(g));
}

using StructureSource = std::variant<CircleMap, PeriodMatrix>;

/// Worst pair residual of the multiplication-closed condition over all
/// unordered pairs (including f = g) of nonzero real trial functions.
inline double integrability_residual(const StructureSource& source, std::span<const CircleFunction> trials,
                                     int cutoff, const SampleGrid& grid) {
  const ComplexStructure j = std::visit(
      detail::overloaded{
          [&](const CircleMap& map) { return structure_from_map(map, cutoff, grid); },
          [&](const PeriodMatrix& pm) { return structure_from_period(pm.Z); },
      },
      source);
  const int n = j.cutoff();
  for (const auto& f : trials) {
    if (!f.is_real()) throw ValidationError("integrability trial functions must be real");
    for (int k = n / 2 + 1; k <= f.bandlimit(); ++k)
      if (f.coeff(k) != cplx{}) throw ValidationError("trial function bandlimit exceeds N/2");
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < trials.size(); ++a) {
    if (trials[a].is_zero()) continue;
    for (std::size_t b = a; b < trials.size(); ++b) {
      if (trials[b].is_zero()) continue;
      worst = std::max(worst, integrability_pair_residual(j, trials[a], trials[b]));
    }
  }
  return worst;
}

/// Random symmetric Z with the given largest singular value.
template <class Rng>
PeriodMatrix random_siegel_point(int cutoff, double sigma, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix x(cutoff, cutoff);
  for (int i = 0; i < cutoff; ++i)
    for (int j = 0; j < cutoff; ++j) x(i, j) = cplx(normal(rng), normal(rng));
  Matrix z = x + x.transpose();
  z *= sigma / spectral_norm(z);
  return {z, std::nullopt, std::nullopt};
}

}  // namespace hhp
