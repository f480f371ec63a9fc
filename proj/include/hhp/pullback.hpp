#pragma once

// The composition operator V_phi f = f o phi (mean removed) and its matrix on
// W+ (+) W- in the orthonormal basis eps_k = e^{ik theta}/sqrt(k), k >= 1, and
// conjugates. Since V_phi is the complexification of a real operator the full
// matrix is [[A, B], [conj(B), conj(A)]]:
//
//   A[p][q] = sqrt(p/q) * (1/2pi) int w^q e^{-ip theta} dtheta      (W+ -> W+)
//   B[r][s] = sqrt(r/s) * (1/2pi) int w^{-s} e^{-ir theta} dtheta   (W- -> W+)
//
// with w(e^{i theta}) = e^{i L(theta)}.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "hhp/circle_map.hpp"
#include "hhp/error.hpp"
#include "hhp/fourier.hpp"
#include "hhp/symplectic.hpp"

namespace hhp {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Truncated real-structured operator on W+ (+) W-. A and B may be
/// rectangular (rows x cols); period-matrix work uses square blocks.
struct BlockOperator {
  Matrix A;
  Matrix B;

  int rows() const { return static_cast<int>(A.rows()); }
  int cols() const { return static_cast<int>(A.cols()); }
  bool square() const { return A.rows() == A.cols(); }
  int cutoff() const {
    if (!square()) throw ValidationError("cutoff of a rectangular block operator");
    return rows();
  }

  static BlockOperator identity(int n) {
    return {Matrix::Identity(n, n), Matrix::Zero(n, n)};
  }

  /// [[A, B], [conj(B), conj(A)]].
  Matrix full() const {
    Matrix t(2 * A.rows(), 2 * A.cols());
    t << A, B, B.conjugate(), A.conjugate();
    return t;
  }

  /// Coordinates (w+, w-) -> (A w+ + B w-, conj(B) w+ + conj(A) w-).
  std::pair<Vector, Vector> apply(const Vector& plus, const Vector& minus) const {
    return {A * plus + B * minus, B.conjugate() * plus + A.conjugate() * minus};
  }

  friend BlockOperator operator*(const BlockOperator& s, const BlockOperator& t) {
    if (s.cols() != t.rows()) throw ValidationError("block operator shapes do not chain");
    return {s.A * t.A + s.B * t.B.conjugate(), s.A * t.B + s.B * t.A.conjugate()};
  }
};

/// Refuses grids on which modes * degree * lift bandwidth exceeds M/2.
inline void check_aliasing(const CircleMap& map, int modes, const SampleGrid& grid) {
  const long need = static_cast<long>(modes) * map.degree() * map.bandwidth();
  if (need > static_cast<long>(grid.size() / 2))
    throw AliasingError("grid of " + std::to_string(grid.size()) + " nodes is too coarse: " +
                        std::to_string(modes) + " modes x degree " + std::to_string(map.degree()) +
                        " x lift bandwidth " + std::to_string(map.bandwidth()) + " exceeds M/2");
}

namespace detail {

/// One FFT per column; returns (1/M) sum_j s_j e^{-i p theta_j} for p = 1..rows.
inline Vector positive_coefficients(std::vector<cplx> samples, const SampleGrid& grid, int rows,
                                    Eigen::FFT<double>& fft) {
  std::vector<cplx> spectrum;
  fft.fwd(spectrum, samples);
  const double inv_m = 1.0 / static_cast<double>(grid.size());
  Vector out(rows);
  for (int p = 1; p <= rows; ++p)
    out(p - 1) = spectrum[static_cast<std::size_t>(p)] * inv_m * std::polar(1.0, -p * grid.offset());
  return out;
}

}  // namespace detail

/// V_phi f on the grid, analyzed to `out_bandlimit` modes (mean dropped).
inline CircleFunction pullback_function(const CircleMap& map, const CircleFunction& f,
                                        const SampleGrid& grid, int out_bandlimit) {
  check_aliasing(map, f.bandlimit(), grid);
  std::vector<cplx> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) values[j] = f(map.lift(grid.theta(j)));
  if (f.is_real()) {
    std::vector<double> re(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) re[j] = values[j].real();
    return analyze(re, grid, out_bandlimit);
  }
  return analyze(values, grid, out_bandlimit);
}

/// Default output bandlimit: every mode the grid resolves.
inline CircleFunction pullback_function(const CircleMap& map, const CircleFunction& f,
                                        const SampleGrid& grid) {
  return pullback_function(map, f, grid, static_cast<int>((grid.size() - 1) / 2));
}

/// Rectangular blocks: rows p, r = 1..rows, columns q, s = 1..cols.
inline BlockOperator pullback_blocks(const CircleMap& map, int rows, int cols, const SampleGrid& grid) {
  if (map.degree() != 1) throw ValidationError("pullback matrix needs a degree-1 map");
  if (rows < 1 || cols < 1) throw ValidationError("pullback matrix needs positive dimensions");
  if (2 * static_cast<std::size_t>(std::max(rows, cols)) + 1 > grid.size())
    throw ValidationError("grid too small for the requested cutoff");
  // Columns are the pulled-back modes; rows only read resolved coefficients.
  check_aliasing(map, cols, grid);

  const std::size_t m = grid.size();
  std::vector<double> lift(m);
  for (std::size_t j = 0; j < m; ++j)
    lift[j] = grid == map.grid() ? map.samples()[j] : map.lift(grid.theta(j));

  BlockOperator t{Matrix(rows, cols), Matrix(rows, cols)};
  Eigen::FFT<double> fft;
  std::vector<cplx> wq(m);
  std::vector<cplx> wmq(m);
  for (int q = 1; q <= cols; ++q) {
    for (std::size_t j = 0; j < m; ++j) {
      wq[j] = std::polar(1.0, q * lift[j]);
      wmq[j] = std::conj(wq[j]);
    }
    const Vector a = detail::positive_coefficients(wq, grid, rows, fft);
    const Vector b = detail::positive_coefficients(wmq, grid, rows, fft);
    for (int p = 1; p <= rows; ++p) {
      const double scale = std::sqrt(static_cast<double>(p) / q);
      t.A(p - 1, q - 1) = scale * a(p - 1);
      t.B(p - 1, q - 1) = scale * b(p - 1);
    }
  }
  return t;
}

inline BlockOperator pullback_matrix(const CircleMap& map, int cutoff, const SampleGrid& grid) {
  return pullback_blocks(map, cutoff, cutoff, grid);
}

/// Largest singular value of the full complexified matrix: the top
/// eigenvalue of T* T by a dense Hermitian solve. Power iteration stalls on
/// the clustered spectra of near-unitary blocks.
inline double operator_norm_estimate(const BlockOperator& t) {
  const Matrix full = t.full();
  if (full.size() == 0) return 0.0;
  const Matrix gram = full.adjoint() * full;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
}

/// |S(V f, V g) - k S(f, g)| for real f, g and a map of degree k.
inline double invariance_defect(const CircleMap& map, const CircleFunction& f, const CircleFunction& g,
                                const SampleGrid& grid) {
  if (!f.is_real() || !g.is_real()) throw ValidationError("invariance_defect needs real f and g");
  const CircleFunction vf = pullback_function(map, f, grid);
  const CircleFunction vg = pullback_function(map, g, grid);
  const double lhs = symplectic_form(vf, vg).real();
  const double rhs = map.degree() * symplectic_form(f, g).real();
  return std::abs(lhs - rhs);
}

/// J0 = diag(-i, +i): the Hilbert transform in (W+, W-) coordinates.
inline BlockOperator hilbert_block(int n) {
  return {cplx(0.0, -1.0) * Matrix::Identity(n, n), Matrix::Zero(n, n)};
}

/// T J0 T^{-1} for a square block operator; the complex structure whose
/// -i eigenspace is T(W+).
inline BlockOperator conjugated_structure(const BlockOperator& t) {
  const int n = t.cutoff();
  const Matrix full = t.full();
  Matrix j0 = Matrix::Zero(2 * n, 2 * n);
  j0.topLeftCorner(n, n).diagonal().setConstant(cplx(0.0, -1.0));
  j0.bottomRightCorner(n, n).diagonal().setConstant(cplx(0.0, 1.0));
  // (T J0) T^{-1} = X with X T = T J0  <=>  T^T X^T = (T J0)^T.
  const Matrix tj = full * j0;
  const Matrix x = full.transpose().partialPivLu().solve(tj.transpose()).transpose();
  return {x.topLeftCorner(n, n), x.topRightCorner(n, n)};
}

}  // namespace hhp
