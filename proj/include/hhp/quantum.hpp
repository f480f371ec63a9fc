#pragma once

// Quantum calculus on the circle: d^Q(f) = [J, M_f] in the exponential basis
// of L^2, its Hilbert-Schmidt norm, and the welding kernel
// K(x, y) = log[(h(x) - h(y)) / (x - y)] with its first two derivative
// kernels and their diagonal limits log h', h''/(2h') and S(h)/6.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hhp/circle_map.hpp"
#include "hhp/error.hpp"
#include "hhp/fourier.hpp"
#include "hhp/period.hpp"
#include "hhp/pullback.hpp"

namespace hhp {

/// Matrix of d^Q(f) on span{e^{in theta} : |n| <= N}; row/column m sits at m + N.
struct QuantumOperator {
  Matrix entries;
  int cutoff = 0;
  int source_bandlimit = 0;

  cplx entry(int m, int n) const { return entries(m + cutoff, n + cutoff); }
};

inline int sgn(int n) { return (n > 0) - (n < 0); }

/// Entry (m, n) = -i (sgn m - sgn n) c_{m-n}(f), with sgn 0 = 0.
inline QuantumOperator quantum_derivative_matrix(const CircleFunction& f, int cutoff) {
  if (cutoff < f.bandlimit())
    throw ValidationError("ambient cutoff " + std::to_string(cutoff) + " is below the bandlimit " +
                          std::to_string(f.bandlimit()));
  const int size = 2 * cutoff + 1;
  QuantumOperator op{Matrix::Zero(size, size), cutoff, f.bandlimit()};
  for (int m = -cutoff; m <= cutoff; ++m) {
    for (int n = -cutoff; n <= cutoff; ++n) {
      const int jump = sgn(m) - sgn(n);
      if (jump == 0) continue;
      const cplx c = f.coeff(m - n);
      op.entries(m + cutoff, n + cutoff) = cplx(0.0, -static_cast<double>(jump)) * c;
    }
  }
  return op;
}

/// Frobenius norm; the cutoff must be at least twice the source bandlimit
/// so that no nonzero entry falls outside the matrix.
inline double hs_norm(const QuantumOperator& op) {
  if (op.cutoff < 2 * op.source_bandlimit)
    throw ValidationError("cutoff too small: HS norm needs cutoff >= 2 * bandlimit");
  return op.entries.norm();
}

struct HsBracket {
  double hs_squared = 0.0;
  double norm_squared = 0.0;  ///< ||f||^2 in H^{1/2}
  bool lower_ok = false;      ///< 2 ||f||^2 <= HS^2
  bool upper_ok = false;      ///< HS^2 <= 4 ||f||^2
};

/// For real f, HS^2 = 4 sum_{k>=1} (2k - 1)|c_k|^2 sits between 2||f||^2 and
/// 4||f||^2; the lower end is attained by the first mode alone.
inline HsBracket hs_bracket_check(const CircleFunction& f) {
  if (!f.is_real()) throw ValidationError("hs_bracket_check needs a real function");
  const double hs = hs_norm(quantum_derivative_matrix(f, 2 * f.bandlimit()));
  HsBracket b;
  b.hs_squared = hs * hs;
  b.norm_squared = h_half_norm_squared(f);
  const double slack = 1e-13 * std::max(b.hs_squared, b.norm_squared);
  b.lower_ok = 2.0 * b.norm_squared <= b.hs_squared + slack;
  b.upper_ok = b.hs_squared <= 4.0 * b.norm_squared + slack;
  return b;
}

// ---------------------------------------------------------------------------
// Welding kernels.

/// A real map of the line with derivatives of order 1..3.
template <class H>
concept SmoothLineMap = requires(const H& h, double x, int k) {
  { h.value(x) } -> std::convertible_to<double>;
  { h.derivative(x, k) } -> std::convertible_to<double>;
};

/// The lift of a circle map viewed as a function of the line.
struct LiftView {
  const CircleMap* map;
  double value(double x) const { return map->lift(x); }
  double derivative(double x, int k) const { return map->derivative(x, k); }
  /// Spectral differentiation of b chopped modes loses about b^2 ulps.
  double derivative_noise() const {
    const double b = static_cast<double>(map->bandwidth());
    return std::numeric_limits<double>::epsilon() * b * b;
  }
};

/// h(x) - h(y), through the map's own cancellation-free form when it has one.
template <SmoothLineMap H>
double increment(const H& h, double x, double y) {
  if constexpr (requires { h.difference(x, y); })
    return h.difference(x, y);
  else
    return h.value(x) - h.value(y);
}

/// Relative error of h' (zero-cost default: exact up to rounding).
template <SmoothLineMap H>
double derivative_noise(const H& h) {
  if constexpr (requires { h.derivative_noise(); })
    return h.derivative_noise();
  else
    return 0.0;
}

struct ExpMap {
  double value(double x) const { return std::exp(x); }
  double derivative(double x, int) const { return std::exp(x); }
  double difference(double x, double y) const { return std::exp(y) * std::expm1(x - y); }
};

/// x -> (a x + b) / (c x + d) on an interval avoiding the pole.
struct LineMoebius {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double value(double x) const { return (a * x + b) / (c * x + d); }
  double difference(double x, double y) const { return (a * d - b * c) * (x - y) / ((c * x + d) * (c * y + d)); }
  double derivative(double x, int k) const {
    const double det = a * d - b * c;
    const double u = c * x + d;
    switch (k) {
      case 1: return det / (u * u);
      case 2: return -2.0 * c * det / (u * u * u);
      case 3: return 6.0 * c * c * det / (u * u * u * u);
      default: throw ValidationError("LineMoebius derivative order must be 1..3");
    }
  }
};

/// `line` uses the kernels as written on the real line; `chordal` replaces
/// (x - y) by 2 sin((x - y)/2), the circle's own invariant form, whose
/// second kernel vanishes identically on circle Moebius maps.
enum class KernelForm { line, chordal };

template <SmoothLineMap H>
double kernel_value(const H& h, int order, double x, double y, KernelForm form = KernelForm::line) {
  if (x == y) throw ValidationError("kernel is singular on the diagonal x = y");
  const double dh = increment(h, x, y);
  const double dx = x - y;
  if (form == KernelForm::line) {
    switch (order) {
      case 0: return std::log(dh / dx);
      case 1: return h.derivative(x, 1) / dh - 1.0 / dx;
      case 2: return h.derivative(x, 1) * h.derivative(y, 1) / (dh * dh) - 1.0 / (dx * dx);
      default: throw ValidationError("kernel order must be 0, 1 or 2");
    }
  }
  const double sh = 2.0 * std::sin(0.5 * dh);
  const double sx = 2.0 * std::sin(0.5 * dx);
  switch (order) {
    case 0: return std::log(sh / sx);
    case 1: return 0.5 * h.derivative(x, 1) / std::tan(0.5 * dh) - 0.5 / std::tan(0.5 * dx);
    case 2: return h.derivative(x, 1) * h.derivative(y, 1) / (sh * sh) - 1.0 / (sx * sx);
    default: throw ValidationError("kernel order must be 0, 1 or 2");
  }
}

inline double schwarzian(double d1, double d2, double d3) {
  const double r = d2 / d1;
  return d3 / d1 - 1.5 * r * r;
}

/// Classical limits: log h', h''/(2h'), S(h)/6; the chordal form adds
/// (h'^2 - 1)/12 at second order.
template <SmoothLineMap H>
double classical_value(const H& h, int order, double x, KernelForm form = KernelForm::line) {
  const double d1 = h.derivative(x, 1);
  if (!(d1 > 0.0)) throw ValidationError("kernel needs an increasing map (h' > 0)");
  switch (order) {
    case 0: return std::log(d1);
    case 1: return h.derivative(x, 2) / (2.0 * d1);
    case 2: {
      const double s = schwarzian(d1, h.derivative(x, 2), h.derivative(x, 3)) / 6.0;
      return form == KernelForm::line ? s : s + (d1 * d1 - 1.0) / 12.0;
    }
    default: throw ValidationError("kernel order must be 0, 1 or 2");
  }
}

/// Polynomial (Neville) extrapolation of (delta_i, v_i) to delta = 0.
inline double extrapolate_to_zero(std::span<const double> deltas, std::span<const double> values) {
  std::vector<double> p(values.begin(), values.end());
  const std::size_t n = p.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = 0; i + level < n; ++i)
      p[i] = (deltas[i + level] * p[i] - deltas[i] * p[i + 1]) / (deltas[i + level] - deltas[i]);
  return p[0];
}

struct DiagonalLimit {
  int order = 0;
  double x = 0.0;
  std::vector<double> deltas;
  std::vector<double> values;  ///< kernel at y = x + direction * delta
  double limit = 0.0;
  double classical = 0.0;
  double defect = 0.0;
};

/// Richardson-extrapolated diagonal limit along y = x + direction * delta.
template <SmoothLineMap H>
DiagonalLimit diagonal_limit(const H& h, int order, double x, std::span<const double> deltas,
                             KernelForm form = KernelForm::line, int direction = 1) {
  if (deltas.size() < 2) throw ValidationError("diagonal_limit needs at least two deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw ValidationError("deltas must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw ValidationError("deltas must be strictly decreasing");
  }
  DiagonalLimit out;
  out.order = order;
  out.x = x;
  out.deltas.assign(deltas.begin(), deltas.end());
  for (double d : deltas) out.values.push_back(kernel_value(h, order, x, x + direction * d, form));

  // Successive changes must shrink, otherwise the deltas are outside the
  // asymptotic regime and extrapolation would be meaningless. Changes below
  // the rounding floor of the cancelling 1/delta^order terms, inflated by the
  // accuracy of h', do not count.
  const double smallest = out.deltas.back();
  const double floor = (256.0 * std::numeric_limits<double>::epsilon() + 4.0 * derivative_noise(h)) *
                       std::max(1.0, std::abs(out.values.back())) /
                       std::pow(smallest, static_cast<double>(order));
  for (std::size_t i = 2; i < out.values.size(); ++i) {
    const double prev = std::abs(out.values[i - 1] - out.values[i - 2]);
    const double next = std::abs(out.values[i] - out.values[i - 1]);
    if (next > prev + floor)
      throw ValidationError("deltas too large: kernel values do not converge monotonically");
  }
  out.limit = extrapolate_to_zero(out.deltas, out.values);
  out.classical = classical_value(h, order, x, form);
  out.defect = std::abs(out.limit - out.classical);
  return out;
}

namespace detail {

inline void require_kernel_map(const CircleMap& h) {
  if (h.degree() != 1) throw ValidationError("kernels need a degree-1 map");
  if (!h.smooth()) throw ValidationError("kernels need a smooth descriptor");
}

}  // namespace detail

inline double kernel_eval(const CircleMap& h, int order, double x, double y,
                          KernelForm form = KernelForm::line) {
  detail::require_kernel_map(h);
  if (std::abs(std::remainder(x - y, two_pi)) == 0.0)
    throw ValidationError("kernel is singular at x = y (mod 2 pi)");
  return kernel_value(LiftView{&h}, order, x, y, form);
}

inline DiagonalLimit diagonal_limit(const CircleMap& h, int order, double x, std::span<const double> deltas,
                                    KernelForm form = KernelForm::line, int direction = 1) {
  detail::require_kernel_map(h);
  return diagonal_limit(LiftView{&h}, order, x, deltas, form, direction);
}

/// J^h = T_h J0 T_h^{-1}: the Hilbert transform transported by pullback.
inline BlockOperator deformed_structure(const CircleMap& h, int cutoff, const SampleGrid& grid) {
  const BlockOperator t = pullback_matrix(h, cutoff, grid);
  const double cond = condition_number(t.A);
  if (!(cond <= max_condition_of_A))
    throw ConditioningError("pullback block A is ill-conditioned (cond = " + std::to_string(cond) + ")");
  return conjugated_structure(t);
}

}  // namespace hhp
