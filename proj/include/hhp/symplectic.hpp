#pragma once

#include <cmath>
#include <complex>
#include <optional>

#include "hhp/fourier.hpp"

namespace hhp {

/// How S(f, g) is evaluated: from coefficients, or as (1/2pi) of the
/// contour integral of f dg by trapezoid with a spectral derivative of g.
struct FormMode {
  std::optional<SampleGrid> quadrature;

  static FormMode fourier() { return {}; }
  static FormMode quadrature_on(const SampleGrid& grid) { return {grid}; }
};

namespace detail {

inline cplx symplectic_fourier(const CircleFunction& f, const CircleFunction& g) {
  const int n_max = std::min(f.bandlimit(), g.bandlimit());
  if (f.is_real() && g.is_real()) {
    // Pairing n with -n gives 2n Im(c_n(f) conj(c_n(g))): real, and exactly
    // antisymmetric under f <-> g.
    double sum = 0.0;
    for (int n = 1; n <= n_max; ++n) {
      const cplx a = f.coeff(n);
      const cplx b = g.coeff(n);
      sum += 2.0 * n * (a.imag() * b.real() - a.real() * b.imag());
    }
    return {sum, 0.0};
  }
  cplx sum{};
  for (int n = 1; n <= n_max; ++n)
    sum += static_cast<double>(n) * (f.coeff(n) * g.coeff(-n) - f.coeff(-n) * g.coeff(n));
  return cplx(0.0, -1.0) * sum;
}

inline cplx symplectic_quadrature(const CircleFunction& f, const CircleFunction& g,
                                  const SampleGrid& grid) {
  const int needed = 2 * std::max(f.bandlimit(), g.bandlimit()) + 1;
  if (grid.size() < static_cast<std::size_t>(needed))
    throw ValidationError("quadrature grid too small for the product f dg");
  const auto fv = synthesize(f, grid);
  const auto dg = synthesize(g.derivative(), grid);
  cplx sum{};
  for (std::size_t j = 0; j < grid.size(); ++j) sum += fv[j] * dg[j];
  sum /= static_cast<double>(grid.size());
  if (f.is_real() && g.is_real()) sum = cplx(sum.real(), 0.0);
  return sum;
}

}  // namespace detail

/// Canonical symplectic form, extended complex-bilinearly:
///   S(f, g) = -i sum_{n != 0} n c_n(f) c_{-n}(g) = (1/2pi) int f dg.
inline cplx symplectic_form(const CircleFunction& f, const CircleFunction& g,
                            const FormMode& mode = FormMode::fourier()) {
  if (mode.quadrature) return detail::symplectic_quadrature(f, g, *mode.quadrature);
  return detail::symplectic_fourier(f, g);
}

/// |S(f, Jg) - <f, g>| for real f, g; zero up to rounding.
inline double compatibility_defect(const CircleFunction& f, const CircleFunction& g) {
  if (!f.is_real() || !g.is_real()) throw ValidationError("compatibility_defect needs real f and g");
  return std::abs(symplectic_form(f, hilbert_transform(g)) - inner_product(f, g));
}

/// i S(f+, conj(f+)), which equals ||f+||^2 on W+.
inline double polarization_positivity(const CircleFunction& f_plus) {
  if (!in_w_plus(f_plus)) throw ValidationError("polarization_positivity needs a W+ element");
  return (cplx(0.0, 1.0) * symplectic_form(f_plus, conjugate(f_plus))).real();
}

}  // namespace hhp
